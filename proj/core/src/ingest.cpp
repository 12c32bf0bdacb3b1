#include "spacex/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <map>
#include <set>

#include "spacex/complexity.hpp"
#include "spacex/csv.hpp"
#include "spacex/errors.hpp"
#include "spacex/subprocess.hpp"
#include "spacex/text.hpp"

namespace spacex::ingest {

namespace {

std::vector<std::string> git_args(const std::string& repo, std::vector<std::string> rest) {
  std::vector<std::string> args{"git", "-C", repo, "-c", "core.quotepath=false"};
  for (auto& a : rest) args.push_back(std::move(a));
  return args;
}

void ensure_repository(const std::string& repo_path) {
  std::error_code ec;
  if (!std::filesystem::exists(repo_path, ec))
    throw NotARepository("path does not exist: " + repo_path);
  const auto probe = run_process(git_args(repo_path, {"rev-parse", "--git-dir"}));
  if (!probe.ok())
    throw NotARepository(repo_path + " is not a git repository: " + trim(probe.err));
  const auto head = run_process(git_args(repo_path, {"rev-parse", "--verify", "HEAD^{commit}"}));
  if (!head.ok()) throw EmptyRepository(repo_path + " has no commits on the default branch");
}

long long parse_count(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw UnreadableObject("malformed numstat count '" + std::string(s) + "'");
  return v;
}

struct RawCommit {
  std::string hash;
  std::string parents;
  std::string author_name;
  std::string author_email;
  std::string committer_time;
  std::string body;
  // added, removed, path; "-" counts mark binary entries
  std::vector<std::array<std::string, 3>> numstat;
};

/// Parses `git log -z --numstat --pretty=format:%H%x00%P%x00%an%x00%ae%x00%ct%x00%B%x00`.
/// NUL-split tokens: 6 header fields, then for commits with a diff a
/// token starting with '\n' holding the first numstat entry, further
/// entry tokens, and an empty record-separator token.
std::vector<RawCommit> parse_numstat_log(const std::string& out) {
  std::vector<RawCommit> commits;
  std::size_t pos = 0;

  auto next_token = [&](std::string& token) -> bool {
    if (pos > out.size()) return false;
    if (pos == out.size()) {
      pos = out.size() + 1;
      return false;
    }
    const auto nul = out.find('\0', pos);
    if (nul == std::string::npos) {
      token.assign(out, pos, out.size() - pos);
      pos = out.size() + 1;
    } else {
      token.assign(out, pos, nul - pos);
      pos = nul + 1;
    }
    return true;
  };

  std::string token;
  bool have_token = next_token(token);
  while (have_token) {
    RawCommit c;
    c.hash = token;
    if (c.hash.empty()) break;
    if (!next_token(c.parents) || !next_token(c.author_name) || !next_token(c.author_email) ||
        !next_token(c.committer_time) || !next_token(c.body))
      throw UnreadableObject("truncated git log record after commit " + c.hash);

    have_token = next_token(token);
    if (have_token && token.empty()) {
      // Record separator right after the body: no diff entries.
      have_token = next_token(token);
    } else if (have_token && token.front() == '\n') {
      // Numstat entries follow until the empty record-separator token.
      std::string entry = token.substr(1);
      while (true) {
        if (!entry.empty()) {
          const auto t1 = entry.find('\t');
          const auto t2 = t1 == std::string::npos ? std::string::npos : entry.find('\t', t1 + 1);
          if (t1 == std::string::npos || t2 == std::string::npos)
            throw UnreadableObject("malformed numstat entry '" + entry + "'");
          std::array<std::string, 3> fields{entry.substr(0, t1), entry.substr(t1 + 1, t2 - t1 - 1),
                                            entry.substr(t2 + 1)};
          if (fields[2].empty()) {
            // Rename entry: the two path tokens follow separately.
            std::string old_path, new_path;
            if (!next_token(old_path) || !next_token(new_path))
              throw UnreadableObject("truncated rename entry in commit " + c.hash);
            fields[2] = new_path;
          }
          c.numstat.push_back(std::move(fields));
        }
        if (!next_token(entry)) {
          have_token = false;
          break;
        }
        if (entry.empty()) {
          have_token = next_token(token);
          break;
        }
      }
    }
    commits.push_back(std::move(c));
  }
  return commits;
}

/// Strips the a/ or b/ prefix and C-style quoting from a diff header path.
std::string parse_diff_path(std::string_view raw) {
  std::string path;
  if (!raw.empty() && raw.front() == '"') {
    // C-quoted: \t \n \\ \" and \ooo octal escapes.
    for (std::size_t i = 1; i < raw.size() && raw[i] != '"'; ++i) {
      if (raw[i] != '\\') {
        path.push_back(raw[i]);
        continue;
      }
      ++i;
      if (i >= raw.size()) break;
      switch (raw[i]) {
        case 'n': path.push_back('\n'); break;
        case 't': path.push_back('\t'); break;
        case 'r': path.push_back('\r'); break;
        case '\\': path.push_back('\\'); break;
        case '"': path.push_back('"'); break;
        default:
          if (raw[i] >= '0' && raw[i] <= '7' && i + 2 < raw.size()) {
            int v = 0;
            for (int k = 0; k < 3; ++k) v = v * 8 + (raw[i + k] - '0');
            path.push_back(static_cast<char>(v));
            i += 2;
          } else {
            path.push_back(raw[i]);
          }
      }
    }
  } else {
    path.assign(raw);
    // A trailing tab separates the path from blank metadata.
    if (!path.empty() && path.back() == '\t') path.pop_back();
  }
  if (path == "/dev/null") return {};
  if (path.size() >= 2 && (path[0] == 'a' || path[0] == 'b') && path[1] == '/')
    return path.substr(2);
  return path;
}

bool parse_hunk_header(std::string_view line, DiffHunk& hunk) {
  // "@@ -a[,b] +c[,d] @@ ..."
  if (!starts_with(line, "@@ -")) return false;
  std::size_t i = 4;
  auto read_num = [&](long& v) -> bool {
    const std::size_t begin = i;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    if (i == begin) return false;
    v = 0;
    for (std::size_t k = begin; k < i; ++k) v = v * 10 + (line[k] - '0');
    return true;
  };
  if (!read_num(hunk.old_start)) return false;
  hunk.old_count = 1;
  if (i < line.size() && line[i] == ',') {
    ++i;
    if (!read_num(hunk.old_count)) return false;
  }
  if (i + 1 >= line.size() || line[i] != ' ' || line[i + 1] != '+') return false;
  i += 2;
  if (!read_num(hunk.new_start)) return false;
  hunk.new_count = 1;
  if (i < line.size() && line[i] == ',') {
    ++i;
    if (!read_num(hunk.new_count)) return false;
  }
  return true;
}

/// Parses `git log -p --unified=0 --pretty=format:%x02%H`.
std::vector<CommitPatch> parse_patch_log(const std::string& out) {
  std::vector<CommitPatch> patches;
  CommitPatch* commit = nullptr;
  FilePatch pending;          // accumulating current file diff
  bool file_open = false;
  std::string minus_path;

  auto flush_file = [&]() {
    if (file_open && commit && !pending.path.empty()) commit->files.push_back(std::move(pending));
    pending = FilePatch{};
    file_open = false;
    minus_path.clear();
  };

  std::size_t pos = 0;
  while (pos <= out.size()) {
    const auto nl = out.find('\n', pos);
    const std::string_view line(out.data() + pos,
                                (nl == std::string::npos ? out.size() : nl) - pos);
    pos = nl == std::string::npos ? out.size() + 1 : nl + 1;

    if (!line.empty() && line.front() == '\x02') {
      flush_file();
      patches.emplace_back();
      commit = &patches.back();
      commit->commit_id = std::string(line.substr(1));
    } else if (starts_with(line, "diff --git ")) {
      flush_file();
      file_open = true;
    } else if (file_open && starts_with(line, "--- ")) {
      minus_path = parse_diff_path(line.substr(4));
    } else if (file_open && starts_with(line, "+++ ")) {
      const std::string plus = parse_diff_path(line.substr(4));
      if (plus.empty()) {
        pending.is_delete = true;
        pending.path = minus_path;
      } else {
        pending.path = plus;
        pending.is_new = minus_path.empty();
      }
    } else if (file_open && starts_with(line, "@@ ")) {
      DiffHunk hunk;
      if (parse_hunk_header(line, hunk)) pending.hunks.push_back(hunk);
    } else if (file_open && (starts_with(line, "Binary files ") ||
                             starts_with(line, "GIT binary patch"))) {
      pending.is_binary = true;
      if (pending.path.empty() && starts_with(line, "Binary files ")) {
        // "Binary files a/P and b/P differ"
        const std::string_view rest = line.substr(13);
        const auto and_pos = rest.find(" and ");
        if (and_pos != std::string_view::npos) {
          std::string_view new_raw = rest.substr(and_pos + 5);
          if (ends_with(new_raw, " differ")) new_raw.remove_suffix(7);
          const std::string new_path = parse_diff_path(new_raw);
          if (!new_path.empty()) {
            pending.path = new_path;
          } else {
            pending.path = parse_diff_path(rest.substr(0, and_pos));
            pending.is_delete = true;
          }
        }
      }
    }
  }
  flush_file();
  return patches;
}

void sample_complexities(const std::string& repo_path, std::vector<CommitRecord>& commits) {
  BatchProcess cat_file({"git", "-C", repo_path, "cat-file", "--batch"});
  for (auto& commit : commits) {
    for (auto& delta : commit.files) {
      if (delta.binary) continue;
      const std::string lang = complexity::language_for_path(delta.path);
      if (lang.empty()) continue;
      cat_file.write_line(commit.commit_id + ":" + delta.path);
      std::string header;
      if (!cat_file.read_line(header))
        throw UnreadableObject("git cat-file terminated early for commit " + commit.commit_id);
      if (ends_with(header, " missing")) continue;  // deleted in this commit
      const auto fields = split(header, ' ');
      if (fields.size() < 3)
        throw UnreadableObject("unexpected cat-file header '" + header + "'");
      const std::size_t size = static_cast<std::size_t>(parse_count(fields[2]));
      const std::string blob = cat_file.read_exact(size);
      cat_file.read_exact(1);  // trailing LF
      delta.method_complexities = complexity::estimate_complexity(blob, lang);
    }
  }
  cat_file.close_stdin();
}

}  // namespace

double RepoHistory::project_age_years() const {
  const double days =
      static_cast<double>(last_commit_at.seconds_since_epoch - first_commit_at.seconds_since_epoch) /
      86400.0;
  return days / 365.25;
}

const CommitRecord* RepoHistory::find(const std::string& commit_id) const {
  for (const auto& c : commits)
    if (c.commit_id == commit_id) return &c;
  return nullptr;
}

RepoHistory walk_history(const std::string& repo_path, const IngestOptions& opts) {
  ensure_repository(repo_path);

  std::vector<std::string> log_args{
      "log", "--first-parent", "--reverse", "-z", "--numstat",
      opts.follow_renames ? "-M" : "--no-renames",
      opts.include_merges ? "--diff-merges=first-parent" : "--diff-merges=off",
      "--encoding=UTF-8", "--pretty=format:%H%x00%P%x00%an%x00%ae%x00%ct%x00%B%x00", "HEAD"};
  const auto log = run_process(git_args(repo_path, log_args));
  if (!log.ok()) throw UnreadableObject("git log failed in " + repo_path + ": " + trim(log.err));

  RepoHistory history;
  history.project_name =
      !opts.project_name.empty()
          ? opts.project_name
          : std::filesystem::path(std::filesystem::absolute(repo_path)).filename().string();
  if (history.project_name.empty())
    history.project_name =
        std::filesystem::absolute(repo_path).parent_path().filename().string();

  for (const auto& raw : parse_numstat_log(log.out)) {
    CommitRecord commit;
    commit.commit_id = raw.hash;
    commit.author_name = raw.author_name;
    commit.author_email = raw.author_email;
    commit.timestamp = UtcTime{parse_count(raw.committer_time)};
    commit.message = trim(raw.body);
    commit.is_merge = raw.parents.find(' ') != std::string::npos;
    for (const auto& [added, removed, path] : raw.numstat) {
      FileDelta delta;
      delta.path = path;
      delta.binary = added == "-" || removed == "-";
      if (delta.binary && !opts.include_binary) continue;
      if (!delta.binary) {
        delta.lines_added = parse_count(added);
        delta.lines_removed = parse_count(removed);
      }
      commit.files.push_back(std::move(delta));
    }
    history.commits.push_back(std::move(commit));
  }
  if (history.commits.empty()) throw EmptyRepository(repo_path + " produced no commits");

  if (opts.compute_complexity) sample_complexities(repo_path, history.commits);

  std::stable_sort(history.commits.begin(), history.commits.end(),
                   [](const CommitRecord& a, const CommitRecord& b) {
                     if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                     return a.commit_id < b.commit_id;
                   });
  history.first_commit_at = history.commits.front().timestamp;
  history.last_commit_at = history.commits.back().timestamp;

  if (opts.collect_patches) {
    const auto patch_log = run_process(git_args(
        repo_path, {"log", "--first-parent", "--reverse", "-p", "--unified=0", "--no-renames",
                    "--diff-merges=first-parent", "--encoding=UTF-8", "--pretty=format:%x02%H",
                    "HEAD"}));
    if (!patch_log.ok())
      throw UnreadableObject("git log -p failed in " + repo_path + ": " + trim(patch_log.err));
    history.patches = parse_patch_log(patch_log.out);
  }
  return history;
}

bool detect_bug_fix(const std::string& message, const std::vector<std::string>& keywords) {
  const auto tokens = word_tokens(message);
  for (const auto& token : tokens)
    for (const auto& keyword : keywords)
      if (token == keyword) return true;
  return false;
}

bool detect_bug_fix(const std::string& message) {
  return detect_bug_fix(message, IngestOptions{}.bug_keywords);
}

long long churn_of(const CommitRecord& record) {
  long long total = 0;
  for (const auto& f : record.files) total += f.churn();
  return total;
}

const char* kCommitsCsvHeader =
    "project,commit_id,author_name,author_email,timestamp_iso8601,is_merge,message,"
    "lines_added,lines_removed,churn,files_touched,avg_method_complexity,is_bug_fix";

std::string commits_csv(const RepoHistory& history, const IngestOptions& opts) {
  CsvWriter csv;
  csv.row(split(kCommitsCsvHeader, ','));
  for (const auto& c : history.commits) {
    long long added = 0, removed = 0;
    long long methods = 0, complexity_sum = 0;
    for (const auto& f : c.files) {
      added += f.lines_added;
      removed += f.lines_removed;
      methods += static_cast<long long>(f.method_complexities.size());
      for (int m : f.method_complexities) complexity_sum += m;
    }
    std::optional<double> avg_complexity;
    if (methods > 0)
      avg_complexity = static_cast<double>(complexity_sum) / static_cast<double>(methods);
    csv.row({history.project_name, c.commit_id, c.author_name, c.author_email,
             format_iso8601(c.timestamp), c.is_merge ? "true" : "false", c.message,
             std::to_string(added), std::to_string(removed), std::to_string(added + removed),
             std::to_string(c.files.size()), csv_opt(avg_complexity),
             detect_bug_fix(c.message, opts.bug_keywords) ? "true" : "false"});
  }
  return csv.str();
}

}  // namespace spacex::ingest
