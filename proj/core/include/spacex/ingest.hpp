#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spacex/time.hpp"

namespace spacex::ingest {

struct FileDelta {
  std::string path;  // repo-relative, forward slashes
  long long lines_added = 0;
  long long lines_removed = 0;
  bool binary = false;
  /// One entry per method in the touched file's post-image; empty when
  /// the language is unsupported or the file was deleted.
  std::vector<int> method_complexities;

  long long churn() const { return lines_added + lines_removed; }
};

struct CommitRecord {
  std::string commit_id;
  std::string author_name;
  std::string author_email;
  UtcTime timestamp;  // committer date, UTC, second precision
  std::string message;
  std::vector<FileDelta> files;
  bool is_merge = false;
};

/// Half-open line spans of one diff hunk ("@@ -a,b +c,d @@").
struct DiffHunk {
  long old_start = 0;  // 1-based; for b==0 the line *after* which to edit
  long old_count = 0;
  long new_start = 0;
  long new_count = 0;
};

struct FilePatch {
  std::string path;
  bool is_new = false;
  bool is_delete = false;
  bool is_binary = false;
  std::vector<DiffHunk> hunks;
};

/// First-parent patch of one commit (merges diffed against their first
/// parent); drives line attribution.
struct CommitPatch {
  std::string commit_id;
  std::vector<FilePatch> files;
};

struct RepoHistory {
  std::string project_name;
  /// Sorted ascending by timestamp, ties by commit_id.
  std::vector<CommitRecord> commits;
  /// First-parent order, independent of the sort above.
  std::vector<CommitPatch> patches;
  UtcTime first_commit_at;
  UtcTime last_commit_at;

  double project_age_years() const;
  const CommitRecord* find(const std::string& commit_id) const;
};

struct IngestOptions {
  std::string project_name;  // default: repo directory basename
  /// Merge commits are always listed (flagged is_merge); their
  /// first-parent deltas contribute churn/complexity only when set.
  bool include_merges = false;
  bool follow_renames = false;
  /// Binary file deltas appear (with zero line counts) only when set.
  bool include_binary = false;
  bool compute_complexity = true;
  /// Collect per-commit hunks for line attribution.
  bool collect_patches = true;
  std::vector<std::string> bug_keywords{"fix",    "fixes", "fixed", "bug",   "bugfix",
                                        "hotfix", "patch", "fault", "crash", "defect"};
};

/// Walks the default-branch first-parent history of a local clone.
/// Throws NotARepository / EmptyRepository / UnreadableObject.
RepoHistory walk_history(const std::string& repo_path, const IngestOptions& opts = {});

/// True iff the lowercased message contains a whole-word keyword.
bool detect_bug_fix(const std::string& message, const std::vector<std::string>& keywords);
bool detect_bug_fix(const std::string& message);

long long churn_of(const CommitRecord& record);

/// Commits dataset with the exact header:
/// project,commit_id,author_name,author_email,timestamp_iso8601,is_merge,
/// message,lines_added,lines_removed,churn,files_touched,
/// avg_method_complexity,is_bug_fix
std::string commits_csv(const RepoHistory& history, const IngestOptions& opts = {});
extern const char* kCommitsCsvHeader;

}  // namespace spacex::ingest
