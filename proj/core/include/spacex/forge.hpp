#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spacex/time.hpp"

namespace spacex::forge {

struct PullRequest {
  long long number = 0;
  std::string author_login;
  UtcTime created_at;
  std::optional<UtcTime> merged_at;
  std::optional<UtcTime> closed_at;
};

enum class IssueState { open, closed };

struct IssueRecord {
  long long number = 0;
  std::string author_login;
  UtcTime created_at;
  IssueState state = IssueState::open;
};

enum class CiConclusion { success, failure, other };

struct CiRun {
  std::string run_id;
  UtcTime finished_at;
  CiConclusion conclusion = CiConclusion::other;
};

struct ExtraColumns {
  long long total_code_reviews = 0;
  long long total_deployments = 0;
};

struct ForgeSnapshot {
  std::string project_name;
  std::vector<PullRequest> pull_requests;
  std::vector<IssueRecord> issues;
  std::vector<CiRun> ci_runs;
  std::map<std::string, ExtraColumns> extra_columns;  // keyed by author_login
};

/// Loads and validates a snapshot JSON file. Unknown fields are ignored;
/// missing optional sections become empty. Throws SchemaViolation with the
/// offending JSON path, or TimestampParseError.
ForgeSnapshot load_snapshot(const std::string& path);

/// Same validation applied to in-memory JSON text.
ForgeSnapshot parse_snapshot(const std::string& json_text, const std::string& origin = "<memory>");

/// Canonical snapshot serialization; load_snapshot(serialize(s)) round-trips.
std::string serialize_snapshot(const ForgeSnapshot& snapshot);

struct FetchOptions {
  /// REST endpoint base; override to target a mirror or test server.
  std::string api_base = "https://api.github.com";
  /// Falls back to the SPACEX_FORGE_TOKEN environment variable.
  std::string token;
  /// Snapshot file to write so analyses replay offline.
  std::string out_path;
  int per_page = 100;
  int timeout_seconds = 30;
};

/// Fetches PRs, issues and workflow runs for "owner/repo", paginating to
/// exhaustion, writes the snapshot to opts.out_path and returns it.
/// Throws AuthFailure, RateLimited (with the server-advised delay) or
/// NetworkError.
ForgeSnapshot fetch_live(const std::string& project_slug, const FetchOptions& opts);

std::string to_string(CiConclusion c);
std::string to_string(IssueState s);

}  // namespace spacex::forge
