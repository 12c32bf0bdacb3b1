#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spacex::cleaning {

/// Audit trail emitted alongside every cleaned dataset.
struct CleaningReport {
  long long merged_alias_groups = 0;
  long long bots_removed = 0;
  long long low_activity_removed = 0;
  long long outlier_rows_removed = 0;
  long long winsorized_cells = 0;

  CleaningReport& operator+=(const CleaningReport& other);
};

struct RawIdentity {
  std::string name;
  std::string email;

  friend auto operator<=>(const RawIdentity&, const RawIdentity&) = default;
};

struct ContributorIdentity {
  std::string canonical_id;
  std::string display_name;
  std::set<std::string> emails;  // lowercased
  std::set<std::string> names;   // as seen
  bool is_bot = false;
};

/// raw_email (lowercased) -> forced canonical_id. Rows sharing a forced id
/// merge into one identity carrying that id.
using AliasOverrides = std::map<std::string, std::string>;

struct DealiasResult {
  std::vector<ContributorIdentity> identities;  // sorted by canonical_id
  std::map<RawIdentity, std::size_t> index_of;
  CleaningReport report;
};

/// Union-find over two edge kinds: exact lowercased-email match and exact
/// normalized-name match. canonical_id is the smallest lowercased email in
/// the group, else the smallest normalized name. Idempotent.
DealiasResult dealias(const std::vector<RawIdentity>& raw, const AliasOverrides& overrides = {});

struct BotPatterns {
  std::vector<std::string> name_suffixes{"[bot]"};
  std::vector<std::string> substrings{"dependabot", "renovate", "github-actions"};
  /// Matches when the email has this suffix AND the name carries a
  /// name_suffixes marker.
  std::string noreply_email_suffix{"@users.noreply.github.com"};
};

bool matches_bot(const ContributorIdentity& identity, const BotPatterns& patterns);

/// Removes bot identities; the rest keep their order.
std::vector<ContributorIdentity> filter_bots(std::vector<ContributorIdentity> identities,
                                             const BotPatterns& patterns, CleaningReport& report);

/// Linear-interpolation (type-7) quantile; values need not be sorted.
double quantile_type7(std::vector<double> values, double p);

/// Clamps values below Q(lower_pct) / above Q(upper_pct) to those
/// quantiles. Length-preserving and monotone.
std::vector<double> winsorize(const std::vector<double>& values, double lower_pct = 0.01,
                              double upper_pct = 0.99, long long* clamped_cells = nullptr);

struct Fences {
  double lo = 0.0;
  double hi = 0.0;
};

/// Tukey fences [Q1 - k*IQR, Q3 + k*IQR] with type-7 quartiles.
Fences iqr_fences(const std::vector<double>& values, double multiplier = 1.5);

/// Keep mask over rows given per-column cell values (missing cells never
/// trigger removal). Fences come from the pre-filter data; a single
/// application only — re-running with recomputed fences may remove more.
std::vector<bool> iqr_keep_mask(const std::vector<std::vector<std::optional<double>>>& columns,
                                double multiplier = 1.5);

}  // namespace spacex::cleaning
