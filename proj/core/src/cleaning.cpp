#include "spacex/cleaning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "spacex/errors.hpp"
#include "spacex/text.hpp"

namespace spacex::cleaning {

CleaningReport& CleaningReport::operator+=(const CleaningReport& other) {
  merged_alias_groups += other.merged_alias_groups;
  bots_removed += other.bots_removed;
  low_activity_removed += other.low_activity_removed;
  outlier_rows_removed += other.outlier_rows_removed;
  winsorized_cells += other.winsorized_cells;
  return *this;
}

namespace {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller index wins so grouping is order-independent.
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }

private:
  std::vector<std::size_t> parent_;
};

}  // namespace

DealiasResult dealias(const std::vector<RawIdentity>& raw, const AliasOverrides& overrides) {
  // Unique raw identities, deterministic order.
  std::vector<RawIdentity> uniq(raw);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  UnionFind uf(uniq.size());
  std::unordered_map<std::string, std::size_t> by_email;
  std::unordered_map<std::string, std::size_t> by_name;
  std::unordered_map<std::string, std::size_t> by_override;  // forced id -> first index

  for (std::size_t i = 0; i < uniq.size(); ++i) {
    const std::string email = to_lower_ascii(trim(uniq[i].email));
    const std::string name = normalize_name(uniq[i].name);
    if (!email.empty()) {
      auto [it, inserted] = by_email.try_emplace(email, i);
      if (!inserted) uf.unite(i, it->second);
      auto ov = overrides.find(email);
      if (ov != overrides.end()) {
        auto [oit, oinserted] = by_override.try_emplace(ov->second, i);
        if (!oinserted) uf.unite(i, oit->second);
      }
    }
    if (!name.empty()) {
      auto [it, inserted] = by_name.try_emplace(name, i);
      if (!inserted) uf.unite(i, it->second);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < uniq.size(); ++i) groups[uf.find(i)].push_back(i);

  DealiasResult result;
  std::map<std::string, ContributorIdentity> by_canonical;
  std::map<RawIdentity, std::string> raw_to_canonical;

  for (const auto& [root, members] : groups) {
    ContributorIdentity id;
    std::string forced_id;
    for (std::size_t m : members) {
      const std::string email = to_lower_ascii(trim(uniq[m].email));
      if (!email.empty()) {
        id.emails.insert(email);
        auto ov = overrides.find(email);
        if (ov != overrides.end()) {
          if (!forced_id.empty() && forced_id != ov->second)
            throw ConfigError("alias overrides map one contributor to two canonical ids: '" +
                              forced_id + "' and '" + ov->second + "'");
          forced_id = ov->second;
        }
      }
      if (!trim(uniq[m].name).empty()) id.names.insert(trim(uniq[m].name));
    }
    if (!forced_id.empty()) {
      id.canonical_id = forced_id;
    } else if (!id.emails.empty()) {
      id.canonical_id = *id.emails.begin();
    } else if (!id.names.empty()) {
      std::string smallest;
      for (const auto& n : id.names) {
        const std::string norm = normalize_name(n);
        if (smallest.empty() || norm < smallest) smallest = norm;
      }
      id.canonical_id = smallest;
    } else {
      id.canonical_id = "(unknown)";
    }
    id.display_name = id.names.empty() ? id.canonical_id : *id.names.begin();
    if (members.size() > 1) ++result.report.merged_alias_groups;

    for (std::size_t m : members) raw_to_canonical[uniq[m]] = id.canonical_id;

    auto [it, inserted] = by_canonical.try_emplace(id.canonical_id, id);
    if (!inserted) {
      // Distinct union-find groups can share a forced canonical id.
      it->second.emails.insert(id.emails.begin(), id.emails.end());
      it->second.names.insert(id.names.begin(), id.names.end());
      it->second.display_name = it->second.names.empty() ? it->second.canonical_id
                                                         : *it->second.names.begin();
    }
  }

  result.identities.reserve(by_canonical.size());
  std::map<std::string, std::size_t> canonical_index;
  for (auto& [cid, identity] : by_canonical) {
    canonical_index[cid] = result.identities.size();
    result.identities.push_back(std::move(identity));
  }
  for (const auto& [raw_id, cid] : raw_to_canonical)
    result.index_of[raw_id] = canonical_index[cid];
  return result;
}

bool matches_bot(const ContributorIdentity& identity, const BotPatterns& patterns) {
  auto name_has_suffix = [&](const std::string& name) {
    const std::string lower = to_lower_ascii(name);
    return std::any_of(patterns.name_suffixes.begin(), patterns.name_suffixes.end(),
                       [&](const std::string& s) { return ends_with(lower, to_lower_ascii(s)); });
  };

  bool any_suffix_name = false;
  for (const auto& name : identity.names) {
    const std::string lower = to_lower_ascii(name);
    if (name_has_suffix(name)) any_suffix_name = true;
    for (const auto& sub : patterns.substrings)
      if (contains(lower, to_lower_ascii(sub))) return true;
  }
  if (any_suffix_name) return true;

  for (const auto& email : identity.emails) {
    for (const auto& sub : patterns.substrings)
      if (contains(email, to_lower_ascii(sub))) return true;
    if (!patterns.noreply_email_suffix.empty() && ends_with(email, patterns.noreply_email_suffix)) {
      for (const auto& name : identity.names)
        if (name_has_suffix(name)) return true;
    }
  }
  return false;
}

std::vector<ContributorIdentity> filter_bots(std::vector<ContributorIdentity> identities,
                                             const BotPatterns& patterns, CleaningReport& report) {
  std::vector<ContributorIdentity> kept;
  kept.reserve(identities.size());
  for (auto& id : identities) {
    if (matches_bot(id, patterns)) {
      ++report.bots_removed;
    } else {
      kept.push_back(std::move(id));
    }
  }
  return kept;
}

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw EmptyInput("quantile of empty vector");
  if (p < 0.0 || p > 1.0) throw DomainError("quantile probability out of [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double> winsorize(const std::vector<double>& values, double lower_pct,
                              double upper_pct, long long* clamped_cells) {
  if (values.empty()) throw EmptyInput("winsorize of empty vector");
  if (!(lower_pct >= 0.0 && lower_pct < upper_pct && upper_pct <= 1.0))
    throw DomainError("winsorize bounds must satisfy 0 <= lower < upper <= 1");
  const double lo = quantile_type7(values, lower_pct);
  const double hi = quantile_type7(values, upper_pct);
  std::vector<double> out;
  out.reserve(values.size());
  long long clamped = 0;
  for (double v : values) {
    double w = v;
    if (w < lo) w = lo;
    if (w > hi) w = hi;
    if (w != v) ++clamped;
    out.push_back(w);
  }
  if (clamped_cells) *clamped_cells += clamped;
  return out;
}

Fences iqr_fences(const std::vector<double>& values, double multiplier) {
  const double q1 = quantile_type7(values, 0.25);
  const double q3 = quantile_type7(values, 0.75);
  const double iqr = q3 - q1;
  return Fences{q1 - multiplier * iqr, q3 + multiplier * iqr};
}

std::vector<bool> iqr_keep_mask(const std::vector<std::vector<std::optional<double>>>& columns,
                                double multiplier) {
  std::size_t n = 0;
  for (const auto& col : columns) n = std::max(n, col.size());
  std::vector<bool> keep(n, true);
  for (const auto& col : columns) {
    std::vector<double> present;
    present.reserve(col.size());
    for (const auto& v : col)
      if (v) present.push_back(*v);
    if (present.empty()) continue;
    const Fences f = iqr_fences(present, multiplier);
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (col[i] && (*col[i] < f.lo || *col[i] > f.hi)) keep[i] = false;
    }
  }
  return keep;
}

}  // namespace spacex::cleaning
