#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace spacex::stats {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return v != v; }

/// Named numeric column; NaN marks a missing cell. Every analysis runs on
/// the complete-case subset of the involved columns and reports how many
/// rows were dropped.
struct DataColumn {
  std::string name;
  std::vector<double> values;
};

/// Named categorical column used for fixed per-group intercepts.
struct GroupColumn {
  std::string name;
  std::vector<std::string> values;
};

struct CoefficientStats {
  double estimate = 0.0;
  double std_error = 0.0;
  double test_statistic = 0.0;
  double p_value = 1.0;
};

struct FStatistic {
  double value = 0.0;
  double p = 1.0;
};

enum class ModelKind { pearson, ols, partial_corr, poisson };

std::string to_string(ModelKind kind);

struct StatReport {
  ModelKind model_kind = ModelKind::ols;
  /// Term -> stats, in design order ("(Intercept)" first when present).
  std::vector<std::pair<std::string, CoefficientStats>> coefficients;
  std::optional<double> r_squared;
  std::optional<double> adj_r_squared;
  std::optional<FStatistic> f_statistic;
  std::optional<double> deviance;
  std::size_t n_used = 0;
  std::size_t n_dropped = 0;
  /// OLS: raw residuals. Poisson: deviance residuals. Order follows used_rows.
  std::vector<double> residuals;
  /// Original row indices of the complete-case subset.
  std::vector<std::size_t> used_rows;
  std::vector<std::string> transform_log;
  bool converged = true;

  const CoefficientStats* find(const std::string& term) const;
  nlohmann::json to_json() const;
};

struct Correlation {
  double r = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Sample Pearson correlation with a two-sided p-value from
/// t = r * sqrt((n-2)/(1-r^2)) against Student's t with n-2 dof.
Correlation pearson(const DataColumn& x, const DataColumn& y);

/// Least squares via column-pivoted Householder QR. Reports per-term
/// t statistics (n - #terms dof), R^2 / adjusted R^2 and, with an
/// intercept and at least one predictor, the overall F test.
StatReport ols(const DataColumn& y, const std::vector<DataColumn>& X, bool intercept = true);

/// Residual-method partial correlation: correlate the residuals of x and
/// y after regressing each on the controls (with intercept). The p-value
/// uses n - 2 - #controls degrees of freedom. With no controls this is
/// exactly pearson().
Correlation partial_correlation(const DataColumn& x, const DataColumn& y,
                                const std::vector<DataColumn>& controls);

/// VIF_j = 1 / (1 - R^2_j) from regressing predictor j on the others.
std::map<std::string, double> vif(const std::vector<DataColumn>& X);

struct PoissonOptions {
  double tolerance = 1e-8;
  int max_iterations = 100;
};

/// Log-link Poisson regression fitted by IRLS. `group`, when present, is
/// expanded to fixed per-group intercept dummies against the
/// lexicographically smallest group as reference. Coefficient tests are
/// Wald z with two-sided normal p-values; residuals are deviance
/// residuals and `deviance` is the residual deviance.
StatReport poisson_fit(const DataColumn& y, const std::vector<DataColumn>& X,
                       const std::optional<GroupColumn>& group = std::nullopt,
                       const PoissonOptions& opts = {});

/// (x - mean) / sd with the sample (n-1) standard deviation, computed
/// over non-missing cells; missing cells stay missing.
DataColumn zscore(const DataColumn& values);

/// Elementwise ln(1 + x); missing cells stay missing.
DataColumn log1p_transform(const DataColumn& values);

}  // namespace spacex::stats
