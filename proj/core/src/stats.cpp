#include "spacex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>
#include <Eigen/QR>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "spacex/errors.hpp"
#include "spacex/text.hpp"

namespace spacex::stats {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double t_two_sided_p(double t, double dof) {
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double normal_two_sided_p(double z) {
  if (!std::isfinite(z)) return 0.0;
  boost::math::normal dist;
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(z)));
}

double f_upper_p(double f, double df1, double df2) {
  if (!std::isfinite(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

/// Row indices where every listed column is present.
std::vector<std::size_t> complete_cases(const std::vector<const DataColumn*>& cols) {
  std::size_t n = cols.empty() ? 0 : cols.front()->values.size();
  for (const auto* c : cols) {
    if (c->values.size() != n)
      throw AlignmentError("column '" + c->name + "' has " + std::to_string(c->values.size()) +
                           " rows, expected " + std::to_string(n));
  }
  std::vector<std::size_t> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (const auto* c : cols) {
      if (is_missing(c->values[i])) {
        ok = false;
        break;
      }
    }
    if (ok) rows.push_back(i);
  }
  return rows;
}

Correlation pearson_complete(const std::vector<double>& x, const std::vector<double>& y,
                             double dof_override = -1.0) {
  const std::size_t n = x.size();
  if (n < 3) throw DegenerateInput("pearson requires at least 3 complete pairs, got " +
                                   std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw DegenerateInput("pearson requires nonzero variance in both columns");
  const double r = sxy / std::sqrt(sxx * syy);
  const double dof = dof_override > 0 ? dof_override : static_cast<double>(n) - 2.0;
  if (dof < 1.0) throw DegenerateInput("pearson p-value needs positive degrees of freedom");
  double p;
  const double denom = 1.0 - r * r;
  if (denom <= 0.0) {
    p = 0.0;
  } else {
    const double t = r * std::sqrt(dof / denom);
    p = t_two_sided_p(t, dof);
  }
  return Correlation{r, p, n};
}

struct Design {
  MatrixXd X;
  VectorXd y;
  std::vector<std::string> terms;
  std::vector<std::size_t> used_rows;
  std::size_t n_dropped = 0;
  bool has_intercept = false;
};

Design build_design(const DataColumn& y, const std::vector<DataColumn>& X, bool intercept,
                    const GroupColumn* group) {
  std::vector<const DataColumn*> cols;
  cols.push_back(&y);
  for (const auto& c : X) cols.push_back(&c);
  auto rows = complete_cases(cols);
  if (group) {
    if (group->values.size() != y.values.size())
      throw AlignmentError("group column '" + group->name + "' has " +
                           std::to_string(group->values.size()) + " rows, expected " +
                           std::to_string(y.values.size()));
    std::erase_if(rows, [&](std::size_t i) { return group->values[i].empty(); });
  }

  Design d;
  d.used_rows = rows;
  d.n_dropped = y.values.size() - rows.size();
  d.has_intercept = intercept;

  std::vector<std::string> levels;
  if (group) {
    std::set<std::string> uniq;
    for (std::size_t i : rows) uniq.insert(group->values[i]);
    levels.assign(uniq.begin(), uniq.end());  // sorted; first level is the reference
  }
  const std::size_t n_dummies = levels.size() > 1 ? levels.size() - 1 : 0;

  const std::size_t n = rows.size();
  const std::size_t p = (intercept ? 1 : 0) + X.size() + n_dummies;
  d.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  d.y.resize(static_cast<Eigen::Index>(n));

  std::size_t col = 0;
  if (intercept) {
    d.terms.emplace_back("(Intercept)");
    d.X.col(static_cast<Eigen::Index>(col)).setOnes();
    ++col;
  }
  for (const auto& c : X) {
    d.terms.push_back(c.name);
    for (std::size_t i = 0; i < n; ++i)
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) = c.values[rows[i]];
    ++col;
  }
  for (std::size_t g = 1; g < levels.size(); ++g) {
    d.terms.push_back(group->name + "[" + levels[g] + "]");
    for (std::size_t i = 0; i < n; ++i)
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) =
          group->values[rows[i]] == levels[g] ? 1.0 : 0.0;
    ++col;
  }
  for (std::size_t i = 0; i < n; ++i) d.y(static_cast<Eigen::Index>(i)) = y.values[rows[i]];
  return d;
}

struct QrFit {
  VectorXd beta;
  MatrixXd xtx_inverse;  // (X'X)^{-1}, reconstructed from the R factor
};

QrFit qr_solve(const MatrixXd& X, const VectorXd& y, const std::vector<std::string>& terms) {
  Eigen::ColPivHouseholderQR<MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  if (rank < X.cols()) {
    // Name the terms the pivoting pushed past the numerical rank.
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = rank; k < X.cols(); ++k) {
      if (!names.empty()) names += ", ";
      names += terms[static_cast<std::size_t>(perm[k])];
    }
    throw RankDeficient("design matrix is rank deficient; collinear term(s): " + names);
  }
  QrFit fit;
  fit.beta = qr.solve(y);
  const MatrixXd R = qr.matrixQR()
                         .topRows(X.cols())
                         .template triangularView<Eigen::Upper>();
  const MatrixXd r_inv = R.inverse();
  const MatrixXd c = r_inv * r_inv.transpose();  // (R'R)^{-1}
  const auto perm = qr.colsPermutation();
  fit.xtx_inverse = perm * c * perm.transpose();
  return fit;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::pearson: return "pearson";
    case ModelKind::ols: return "ols";
    case ModelKind::partial_corr: return "partial_corr";
    case ModelKind::poisson: return "poisson";
  }
  return "unknown";
}

const CoefficientStats* StatReport::find(const std::string& term) const {
  for (const auto& [name, stats] : coefficients)
    if (name == term) return &stats;
  return nullptr;
}

nlohmann::json StatReport::to_json() const {
  nlohmann::ordered_json j;
  j["model_kind"] = stats::to_string(model_kind);
  nlohmann::ordered_json coef = nlohmann::ordered_json::object();
  for (const auto& [term, c] : coefficients) {
    nlohmann::ordered_json e;
    e["estimate"] = c.estimate;
    e["std_error"] = c.std_error;
    e["test_statistic"] = c.test_statistic;
    e["p_value"] = c.p_value;
    coef[term] = e;
  }
  j["coefficients"] = coef;
  if (r_squared) j["r_squared"] = *r_squared;
  if (adj_r_squared) j["adj_r_squared"] = *adj_r_squared;
  if (f_statistic) {
    j["f_statistic"] = nlohmann::ordered_json{{"value", f_statistic->value}, {"p", f_statistic->p}};
  }
  if (deviance) j["deviance"] = *deviance;
  j["n_used"] = n_used;
  j["n_dropped"] = n_dropped;
  j["converged"] = converged;
  j["transform_log"] = transform_log;
  j["residuals"] = residuals;
  return j;
}

Correlation pearson(const DataColumn& x, const DataColumn& y) {
  const auto rows = complete_cases({&x, &y});
  std::vector<double> xs, ys;
  xs.reserve(rows.size());
  ys.reserve(rows.size());
  for (std::size_t i : rows) {
    xs.push_back(x.values[i]);
    ys.push_back(y.values[i]);
  }
  return pearson_complete(xs, ys);
}

StatReport ols(const DataColumn& y, const std::vector<DataColumn>& X, bool intercept) {
  Design d = build_design(y, X, intercept, nullptr);
  const std::size_t n = d.used_rows.size();
  const std::size_t p = d.terms.size();
  if (p == 0) throw Underdetermined("ols needs at least one term");
  if (n <= p)
    throw Underdetermined("ols needs more rows than terms: n=" + std::to_string(n) +
                          ", terms=" + std::to_string(p));

  const QrFit fit = qr_solve(d.X, d.y, d.terms);
  const VectorXd fitted = d.X * fit.beta;
  const VectorXd resid = d.y - fitted;
  const double ssr = resid.squaredNorm();
  const double dof = static_cast<double>(n - p);
  const double sigma2 = ssr / dof;

  StatReport report;
  report.model_kind = ModelKind::ols;
  report.n_used = n;
  report.n_dropped = d.n_dropped;
  report.used_rows = d.used_rows;
  report.residuals.assign(resid.data(), resid.data() + resid.size());

  for (std::size_t j = 0; j < p; ++j) {
    CoefficientStats c;
    c.estimate = fit.beta(static_cast<Eigen::Index>(j));
    c.std_error = std::sqrt(std::max(0.0, sigma2 * fit.xtx_inverse(static_cast<Eigen::Index>(j),
                                                                   static_cast<Eigen::Index>(j))));
    c.test_statistic = c.std_error > 0 ? c.estimate / c.std_error
                                       : std::numeric_limits<double>::infinity();
    c.p_value = t_two_sided_p(c.test_statistic, dof);
    report.coefficients.emplace_back(d.terms[j], c);
  }

  double sst;
  if (intercept) {
    const double mean = d.y.mean();
    sst = (d.y.array() - mean).matrix().squaredNorm();
  } else {
    sst = d.y.squaredNorm();
  }
  const double r2 = sst > 0 ? 1.0 - ssr / sst : 1.0;
  report.r_squared = r2;
  const double adj_den = static_cast<double>(n - p);
  const double adj_num = intercept ? static_cast<double>(n - 1) : static_cast<double>(n);
  report.adj_r_squared = 1.0 - (1.0 - r2) * adj_num / adj_den;

  const std::size_t k_predictors = p - (intercept ? 1 : 0);
  if (intercept && k_predictors > 0 && sst > 0) {
    const double df1 = static_cast<double>(k_predictors);
    const double f = ((sst - ssr) / df1) / (ssr / dof);
    report.f_statistic = FStatistic{f, f_upper_p(f, df1, dof)};
  }
  return report;
}

Correlation partial_correlation(const DataColumn& x, const DataColumn& y,
                                const std::vector<DataColumn>& controls) {
  if (controls.empty()) return pearson(x, y);

  std::vector<const DataColumn*> cols{&x, &y};
  for (const auto& c : controls) cols.push_back(&c);
  const auto rows = complete_cases(cols);

  auto subset = [&rows](const DataColumn& c) {
    DataColumn out{c.name, {}};
    out.values.reserve(rows.size());
    for (std::size_t i : rows) out.values.push_back(c.values[i]);
    return out;
  };
  const DataColumn xs = subset(x);
  const DataColumn ys = subset(y);
  std::vector<DataColumn> ctl;
  ctl.reserve(controls.size());
  for (const auto& c : controls) ctl.push_back(subset(c));

  const StatReport rx = ols(xs, ctl, /*intercept=*/true);
  const StatReport ry = ols(ys, ctl, /*intercept=*/true);
  const double dof = static_cast<double>(rows.size()) - 2.0 - static_cast<double>(controls.size());
  return pearson_complete(rx.residuals, ry.residuals, dof);
}

std::map<std::string, double> vif(const std::vector<DataColumn>& X) {
  if (X.size() < 2) throw Underdetermined("vif needs at least 2 predictors");
  std::vector<const DataColumn*> cols;
  for (const auto& c : X) cols.push_back(&c);
  const auto rows = complete_cases(cols);

  auto subset = [&rows](const DataColumn& c) {
    DataColumn out{c.name, {}};
    out.values.reserve(rows.size());
    for (std::size_t i : rows) out.values.push_back(c.values[i]);
    return out;
  };

  std::map<std::string, double> out;
  for (std::size_t j = 0; j < X.size(); ++j) {
    DataColumn target = subset(X[j]);
    std::vector<DataColumn> others;
    for (std::size_t k = 0; k < X.size(); ++k)
      if (k != j) others.push_back(subset(X[k]));
    const StatReport aux = ols(target, others, /*intercept=*/true);
    const double r2 = aux.r_squared.value_or(0.0);
    if (r2 >= 1.0 - 1e-12)
      throw RankDeficient("predictor '" + X[j].name + "' is perfectly collinear with the others");
    out[X[j].name] = 1.0 / (1.0 - r2);
  }
  return out;
}

StatReport poisson_fit(const DataColumn& y, const std::vector<DataColumn>& X,
                       const std::optional<GroupColumn>& group, const PoissonOptions& opts) {
  for (double v : y.values) {
    if (is_missing(v)) continue;
    if (v < 0 || std::abs(v - std::round(v)) > 1e-9)
      throw NonCount("poisson response '" + y.name + "' must hold nonnegative integers, got " +
                     format_double(v));
  }

  Design d = build_design(y, X, /*intercept=*/true, group ? &*group : nullptr);
  const std::size_t n = d.used_rows.size();
  const std::size_t p = d.terms.size();
  if (n <= p)
    throw Underdetermined("poisson_fit needs more rows than terms: n=" + std::to_string(n) +
                          ", terms=" + std::to_string(p));

  // IRLS with log link. Initialize eta from the shifted response.
  VectorXd eta(n);
  for (std::size_t i = 0; i < n; ++i)
    eta(static_cast<Eigen::Index>(i)) = std::log(d.y(static_cast<Eigen::Index>(i)) + 0.5);

  VectorXd beta = VectorXd::Zero(static_cast<Eigen::Index>(p));
  bool have_beta = false;
  bool converged = false;
  MatrixXd xtx_inverse;
  VectorXd mu(n);

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    mu = eta.array().min(30.0).max(-30.0).exp();
    const VectorXd w_sqrt = mu.array().sqrt();
    const VectorXd z = eta.array() + (d.y - mu).array() / mu.array();

    MatrixXd wx = d.X;
    for (Eigen::Index i = 0; i < wx.rows(); ++i) wx.row(i) *= w_sqrt(i);
    const VectorXd wz = z.array() * w_sqrt.array();

    const QrFit fit = qr_solve(wx, wz, d.terms);
    const double delta = have_beta ? (fit.beta - beta).cwiseAbs().maxCoeff()
                                   : std::numeric_limits<double>::infinity();
    beta = fit.beta;
    have_beta = true;
    xtx_inverse = fit.xtx_inverse;
    eta = d.X * beta;
    if (delta < opts.tolerance) {
      converged = true;
      break;
    }
  }
  mu = eta.array().min(30.0).max(-30.0).exp();

  StatReport report;
  report.model_kind = ModelKind::poisson;
  report.n_used = n;
  report.n_dropped = d.n_dropped;
  report.used_rows = d.used_rows;
  report.converged = converged;
  if (group)
    report.transform_log.push_back("group(" + group->name +
                                   ") expanded to fixed per-group intercepts");
  if (!converged)
    report.transform_log.push_back("IRLS did not converge within " +
                                   std::to_string(opts.max_iterations) + " iterations");

  const double dof_norm = 1.0;  // Wald z against the standard normal
  (void)dof_norm;
  for (std::size_t j = 0; j < p; ++j) {
    CoefficientStats c;
    c.estimate = beta(static_cast<Eigen::Index>(j));
    c.std_error = std::sqrt(std::max(0.0, xtx_inverse(static_cast<Eigen::Index>(j),
                                                      static_cast<Eigen::Index>(j))));
    c.test_statistic = c.std_error > 0 ? c.estimate / c.std_error
                                       : std::numeric_limits<double>::infinity();
    c.p_value = normal_two_sided_p(c.test_statistic);
    report.coefficients.emplace_back(d.terms[j], c);
  }

  double deviance = 0.0;
  report.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = d.y(static_cast<Eigen::Index>(i));
    const double mi = mu(static_cast<Eigen::Index>(i));
    const double term = yi > 0 ? yi * std::log(yi / mi) - (yi - mi) : mi;
    deviance += 2.0 * term;
    const double sign = yi >= mi ? 1.0 : -1.0;
    report.residuals[i] = sign * std::sqrt(std::max(0.0, 2.0 * term));
  }
  report.deviance = deviance;
  return report;
}

DataColumn zscore(const DataColumn& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values.values) {
    if (is_missing(v)) continue;
    sum += v;
    ++n;
  }
  if (n < 2)
    throw DegenerateInput("zscore('" + values.name + "') needs at least 2 non-missing values");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values.values) {
    if (is_missing(v)) continue;
    ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd <= 0.0)
    throw DegenerateInput("zscore('" + values.name + "') needs nonzero standard deviation");

  DataColumn out{values.name + "_scaled", values.values};
  for (double& v : out.values)
    if (!is_missing(v)) v = (v - mean) / sd;
  return out;
}

DataColumn log1p_transform(const DataColumn& values) {
  DataColumn out{"log1p_" + values.name, values.values};
  for (double& v : out.values) {
    if (is_missing(v)) continue;
    if (v <= -1.0)
      throw DomainError("log1p_transform('" + values.name + "') requires values > -1, got " +
                        format_double(v));
    v = std::log1p(v);
  }
  return out;
}

}  // namespace spacex::stats
