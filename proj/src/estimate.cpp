#include "causal/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "causal/error.hpp"

namespace causal {

namespace {

constexpr double kZ95 = 1.959963984540054;  // Phi^-1(0.975)

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd build_design(const Dataset& d,
                             const std::vector<std::string>& columns) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(d.rows()),
                    static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c)
    x.col(static_cast<Eigen::Index>(c)) = to_vector(d.column(columns[c]));
  return x;
}

void require_binary(const Dataset& d, const std::string& column,
                    const char* what) {
  bool has0 = false, has1 = false;
  for (double v : d.column(column)) {
    if (v == 0.0)
      has0 = true;
    else if (v == 1.0)
      has1 = true;
    else
      throw ArgumentError(std::string(what) + " column '" + column +
                          "' must be binary {0,1}, found " +
                          std::to_string(v));
  }
  if (!has0 || !has1)
    throw ArgumentError(std::string(what) + " column '" + column +
                        "' must contain both classes");
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double log1pexp(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Attaches bootstrap standard error and percentile CI to an estimate whose
// point value has already been computed on the full data.
template <typename PointFn>
void bootstrap_interval(EffectEstimate& est, const Dataset& d, Rng rng,
                        int replications, PointFn&& point) {
  std::vector<double> reps;
  reps.reserve(static_cast<std::size_t>(replications));
  for (int k = 0; k < replications; ++k) {
    Rng r = rng.derive(static_cast<std::uint64_t>(k));
    Dataset resampled = d.bootstrap_sample(r);
    try {
      reps.push_back(point(resampled, r));
    } catch (const Error&) {
      // Degenerate resample (e.g. a single-class treatment draw); skip.
    }
  }
  est.std_error = sample_std(reps);
  if (reps.empty()) {
    est.ci_low = est.ci_high = est.ate;
  } else {
    est.ci_low = percentile(reps, 0.025);
    est.ci_high = percentile(reps, 0.975);
  }
  est.ci_method = "bootstrap_percentile";
}

}  // namespace

LinearFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                  const std::vector<std::string>& column_labels) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols() + 1;  // with intercept
  if (n != y.size())
    throw ArgumentError("ols_fit: design has " + std::to_string(n) +
                        " rows but response has " + std::to_string(y.size()));
  if (n <= design.cols())
    throw ArgumentError("ols_fit: need more rows than design columns (" +
                        std::to_string(n) + " rows, " +
                        std::to_string(design.cols()) + " columns)");

  Eigen::MatrixXd x(n, p);
  x.leftCols(p - 1) = design;
  x.col(p - 1).setOnes();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    auto label = [&](Eigen::Index col) -> std::string {
      if (col == p - 1) return "(intercept)";
      if (static_cast<std::size_t>(col) < column_labels.size())
        return column_labels[static_cast<std::size_t>(col)];
      return "column " + std::to_string(col);
    };
    const auto& perm = qr.colsPermutation().indices();
    std::string cols;
    for (Eigen::Index i = qr.rank(); i < p; ++i) {
      if (!cols.empty()) cols += ", ";
      cols += label(perm[i]);
    }
    throw NumericError("rank-deficient design: collinear columns {" + cols +
                       "}");
  }

  LinearFit fit;
  fit.coefficients = qr.solve(y);
  const double ssr = (y - x * fit.coefficients).squaredNorm();
  const Eigen::Index dof = n - p;
  fit.residual_variance =
      dof > 0 ? ssr / static_cast<double>(dof) : 0.0;

  // (X'X)^-1 = P R^-1 R^-T P' from the pivoted factorization X P = Q R.
  Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p)
                          .triangularView<Eigen::Upper>();
  Eigen::MatrixXd inv_r =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd xtx_inv = inv_r * inv_r.transpose();
  const Eigen::MatrixXd perm = qr.colsPermutation();
  xtx_inv = perm * xtx_inv * perm.transpose();
  fit.covariance = fit.residual_variance * xtx_inv;
  fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose()).eval();
  return fit;
}

LogisticFit logistic_fit(const Eigen::MatrixXd& design,
                         const Eigen::VectorXd& target) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols() + 1;
  if (n != target.size())
    throw ArgumentError("logistic_fit: row count mismatch");
  bool has0 = false, has1 = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (target[i] == 0.0)
      has0 = true;
    else if (target[i] == 1.0)
      has1 = true;
    else
      throw ArgumentError("logistic_fit: target must be binary {0,1}");
  }
  if (!has0 || !has1)
    throw ArgumentError("logistic_fit: target has a single class");

  Eigen::MatrixXd x(n, p);
  if (p > 1) x.leftCols(p - 1) = design;
  x.col(p - 1).setOnes();

  constexpr double kGradTol = 1e-8;
  constexpr int kMaxIter = 100;
  constexpr double kRidge = 1e-6;

  LogisticFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(p);
  bool penalized = false;

  auto log_lik = [&](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      ll += target[i] * eta[i] - log1pexp(eta[i]);
    if (penalized) ll -= 0.5 * kRidge * beta.squaredNorm();
    return ll;
  };

  double ll = log_lik(fit.coefficients);
  for (int iter = 0; iter < kMaxIter; ++iter) {
    fit.iterations = iter;
    const Eigen::VectorXd eta = x * fit.coefficients;
    Eigen::VectorXd prob(n), weight(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob[i] = sigmoid(eta[i]);
      weight[i] = prob[i] * (1.0 - prob[i]);
    }

    Eigen::VectorXd grad = x.transpose() * (target - prob);
    if (penalized) grad -= kRidge * fit.coefficients;
    if (grad.norm() < kGradTol) break;

    // Separation heuristic: a divergent, perfectly-classifying iterate.
    if (!penalized && eta.cwiseAbs().maxCoeff() > 30.0) {
      bool perfect = true;
      for (Eigen::Index i = 0; i < n; ++i)
        if ((target[i] == 1.0) != (eta[i] > 0.0)) {
          perfect = false;
          break;
        }
      if (perfect) {
        penalized = true;
        fit.separation_warning = true;
        ll = log_lik(fit.coefficients);
        continue;
      }
    }

    Eigen::MatrixXd hessian =
        x.transpose() * weight.asDiagonal() * x;
    if (penalized)
      hessian += kRidge * Eigen::MatrixXd::Identity(p, p);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() != Eigen::Success ||
        (ldlt.vectorD().array() <= 0.0).any()) {
      if (!penalized) {
        penalized = true;
        fit.separation_warning = true;
        ll = log_lik(fit.coefficients);
        continue;
      }
      break;
    }
    const Eigen::VectorXd delta = ldlt.solve(grad);

    // Step halving keeps the (possibly penalized) log-likelihood monotone.
    double alpha = 1.0;
    double new_ll = log_lik(fit.coefficients + alpha * delta);
    while (new_ll < ll && alpha > 1e-12) {
      alpha *= 0.5;
      new_ll = log_lik(fit.coefficients + alpha * delta);
    }
    if (new_ll < ll) {
      if (!penalized) {
        penalized = true;
        fit.separation_warning = true;
        ll = log_lik(fit.coefficients);
        continue;
      }
      break;
    }
    fit.coefficients += alpha * delta;
    ll = new_ll;
    fit.ll_trace.push_back(ll);
  }
  fit.log_likelihood = ll;
  return fit;
}

EffectEstimate estimate_backdoor_regression(const Dataset& d,
                                            const Estimand& e) {
  if (e.kind != EstimandKind::kBackdoor)
    throw IncompatibleError("linear_regression requires a backdoor estimand");
  require_binary(d, e.treatment, "treatment");

  std::vector<std::string> columns{e.treatment};
  columns.insert(columns.end(), e.adjustment_set.begin(),
                 e.adjustment_set.end());
  const LinearFit fit =
      ols_fit(build_design(d, columns), to_vector(d.column(e.outcome)),
              columns);

  EffectEstimate est;
  est.ate = fit.coefficients[0];
  est.std_error = std::sqrt(std::max(0.0, fit.covariance(0, 0)));
  est.ci_low = est.ate - kZ95 * est.std_error;
  est.ci_high = est.ate + kZ95 * est.std_error;
  est.method = "linear_regression";
  est.ci_method = "normal";
  est.estimand = e;
  est.n = d.rows();
  return est;
}

namespace {

double propensity_point_estimate(const Dataset& d, const Estimand& e,
                                 const PropensityOptions& opts,
                                 bool* separation) {
  require_binary(d, e.treatment, "treatment");
  std::vector<std::string> adj(e.adjustment_set.begin(),
                               e.adjustment_set.end());
  const Eigen::VectorXd t = to_vector(d.column(e.treatment));
  const Eigen::VectorXd y = to_vector(d.column(e.outcome));

  const LogisticFit fit = logistic_fit(build_design(d, adj), t);
  if (separation && fit.separation_warning) *separation = true;

  Eigen::MatrixXd x(t.size(), adj.size() + 1);
  if (!adj.empty()) x.leftCols(static_cast<Eigen::Index>(adj.size())) =
      build_design(d, adj);
  x.col(static_cast<Eigen::Index>(adj.size())).setOnes();
  const Eigen::VectorXd eta = x * fit.coefficients;

  double num1 = 0.0, den1 = 0.0, num0 = 0.0, den0 = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double p =
        std::clamp(sigmoid(eta[i]), opts.clip_low, opts.clip_high);
    if (t[i] == 1.0) {
      num1 += y[i] / p;
      den1 += 1.0 / p;
    } else {
      num0 += y[i] / (1.0 - p);
      den0 += 1.0 / (1.0 - p);
    }
  }
  return num1 / den1 - num0 / den0;
}

}  // namespace

EffectEstimate estimate_propensity_weighting(const Dataset& d,
                                             const Estimand& e, Rng rng,
                                             const PropensityOptions& opts) {
  if (e.kind != EstimandKind::kBackdoor)
    throw IncompatibleError(
        "propensity_score_weighting requires a backdoor estimand");

  EffectEstimate est;
  bool separation = false;
  est.ate = propensity_point_estimate(d, e, opts, &separation);
  est.separation_warning = separation;
  est.method = "propensity_score_weighting_hajek";
  est.estimand = e;
  est.n = d.rows();
  bootstrap_interval(est, d, rng, opts.bootstrap_replications,
                     [&](const Dataset& resampled, Rng&) {
                       return propensity_point_estimate(resampled, e, opts,
                                                        nullptr);
                     });
  return est;
}

EffectEstimate estimate_iv_wald(const Dataset& d, const Estimand& e) {
  if (e.kind != EstimandKind::kIv)
    throw IncompatibleError("iv_wald requires an iv estimand");
  if (e.instrument_set.size() != 1)
    throw ArgumentError(
        "iv_wald supports exactly one instrument, estimand has " +
        std::to_string(e.instrument_set.size()));
  const std::string& z_name = *e.instrument_set.begin();
  require_binary(d, e.treatment, "treatment");
  require_binary(d, z_name, "instrument");

  const auto& z = d.column(z_name);
  const auto& t = d.column(e.treatment);
  const auto& y = d.column(e.outcome);

  // Per-arm first and second moments of (y, t) given z.
  double n1 = 0, n0 = 0, sy1 = 0, sy0 = 0, st1 = 0, st0 = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] == 1.0) {
      ++n1;
      sy1 += y[i];
      st1 += t[i];
    } else {
      ++n0;
      sy0 += y[i];
      st0 += t[i];
    }
  }
  const double my1 = sy1 / n1, my0 = sy0 / n0;
  const double mt1 = st1 / n1, mt0 = st0 / n0;
  double vy1 = 0, vy0 = 0, vt1 = 0, vt0 = 0, cyt1 = 0, cyt0 = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] == 1.0) {
      vy1 += (y[i] - my1) * (y[i] - my1);
      vt1 += (t[i] - mt1) * (t[i] - mt1);
      cyt1 += (y[i] - my1) * (t[i] - mt1);
    } else {
      vy0 += (y[i] - my0) * (y[i] - my0);
      vt0 += (t[i] - mt0) * (t[i] - mt0);
      cyt0 += (y[i] - my0) * (t[i] - mt0);
    }
  }
  auto unbiased = [](double ss, double n) {
    return n > 1 ? ss / (n - 1) : 0.0;
  };

  const double numerator = my1 - my0;
  const double denominator = mt1 - mt0;
  if (denominator == 0.0)
    throw NumericError(
        "iv_wald: instrument does not move the treatment (zero denominator)");

  EffectEstimate est;
  est.ate = numerator / denominator;
  est.weak_instrument_warning = std::abs(denominator) < 0.05;

  // Delta method on the ratio of two mean differences.
  const double var_num = unbiased(vy1, n1) / n1 + unbiased(vy0, n0) / n0;
  const double var_den = unbiased(vt1, n1) / n1 + unbiased(vt0, n0) / n0;
  const double cov_nd = unbiased(cyt1, n1) / n1 + unbiased(cyt0, n0) / n0;
  const double var_ate =
      (var_num + est.ate * est.ate * var_den - 2.0 * est.ate * cov_nd) /
      (denominator * denominator);
  est.std_error = std::sqrt(std::max(0.0, var_ate));
  est.ci_low = est.ate - kZ95 * est.std_error;
  est.ci_high = est.ate + kZ95 * est.std_error;
  est.method = "iv_wald";
  est.ci_method = "normal";
  est.estimand = e;
  est.n = d.rows();
  return est;
}

namespace {

double frontdoor_point_estimate(const Dataset& d, const Estimand& e) {
  const std::string& m_name = *e.mediator_set.begin();
  const Eigen::VectorXd t = to_vector(d.column(e.treatment));
  const Eigen::VectorXd m = to_vector(d.column(m_name));
  const Eigen::VectorXd y = to_vector(d.column(e.outcome));

  Eigen::MatrixXd stage1(t.size(), 1);
  stage1.col(0) = t;
  const double t_to_m =
      ols_fit(stage1, m, {e.treatment}).coefficients[0];

  Eigen::MatrixXd stage2(t.size(), 2);
  stage2.col(0) = m;
  stage2.col(1) = t;
  const double m_to_y =
      ols_fit(stage2, y, {m_name, e.treatment}).coefficients[0];
  return t_to_m * m_to_y;
}

}  // namespace

EffectEstimate estimate_frontdoor(const Dataset& d, const Estimand& e,
                                  Rng rng) {
  if (e.kind != EstimandKind::kFrontdoor)
    throw IncompatibleError(
        "frontdoor_two_stage requires a frontdoor estimand");
  if (e.mediator_set.size() != 1)
    throw ArgumentError(
        "frontdoor_two_stage supports exactly one mediator, estimand has " +
        std::to_string(e.mediator_set.size()));
  require_binary(d, e.treatment, "treatment");

  EffectEstimate est;
  est.ate = frontdoor_point_estimate(d, e);
  est.method = "frontdoor_two_stage";
  est.estimand = e;
  est.n = d.rows();
  bootstrap_interval(est, d, rng, 200,
                     [&](const Dataset& resampled, Rng&) {
                       return frontdoor_point_estimate(resampled, e);
                     });
  return est;
}

std::vector<std::string> known_estimators() {
  return {"linear_regression", "propensity_score_weighting", "iv_wald",
          "frontdoor_two_stage"};
}

bool estimator_compatible(const std::string& method, EstimandKind kind) {
  if (method == "linear_regression" ||
      method == "propensity_score_weighting")
    return kind == EstimandKind::kBackdoor;
  if (method == "iv_wald") return kind == EstimandKind::kIv;
  if (method == "frontdoor_two_stage") return kind == EstimandKind::kFrontdoor;
  return false;
}

EffectEstimate estimate_effect(const Dataset& d, const Estimand& e,
                               const std::string& method, Rng rng) {
  const auto known = known_estimators();
  if (std::find(known.begin(), known.end(), method) == known.end()) {
    std::string names;
    for (const auto& k : known) {
      if (!names.empty()) names += ", ";
      names += k;
    }
    throw UnknownMethodError("unknown estimator '" + method +
                             "'; valid estimators: " + names);
  }
  if (!estimator_compatible(method, e.kind))
    throw IncompatibleError("estimator '" + method +
                            "' is not compatible with a " +
                            to_string(e.kind) + " estimand");
  if (method == "linear_regression") return estimate_backdoor_regression(d, e);
  if (method == "propensity_score_weighting")
    return estimate_propensity_weighting(d, e, rng);
  if (method == "iv_wald") return estimate_iv_wald(d, e);
  return estimate_frontdoor(d, e, rng);
}

}  // namespace causal
