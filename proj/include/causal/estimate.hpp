#ifndef CAUSAL_ESTIMATE_HPP
#define CAUSAL_ESTIMATE_HPP

#include <Eigen/Dense>
#include <string>

#include "causal/dataset.hpp"
#include "causal/identify.hpp"
#include "causal/rng.hpp"

namespace causal {

// OLS result. Coefficient order is the design columns followed by the
// intercept, which ols_fit appends internally.
struct LinearFit {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;  // residual_variance * (X'X)^-1
  double residual_variance = 0.0;
};

// Least squares via column-pivoted Householder QR. Requires strictly more
// rows than columns (after the intercept is appended); a rank-deficient
// design raises NumericError naming the collinear columns.
LinearFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                  const std::vector<std::string>& column_labels = {});

struct LogisticFit {
  Eigen::VectorXd coefficients;  // design columns then intercept
  bool separation_warning = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  std::vector<double> ll_trace;  // log-likelihood after each accepted step
};

// Bernoulli MLE by damped Newton iterations (step halving keeps the
// log-likelihood nondecreasing), gradient-norm tolerance 1e-8, at most 100
// iterations. Under (quasi-)separation the Hessian degenerates; the fit
// falls back to an L2 penalty of 1e-6 and sets separation_warning.
LogisticFit logistic_fit(const Eigen::MatrixXd& design,
                         const Eigen::VectorXd& target);

struct EffectEstimate {
  double ate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::string method;
  std::string ci_method;  // "normal" or "bootstrap_percentile"
  Estimand estimand;
  std::size_t n = 0;
  bool weak_instrument_warning = false;
  bool separation_warning = false;
};

struct PropensityOptions {
  double clip_low = 0.01;
  double clip_high = 0.99;
  int bootstrap_replications = 200;
};

// OLS of outcome on [treatment, adjustment set]; the treatment coefficient
// is the ATE.
EffectEstimate estimate_backdoor_regression(const Dataset& d,
                                            const Estimand& e);

// Hajek (self-normalized) inverse-propensity weighting; propensities from
// logistic_fit, clipped; standard error from a full-procedure bootstrap.
EffectEstimate estimate_propensity_weighting(
    const Dataset& d, const Estimand& e, Rng rng,
    const PropensityOptions& opts = {});

// Wald ratio for a single binary instrument, delta-method standard error.
// Sets weak_instrument_warning when |denominator| < 0.05.
EffectEstimate estimate_iv_wald(const Dataset& d, const Estimand& e);

// Two-stage linear frontdoor: (coef of t in m~t) * (coef of m in y~m+t);
// valid under the linear structural model, bootstrap standard error.
EffectEstimate estimate_frontdoor(const Dataset& d, const Estimand& e,
                                  Rng rng);

// Known estimator names: linear_regression, propensity_score_weighting
// (backdoor); iv_wald (iv); frontdoor_two_stage (frontdoor).
// Raises UnknownMethodError for other names and IncompatibleError when the
// estimand kind does not match.
EffectEstimate estimate_effect(const Dataset& d, const Estimand& e,
                               const std::string& method, Rng rng);

std::vector<std::string> known_estimators();
bool estimator_compatible(const std::string& method, EstimandKind kind);

}  // namespace causal

#endif
