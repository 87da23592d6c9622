#ifndef CAUSAL_REFUTE_HPP
#define CAUSAL_REFUTE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "causal/dataset.hpp"
#include "causal/estimate.hpp"
#include "causal/graph.hpp"
#include "causal/identify.hpp"
#include "causal/rng.hpp"

namespace causal {

// The full analysis a refuter re-runs: graph, chosen estimand, chosen
// estimator. estimator_override, when set, replaces the estimation step
// entirely; the test suites use it to plant known-bad estimators.
struct Pipeline {
  CausalGraph graph;
  Estimand estimand;
  std::string estimator = "linear_regression";
  std::function<double(const Dataset&, Rng)> estimator_override;

  EffectEstimate run_estimate(const Dataset& d, Rng rng) const;
  double run(const Dataset& d, Rng rng) const;
};

struct RefutationReport {
  std::string refuter;
  std::string category;  // "integration", "unit" or "model_perturbation"
  double original_ate = 0.0;
  std::vector<double> refuted_ates;
  double target = 0.0;
  double p_value = 1.0;
  double significance_level = 0.05;
  bool passed = false;
  int replications = 0;
  std::uint64_t seed = 0;
  // Bootstrap refuter additionally publishes the percentile interval.
  bool has_interval = false;
  double interval_low = 0.0;
  double interval_high = 0.0;
};

struct RefuterOptions {
  int replications = 100;
  double significance_level = 0.05;
  double subset_fraction = 0.8;
  double simulated_true_effect = 0.0;
  // Placebo mode: fresh Bernoulli draws at the observed treatment rate, or
  // a permutation of the observed column. Both sever treatment-covariate
  // dependence.
  bool placebo_permute = false;
};

// Replaces the treatment with an independent random variable; the
// estimate should go to zero. Two-sided z-test of the refuted-ate mean
// against 0.
RefutationReport refute_placebo_treatment(const Pipeline& pipeline,
                                          const Dataset& d,
                                          const RefuterOptions& opts,
                                          std::uint64_t seed);

// Replaces the outcome with Normal(mean(y), var(y)) noise; target 0.
RefutationReport refute_dummy_outcome(const Pipeline& pipeline,
                                      const Dataset& d,
                                      const RefuterOptions& opts,
                                      std::uint64_t seed);

// Regenerates the outcome from a fitted linear model with the treatment
// coefficient forced to true_effect and residuals resampled; the estimate
// should recover true_effect.
RefutationReport refute_simulated_outcome(const Pipeline& pipeline,
                                          const Dataset& d,
                                          double true_effect,
                                          const RefuterOptions& opts,
                                          std::uint64_t seed);

// Adds an independent standard-normal column as a common cause (both to
// the graph and to the adjustment set); the estimate should not move.
// Backdoor pipelines only.
RefutationReport refute_random_common_cause(const Pipeline& pipeline,
                                            const Dataset& d,
                                            const RefuterOptions& opts,
                                            std::uint64_t seed);

// Re-estimates on random subsets; passes when the original estimate lies
// inside the [2.5%, 97.5%] percentile band of the refuted estimates.
RefutationReport refute_data_subset(const Pipeline& pipeline,
                                    const Dataset& d, double fraction,
                                    const RefuterOptions& opts,
                                    std::uint64_t seed);

// Same with bootstrap resamples; also publishes the percentile interval.
RefutationReport refute_bootstrap(const Pipeline& pipeline, const Dataset& d,
                                  const RefuterOptions& opts,
                                  std::uint64_t seed);

struct SensitivityCell {
  double kappa_t = 0.0;  // confounder strength on treatment, log-odds units
  double kappa_y = 0.0;  // confounder strength on outcome, outcome units
  double adjusted_ate = 0.0;
};

struct SensitivitySurface {
  double original_ate = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<SensitivityCell> grid;  // row-major over (kappa_t, kappa_y)
};

// Simulated-unobserved-confounder sensitivity: u is drawn from its
// conditional given the observed treatment under the logistic model
// P(t=1|x,u) = sigmoid(logit(e(x)) + kappa_t u), then kappa_y * u is added
// to the outcome and the pipeline re-run. No pass/fail verdict; both grids
// must be nonempty and contain 0. Backdoor pipelines only.
SensitivitySurface sensitivity_unobserved_confounder(
    const Pipeline& pipeline, const Dataset& d,
    const std::vector<double>& kappa_t_grid,
    const std::vector<double>& kappa_y_grid, int replications,
    std::uint64_t seed);

// Report-producing refuter names accepted by run_refuter.
std::vector<std::string> known_refuters();

// Dispatch by name: placebo_treatment, dummy_outcome, simulated_outcome,
// random_common_cause, data_subset, bootstrap.
RefutationReport run_refuter(const std::string& name,
                             const Pipeline& pipeline, const Dataset& d,
                             const RefuterOptions& opts, std::uint64_t seed);

}  // namespace causal

#endif
