#include "causal/refute.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "causal/error.hpp"

namespace causal {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return v.empty() ? 0.0 : m / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Two-sided one-sample z-test of the replicate mean against `target`.
double z_test_p_value(const std::vector<double>& reps, double target) {
  const double sd = sample_std(reps);
  const double mean = mean_of(reps);
  if (sd == 0.0) return mean == target ? 1.0 : 0.0;
  const double z =
      (mean - target) / (sd / std::sqrt(static_cast<double>(reps.size())));
  return 2.0 * (1.0 - normal_cdf(std::abs(z)));
}

// Two-sided empirical p-value of `value` within the replicate
// distribution, ties counted inclusively so a degenerate distribution at
// `value` yields p = 1.
double coverage_p_value(const std::vector<double>& reps, double value) {
  if (reps.empty()) return 0.0;
  double le = 0.0, ge = 0.0;
  for (double x : reps) {
    if (x <= value) ++le;
    if (x >= value) ++ge;
  }
  const double n = static_cast<double>(reps.size());
  return std::min(1.0, 2.0 * std::min(le / n, ge / n));
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

void require_replications(int replications) {
  if (replications < 1)
    throw ArgumentError("replications must be at least 1, got " +
                        std::to_string(replications));
}

// Deterministic parallel replication loop. Replication i derives its own
// seed stream, so scheduling cannot change any result.
std::vector<double> run_replications(
    int replications,
    const std::function<double(int, Rng)>& replicate, const Rng& root) {
  std::vector<double> out(static_cast<std::size_t>(replications));
  const unsigned workers = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                             static_cast<unsigned>(replications)));
  std::vector<std::future<void>> futures;
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (int i = static_cast<int>(w); i < replications;
           i += static_cast<int>(workers))
        out[static_cast<std::size_t>(i)] =
            replicate(i, root.derive(static_cast<std::uint64_t>(i)));
    }));
  }
  for (auto& f : futures) f.get();
  return out;
}

RefutationReport make_zero_target_report(
    const std::string& name, const std::string& category,
    const Pipeline& pipeline, const Dataset& d, double target,
    const RefuterOptions& opts, std::uint64_t seed,
    const std::function<Dataset(const Dataset&, Rng&)>& perturb) {
  require_replications(opts.replications);
  Rng root(seed);
  RefutationReport report;
  report.refuter = name;
  report.category = category;
  report.seed = seed;
  report.replications = opts.replications;
  report.significance_level = opts.significance_level;
  report.target = target;
  report.original_ate = pipeline.run(d, root.derive(~std::uint64_t{0}));
  report.refuted_ates = run_replications(
      opts.replications,
      [&](int, Rng rng) {
        Rng perturb_rng = rng.derive(0);
        Dataset modified = perturb(d, perturb_rng);
        return pipeline.run(modified, rng.derive(1));
      },
      root);
  report.p_value = z_test_p_value(report.refuted_ates, target);
  report.passed = report.p_value >= report.significance_level;
  return report;
}

}  // namespace

EffectEstimate Pipeline::run_estimate(const Dataset& d, Rng rng) const {
  if (estimator_override) {
    EffectEstimate est;
    est.ate = estimator_override(d, rng);
    est.method = "override";
    est.estimand = estimand;
    est.n = d.rows();
    est.ci_low = est.ci_high = est.ate;
    return est;
  }
  return estimate_effect(d, estimand, estimator, rng);
}

double Pipeline::run(const Dataset& d, Rng rng) const {
  if (estimator_override) return estimator_override(d, rng);
  return estimate_effect(d, estimand, estimator, rng).ate;
}

RefutationReport refute_placebo_treatment(const Pipeline& pipeline,
                                          const Dataset& d,
                                          const RefuterOptions& opts,
                                          std::uint64_t seed) {
  const auto& t = d.column(pipeline.estimand.treatment);
  const double rate = mean_of(t);
  auto perturb = [&, rate](const Dataset& base, Rng& rng) {
    std::vector<double> placebo(base.rows());
    if (opts.placebo_permute) {
      placebo = base.column(pipeline.estimand.treatment);
      for (std::size_t i = placebo.size(); i > 1; --i)
        std::swap(placebo[i - 1], placebo[rng.uniform_index(i)]);
    } else {
      for (auto& v : placebo) v = rng.bernoulli(rate) ? 1.0 : 0.0;
    }
    return base.replace_column(pipeline.estimand.treatment,
                               std::move(placebo));
  };
  return make_zero_target_report("placebo_treatment", "integration", pipeline,
                                 d, 0.0, opts, seed, perturb);
}

RefutationReport refute_dummy_outcome(const Pipeline& pipeline,
                                      const Dataset& d,
                                      const RefuterOptions& opts,
                                      std::uint64_t seed) {
  const auto& y = d.column(pipeline.estimand.outcome);
  const double mean = mean_of(y);
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  const double sd =
      y.size() > 1 ? std::sqrt(ss / static_cast<double>(y.size() - 1)) : 0.0;
  auto perturb = [&, mean, sd](const Dataset& base, Rng& rng) {
    std::vector<double> dummy(base.rows());
    for (auto& v : dummy) v = rng.normal(mean, sd);
    return base.replace_column(pipeline.estimand.outcome, std::move(dummy));
  };
  return make_zero_target_report("dummy_outcome", "integration", pipeline, d,
                                 0.0, opts, seed, perturb);
}

RefutationReport refute_simulated_outcome(const Pipeline& pipeline,
                                          const Dataset& d,
                                          double true_effect,
                                          const RefuterOptions& opts,
                                          std::uint64_t seed) {
  // Linear outcome model on the original data; only the treatment
  // coefficient is replaced when regenerating.
  std::vector<std::string> columns{pipeline.estimand.treatment};
  columns.insert(columns.end(), pipeline.estimand.adjustment_set.begin(),
                 pipeline.estimand.adjustment_set.end());
  const std::size_t n = d.rows();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = d.column(columns[c]);
    for (std::size_t i = 0; i < n; ++i)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = col[i];
  }
  const auto& y = d.column(pipeline.estimand.outcome);
  Eigen::VectorXd yv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) yv[static_cast<Eigen::Index>(i)] = y[i];
  const LinearFit fit = ols_fit(x, yv, columns);

  Eigen::VectorXd coef = fit.coefficients;
  std::vector<double> residuals(n);
  {
    Eigen::MatrixXd with_intercept(x.rows(), x.cols() + 1);
    with_intercept.leftCols(x.cols()) = x;
    with_intercept.col(x.cols()).setOnes();
    const Eigen::VectorXd fitted = with_intercept * coef;
    for (std::size_t i = 0; i < n; ++i)
      residuals[i] = y[i] - fitted[static_cast<Eigen::Index>(i)];
  }
  coef[0] = true_effect;

  auto perturb = [&, coef](const Dataset& base, Rng& rng) {
    std::vector<double> sim(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = coef[coef.size() - 1];  // intercept
      for (std::size_t c = 0; c < columns.size(); ++c)
        v += coef[static_cast<Eigen::Index>(c)] *
             x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
      v += residuals[rng.uniform_index(n)];
      sim[i] = v;
    }
    return base.replace_column(pipeline.estimand.outcome, std::move(sim));
  };
  RefutationReport report = make_zero_target_report(
      "simulated_outcome", "integration", pipeline, d, true_effect, opts,
      seed, perturb);
  return report;
}

RefutationReport refute_random_common_cause(const Pipeline& pipeline,
                                            const Dataset& d,
                                            const RefuterOptions& opts,
                                            std::uint64_t seed) {
  if (pipeline.estimand.kind != EstimandKind::kBackdoor)
    throw IncompatibleError(
        "random_common_cause requires a backdoor pipeline");
  require_replications(opts.replications);

  std::string name = "random_common_cause";
  while (d.has_column(name) || pipeline.graph.has_node(name)) name += "_";

  // The synthetic cause enters the model, not just the data: the graph
  // gains a node with edges into treatment and outcome, and the
  // adjustment set gains the new column.
  Pipeline augmented = pipeline;
  augmented.graph = pipeline.graph.with_added_node(
      name, true, {pipeline.estimand.treatment, pipeline.estimand.outcome});
  augmented.estimand.adjustment_set.insert(name);

  Rng root(seed);
  RefutationReport report;
  report.refuter = "random_common_cause";
  report.category = "model_perturbation";
  report.seed = seed;
  report.replications = opts.replications;
  report.significance_level = opts.significance_level;
  report.original_ate = pipeline.run(d, root.derive(~std::uint64_t{0}));
  report.target = report.original_ate;
  report.refuted_ates = run_replications(
      opts.replications,
      [&](int, Rng rng) {
        Rng perturb_rng = rng.derive(0);
        std::vector<double> u(d.rows());
        for (auto& v : u) v = perturb_rng.normal();
        Dataset modified = d.with_column(name, std::move(u));
        return augmented.run(modified, rng.derive(1));
      },
      root);
  report.p_value = z_test_p_value(report.refuted_ates, report.target);
  report.passed = report.p_value >= report.significance_level;
  return report;
}

namespace {

RefutationReport stability_report(const std::string& name,
                                  const Pipeline& pipeline, const Dataset& d,
                                  const RefuterOptions& opts,
                                  std::uint64_t seed, bool bootstrap,
                                  double fraction) {
  require_replications(opts.replications);
  Rng root(seed);
  RefutationReport report;
  report.refuter = name;
  report.category = "unit";
  report.seed = seed;
  report.replications = opts.replications;
  report.significance_level = opts.significance_level;
  report.original_ate = pipeline.run(d, root.derive(~std::uint64_t{0}));
  report.target = report.original_ate;
  report.refuted_ates = run_replications(
      opts.replications,
      [&](int, Rng rng) {
        Rng resample_rng = rng.derive(0);
        Dataset modified = bootstrap
                               ? d.bootstrap_sample(resample_rng)
                               : d.subset_sample(fraction, resample_rng);
        return pipeline.run(modified, rng.derive(1));
      },
      root);
  report.p_value = coverage_p_value(report.refuted_ates, report.original_ate);
  report.passed = report.p_value >= report.significance_level;
  if (bootstrap) {
    report.has_interval = true;
    report.interval_low = percentile(report.refuted_ates, 0.025);
    report.interval_high = percentile(report.refuted_ates, 0.975);
  }
  return report;
}

}  // namespace

RefutationReport refute_data_subset(const Pipeline& pipeline,
                                    const Dataset& d, double fraction,
                                    const RefuterOptions& opts,
                                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ArgumentError("data_subset fraction must lie in (0, 1], got " +
                        std::to_string(fraction));
  return stability_report("data_subset", pipeline, d, opts, seed, false,
                          fraction);
}

RefutationReport refute_bootstrap(const Pipeline& pipeline, const Dataset& d,
                                  const RefuterOptions& opts,
                                  std::uint64_t seed) {
  return stability_report("bootstrap", pipeline, d, opts, seed, true, 1.0);
}

SensitivitySurface sensitivity_unobserved_confounder(
    const Pipeline& pipeline, const Dataset& d,
    const std::vector<double>& kappa_t_grid,
    const std::vector<double>& kappa_y_grid, int replications,
    std::uint64_t seed) {
  if (pipeline.estimand.kind != EstimandKind::kBackdoor)
    throw IncompatibleError(
        "sensitivity analysis requires a backdoor pipeline");
  require_replications(replications);
  auto check_grid = [](const std::vector<double>& grid, const char* name) {
    if (grid.empty())
      throw ArgumentError(std::string(name) + " grid is empty");
    if (std::find(grid.begin(), grid.end(), 0.0) == grid.end())
      throw ArgumentError(std::string(name) + " grid must contain 0");
  };
  check_grid(kappa_t_grid, "kappa_t");
  check_grid(kappa_y_grid, "kappa_y");

  const auto& t = d.column(pipeline.estimand.treatment);
  const auto& y = d.column(pipeline.estimand.outcome);
  const std::size_t n = d.rows();

  // Fitted propensity logits on the adjustment set.
  std::vector<std::string> adj(pipeline.estimand.adjustment_set.begin(),
                               pipeline.estimand.adjustment_set.end());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(adj.size()));
  for (std::size_t c = 0; c < adj.size(); ++c) {
    const auto& col = d.column(adj[c]);
    for (std::size_t i = 0; i < n; ++i)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = col[i];
  }
  Eigen::VectorXd tv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) tv[static_cast<Eigen::Index>(i)] = t[i];
  const LogisticFit propensity = logistic_fit(x, tv);
  Eigen::MatrixXd design(x.rows(), x.cols() + 1);
  if (x.cols() > 0) design.leftCols(x.cols()) = x;
  design.col(x.cols()).setOnes();
  const Eigen::VectorXd logits = design * propensity.coefficients;

  Rng root(seed);
  SensitivitySurface surface;
  surface.seed = seed;
  surface.replications = replications;
  surface.original_ate = pipeline.run(d, root.derive(~std::uint64_t{0}));

  std::uint64_t cell_index = 0;
  for (double kt : kappa_t_grid) {
    for (double ky : kappa_y_grid) {
      Rng cell_root = root.derive(cell_index++);
      std::vector<double> reps(static_cast<std::size_t>(replications));
      for (int r = 0; r < replications; ++r) {
        Rng rng = cell_root.derive(static_cast<std::uint64_t>(r));
        // u | t under P(t=1 | x, u) = sigmoid(logit(e(x)) + kt*u), via
        // rejection from the N(0,1) proposal. The observed treatment is
        // kept, so kt = 0 leaves the data untouched up to the ky term.
        std::vector<double> shifted(n);
        for (std::size_t i = 0; i < n; ++i) {
          double u;
          for (;;) {
            u = rng.normal();
            const double p =
                sigmoid(logits[static_cast<Eigen::Index>(i)] + kt * u);
            const double accept = t[i] == 1.0 ? p : 1.0 - p;
            if (rng.uniform01() < accept) break;
          }
          shifted[i] = y[i] + ky * u;
        }
        Dataset modified = d.replace_column(pipeline.estimand.outcome,
                                            std::move(shifted));
        reps[static_cast<std::size_t>(r)] =
            pipeline.run(modified, rng.derive(~std::uint64_t{0}));
      }
      surface.grid.push_back({kt, ky, mean_of(reps)});
    }
  }
  return surface;
}

std::vector<std::string> known_refuters() {
  return {"placebo_treatment", "dummy_outcome",       "simulated_outcome",
          "random_common_cause", "data_subset",       "bootstrap"};
}

RefutationReport run_refuter(const std::string& name,
                             const Pipeline& pipeline, const Dataset& d,
                             const RefuterOptions& opts, std::uint64_t seed) {
  if (name == "placebo_treatment")
    return refute_placebo_treatment(pipeline, d, opts, seed);
  if (name == "dummy_outcome")
    return refute_dummy_outcome(pipeline, d, opts, seed);
  if (name == "simulated_outcome")
    return refute_simulated_outcome(pipeline, d, opts.simulated_true_effect,
                                    opts, seed);
  if (name == "random_common_cause")
    return refute_random_common_cause(pipeline, d, opts, seed);
  if (name == "data_subset")
    return refute_data_subset(pipeline, d, opts.subset_fraction, opts, seed);
  if (name == "bootstrap") return refute_bootstrap(pipeline, d, opts, seed);
  std::string names;
  for (const auto& k : known_refuters()) {
    if (!names.empty()) names += ", ";
    names += k;
  }
  throw UnknownMethodError("unknown refuter '" + name +
                           "'; valid refuters: " + names);
}

}  // namespace causal
