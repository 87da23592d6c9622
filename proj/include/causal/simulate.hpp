#ifndef CAUSAL_SIMULATE_HPP
#define CAUSAL_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "causal/dataset.hpp"
#include "causal/graph.hpp"
#include "causal/rng.hpp"

namespace causal {

struct SimulatedData {
  Dataset data;
  CausalGraph graph;
  double true_ate = 0.0;
};

// Normal(mu, v) parameters throughout this module follow N(mu, sigma^2)
// notation: the second argument is a VARIANCE. set the *_stddev config
// switch to treat it as a standard deviation instead.

// Instrument DGP: z ~ Bernoulli(0.5), w ~ Normal(0, 0.4),
// t = 1{2z - 1 + w >= 0}, y = 10 t + 10 w + Normal(0, 100). True ATE 10.
// Columns {t, y, z, w}; the graph is w -> {t,y}, z -> t, t -> y.
SimulatedData dgp_example1(std::size_t n, Rng rng);

// Mediator DGP: t ~ Bernoulli(0.5), m ~ Bernoulli(0.95 t + 0.05 (1 - t)),
// y = 10 m + Normal(0, 1). True ATE 10 * (0.95 - 0.05) = 9.
// Columns {t, y, m}; the graph is t -> m -> y.
SimulatedData dgp_example2(std::size_t n, Rng rng);

struct LinearDgpConfig {
  std::size_t n = 10000;
  std::size_t num_confounders = 1;
  std::size_t num_instruments = 1;
  bool include_mediator = false;
  double effect = 10.0;           // true ATE in outcome units
  double noise_variance = 100.0;  // variance of the additive outcome noise
  std::uint64_t seed = 0;
};

// Configurable linear structural model with known ground truth:
//   w_j ~ Normal(0, 0.4)                     confounders, named w0, w1, ...
//   z_j ~ Bernoulli(0.5)                     instruments, named z0, z1, ...
//   t ~ Bernoulli(sigmoid(2 (sum_j (2 z_j - 1) + sum_j w_j)))
//   without mediator:  y = effect * t + sum_j 10 w_j + eps
//   with mediator:     m ~ Bernoulli(0.95 t + 0.05 (1 - t)),
//                      y = (effect / 0.9) * m + sum_j 10 w_j + eps
//   eps ~ Normal(0, noise_variance)
// Either way the true ATE equals cfg.effect.
SimulatedData generate_linear_dgp(const LinearDgpConfig& cfg);

struct Figure1Row {
  std::size_t dataset_index;
  std::string estimator;  // e.g. "adjust_w" (correct) / "adjust_zw" (faulty)
  double ate;
};

struct Figure1Summary {
  std::string correct_label;
  std::string faulty_label;
  double correct_mean = 0.0;
  double correct_std = 0.0;
  double faulty_mean = 0.0;
  double faulty_std = 0.0;
  double true_ate = 0.0;
};

struct Figure1Result {
  std::vector<Figure1Row> rows;  // tidy: one row per (dataset, estimator)
  Figure1Summary summary;
};

// Estimate-distribution replication: `n_datasets` draws from the example
// DGP, each estimated with the correct and the faulty adjustment.
// Variant 1: adjust {w} vs {z,w}; variant 2: adjust {} vs {m}.
Figure1Result replicate_figure1(int variant, std::size_t n_datasets,
                                std::size_t n, Rng rng);

std::string figure1_table_csv(const Figure1Result& result);

}  // namespace causal

#endif
