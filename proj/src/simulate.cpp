#include "causal/simulate.hpp"

#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "causal/error.hpp"
#include "causal/estimate.hpp"

namespace causal {

namespace {

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return v.empty() ? 0.0 : m / static_cast<double>(v.size());
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Deterministic parallel map over [0, count): slot i of the result only
// depends on i and its own derived seed stream.
template <typename Fn>
std::vector<double> parallel_map(std::size_t count, Fn&& fn) {
  std::vector<double> out(count);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(count)));
  std::vector<std::future<void>> futures;
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
    }));
  }
  for (auto& f : futures) f.get();
  return out;
}

}  // namespace

SimulatedData dgp_example1(std::size_t n, Rng rng) {
  if (n == 0) throw ArgumentError("dgp_example1: n must be at least 1");
  const double w_sd = std::sqrt(0.4);
  const double eps_sd = std::sqrt(100.0);
  std::vector<double> t(n), y(n), z(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    w[i] = rng.normal(0.0, w_sd);
    // sigmoid(2z - 1 + w) >= 0.5  <=>  2z - 1 + w >= 0; ties go to t = 1.
    t[i] = (2.0 * z[i] - 1.0 + w[i] >= 0.0) ? 1.0 : 0.0;
    y[i] = 10.0 * t[i] + 10.0 * w[i] + rng.normal(0.0, eps_sd);
  }
  Dataset data({"t", "y", "z", "w"},
               {std::move(t), std::move(y), std::move(z), std::move(w)});
  CausalGraph graph = parse_graph(
      "digraph { w -> t; w -> y; z -> t; t -> y; }");
  return {std::move(data), std::move(graph), 10.0};
}

SimulatedData dgp_example2(std::size_t n, Rng rng) {
  if (n == 0) throw ArgumentError("dgp_example2: n must be at least 1");
  std::vector<double> t(n), y(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    m[i] = rng.bernoulli(t[i] == 1.0 ? 0.95 : 0.05) ? 1.0 : 0.0;
    y[i] = 10.0 * m[i] + rng.normal(0.0, 1.0);
  }
  Dataset data({"t", "y", "m"}, {std::move(t), std::move(y), std::move(m)});
  CausalGraph graph = parse_graph("digraph { t -> m; m -> y; }");
  return {std::move(data), std::move(graph), 9.0};
}

SimulatedData generate_linear_dgp(const LinearDgpConfig& cfg) {
  if (cfg.n == 0) throw ArgumentError("generate_linear_dgp: n must be >= 1");
  if (cfg.noise_variance < 0.0)
    throw ArgumentError("generate_linear_dgp: noise_variance must be >= 0");

  Rng rng(cfg.seed);
  const std::size_t n = cfg.n;
  const double w_sd = std::sqrt(0.4);
  const double eps_sd = std::sqrt(cfg.noise_variance);

  std::vector<std::vector<double>> confounders(cfg.num_confounders,
                                               std::vector<double>(n));
  std::vector<std::vector<double>> instruments(cfg.num_instruments,
                                               std::vector<double>(n));
  std::vector<double> t(n), y(n), m(cfg.include_mediator ? n : 0);

  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    for (auto& w : confounders) {
      w[i] = rng.normal(0.0, w_sd);
      score += w[i];
    }
    for (auto& z : instruments) {
      z[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
      score += 2.0 * z[i] - 1.0;
    }
    t[i] = rng.bernoulli(sigmoid(2.0 * score)) ? 1.0 : 0.0;
    double outcome = 0.0;
    if (cfg.include_mediator) {
      m[i] = rng.bernoulli(t[i] == 1.0 ? 0.95 : 0.05) ? 1.0 : 0.0;
      outcome += (cfg.effect / 0.9) * m[i];
    } else {
      outcome += cfg.effect * t[i];
    }
    for (const auto& w : confounders) outcome += 10.0 * w[i];
    outcome += rng.normal(0.0, eps_sd);
    y[i] = outcome;
  }

  std::vector<std::string> names{"t", "y"};
  std::vector<std::vector<double>> columns{std::move(t), std::move(y)};
  std::ostringstream dot;
  dot << "digraph {\n";
  for (std::size_t j = 0; j < cfg.num_confounders; ++j) {
    std::string name = "w" + std::to_string(j);
    names.push_back(name);
    columns.push_back(std::move(confounders[j]));
    dot << "  " << name << " -> t;\n  " << name << " -> y;\n";
  }
  for (std::size_t j = 0; j < cfg.num_instruments; ++j) {
    std::string name = "z" + std::to_string(j);
    names.push_back(name);
    columns.push_back(std::move(instruments[j]));
    dot << "  " << name << " -> t;\n";
  }
  if (cfg.include_mediator) {
    names.push_back("m");
    columns.push_back(std::move(m));
    dot << "  t -> m;\n  m -> y;\n";
  } else {
    dot << "  t -> y;\n";
  }
  dot << "}\n";

  return {Dataset(std::move(names), std::move(columns)),
          parse_graph(dot.str()), cfg.effect};
}

Figure1Result replicate_figure1(int variant, std::size_t n_datasets,
                                std::size_t n, Rng rng) {
  if (variant != 1 && variant != 2)
    throw ArgumentError("replicate_figure1: variant must be 1 or 2, got " +
                        std::to_string(variant));
  if (n_datasets == 0 || n == 0)
    throw ArgumentError("replicate_figure1: n_datasets and n must be >= 1");

  Figure1Result result;
  auto& s = result.summary;
  NodeSet correct_adj, faulty_adj;
  if (variant == 1) {
    s.correct_label = "adjust_w";
    s.faulty_label = "adjust_zw";
    correct_adj = {"w"};
    faulty_adj = {"w", "z"};
    s.true_ate = 10.0;
  } else {
    s.correct_label = "no_adjustment";
    s.faulty_label = "adjust_m";
    faulty_adj = {"m"};
    s.true_ate = 9.0;
  }

  auto ate_for = [&](std::size_t i, const NodeSet& adjustment) {
    Rng stream = rng.derive(i);
    SimulatedData sim =
        variant == 1 ? dgp_example1(n, stream) : dgp_example2(n, stream);
    Estimand e;
    e.kind = EstimandKind::kBackdoor;
    e.treatment = "t";
    e.outcome = "y";
    e.adjustment_set = adjustment;
    return estimate_backdoor_regression(sim.data, e).ate;
  };

  std::vector<double> correct = parallel_map(
      n_datasets, [&](std::size_t i) { return ate_for(i, correct_adj); });
  std::vector<double> faulty = parallel_map(
      n_datasets, [&](std::size_t i) { return ate_for(i, faulty_adj); });

  for (std::size_t i = 0; i < n_datasets; ++i) {
    result.rows.push_back({i, s.correct_label, correct[i]});
    result.rows.push_back({i, s.faulty_label, faulty[i]});
  }
  s.correct_mean = mean_of(correct);
  s.correct_std = sample_std(correct);
  s.faulty_mean = mean_of(faulty);
  s.faulty_std = sample_std(faulty);
  return result;
}

std::string figure1_table_csv(const Figure1Result& result) {
  std::ostringstream out;
  out << "dataset_index,estimator,ate\n";
  for (const auto& row : result.rows) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", row.ate);
    out << row.dataset_index << ',' << row.estimator << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace causal
