#include <doctest.h>

#include <cmath>
#include <numeric>

#include "causal/error.hpp"
#include "causal/simulate.hpp"

using namespace causal;

namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / (v.size() - 1);
}

}  // namespace

TEST_CASE("dgp_example1 moments and structure") {
  SimulatedData sim = dgp_example1(50000, Rng(7));
  CHECK(sim.true_ate == 10.0);
  CHECK(sim.data.rows() == 50000);
  for (const char* c : {"t", "y", "z", "w"}) CHECK(sim.data.has_column(c));

  const auto& z = sim.data.column("z");
  const auto& w = sim.data.column("w");
  const auto& t = sim.data.column("t");
  for (std::size_t i = 0; i < 200; ++i) {
    CHECK((z[i] == 0.0 || z[i] == 1.0));
    CHECK((t[i] == 0.0 || t[i] == 1.0));
    // The threshold rule is deterministic given z and w.
    CHECK(t[i] == (2 * z[i] - 1 + w[i] >= 0 ? 1.0 : 0.0));
  }
  CHECK(std::abs(mean(z) - 0.5) < 0.02);
  CHECK(std::abs(mean(w)) < 0.02);
  CHECK(std::abs(variance(w) - 0.4) < 0.02);  // 0.4 is a variance
  // Var(y) = 100 (noise) + 40 (10w) + 25 (10t) + 2 cov(10t, 10w) ~ 179.5.
  CHECK(std::abs(variance(sim.data.column("y")) - 179.5) < 10.0);

  CHECK(sim.graph.has_edge("w", "t"));
  CHECK(sim.graph.has_edge("w", "y"));
  CHECK(sim.graph.has_edge("z", "t"));
  CHECK(sim.graph.has_edge("t", "y"));
  CHECK(sim.graph.edge_count() == 4);
}

TEST_CASE("dgp_example2 moments and structure") {
  SimulatedData sim = dgp_example2(50000, Rng(11));
  CHECK(sim.true_ate == 9.0);
  for (const char* c : {"t", "y", "m"}) CHECK(sim.data.has_column(c));

  const auto& t = sim.data.column("t");
  const auto& m = sim.data.column("m");
  double m_given_t1 = 0, m_given_t0 = 0, n1 = 0, n0 = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 1.0) {
      m_given_t1 += m[i];
      ++n1;
    } else {
      m_given_t0 += m[i];
      ++n0;
    }
  }
  CHECK(std::abs(m_given_t1 / n1 - 0.95) < 0.01);
  CHECK(std::abs(m_given_t0 / n0 - 0.05) < 0.01);
  // Var(y) = 1 (noise) + 100 * Var(m), Var(m) = 0.25.
  CHECK(std::abs(variance(sim.data.column("y")) - 26.0) < 1.0);

  CHECK(sim.graph.has_edge("t", "m"));
  CHECK(sim.graph.has_edge("m", "y"));
  CHECK(sim.graph.edge_count() == 2);
}

TEST_CASE("dgps are deterministic given the rng") {
  CHECK(dgp_example1(100, Rng(3)).data.to_csv() ==
        dgp_example1(100, Rng(3)).data.to_csv());
  CHECK(dgp_example1(100, Rng(3)).data.to_csv() !=
        dgp_example1(100, Rng(4)).data.to_csv());
  CHECK_THROWS_AS(dgp_example1(0, Rng(1)), ArgumentError);
}

TEST_CASE("generate_linear_dgp honors the config") {
  LinearDgpConfig cfg;
  cfg.n = 5000;
  cfg.num_confounders = 2;
  cfg.num_instruments = 1;
  cfg.effect = 4.0;
  cfg.seed = 99;
  SimulatedData sim = generate_linear_dgp(cfg);
  CHECK(sim.true_ate == 4.0);
  for (const char* c : {"t", "y", "w0", "w1", "z0"})
    CHECK(sim.data.has_column(c));
  CHECK_FALSE(sim.data.has_column("m"));
  CHECK(sim.graph.has_edge("w0", "t"));
  CHECK(sim.graph.has_edge("w1", "y"));
  CHECK(sim.graph.has_edge("z0", "t"));
  CHECK_FALSE(sim.graph.has_edge("z0", "y"));

  cfg.include_mediator = true;
  SimulatedData med = generate_linear_dgp(cfg);
  CHECK(med.data.has_column("m"));
  CHECK(med.graph.has_edge("t", "m"));
  CHECK(med.graph.has_edge("m", "y"));
  CHECK_FALSE(med.graph.has_edge("t", "y"));
  CHECK(med.true_ate == 4.0);
}

TEST_CASE("figure 1 variant 1 separates correct and faulty adjustment") {
  Figure1Result res = replicate_figure1(1, 30, 3000, Rng(5));
  CHECK(res.rows.size() == 60);
  CHECK(res.summary.correct_label == "adjust_w");
  CHECK(res.summary.faulty_label == "adjust_zw");
  CHECK(res.summary.true_ate == 10.0);
  CHECK(std::abs(res.summary.correct_mean - 10.0) < 0.7);
  // Conditioning on the instrument inflates the variance.
  CHECK(res.summary.faulty_std > res.summary.correct_std);
}

TEST_CASE("figure 1 variant 2 separates correct and faulty adjustment") {
  Figure1Result res = replicate_figure1(2, 30, 3000, Rng(5));
  CHECK(res.summary.correct_label == "no_adjustment");
  CHECK(res.summary.faulty_label == "adjust_m");
  CHECK(res.summary.true_ate == 9.0);
  CHECK(std::abs(res.summary.correct_mean - 9.0) < 0.5);
  // Conditioning on the mediator wipes out the effect.
  CHECK(std::abs(res.summary.faulty_mean) < 0.5);

  CHECK_THROWS_AS(replicate_figure1(3, 5, 100, Rng(1)), ArgumentError);
}

TEST_CASE("figure 1 csv is tidy and deterministic") {
  Figure1Result res = replicate_figure1(1, 3, 200, Rng(9));
  std::string csv = figure1_table_csv(res);
  CHECK(csv.rfind("dataset_index,estimator,ate\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv == figure1_table_csv(replicate_figure1(1, 3, 200, Rng(9))));
}
