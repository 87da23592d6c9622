#include <doctest.h>

#include <algorithm>

#include "causal/error.hpp"
#include "causal/identify.hpp"
#include "oracles.hpp"

using namespace causal;

namespace {

const char* kInstrumentGraph = "digraph { w -> t; w -> y; z -> t; t -> y; }";
const char* kMediatorChain = "digraph { t -> m; m -> y; }";
const char* kFrontdoor =
    "digraph { u [observed=\"no\"]; u -> t; u -> y; t -> m; m -> y; }";

}  // namespace

TEST_CASE("backdoor sets on the instrument graph") {
  CausalGraph g = parse_graph(kInstrumentGraph);
  auto sets = find_backdoor_sets(g, "t", "y");
  REQUIRE(sets.size() == 1);
  CHECK(sets[0] == NodeSet{"w"});

  // All valid sets: {w} and {w,z}; z alone blocks nothing.
  auto all = find_backdoor_sets(g, "t", "y", true);
  REQUIRE(all.size() == 2);
  CHECK(all[0] == NodeSet{"w"});
  CHECK(all[1] == NodeSet{"w", "z"});
}

TEST_CASE("backdoor sets on the mediator chain") {
  CausalGraph g = parse_graph(kMediatorChain);
  auto sets = find_backdoor_sets(g, "t", "y");
  REQUIRE(sets.size() == 1);
  CHECK(sets[0].empty());
  // m descends from t, so it can never enter a valid set.
  for (const auto& s : find_backdoor_sets(g, "t", "y", true))
    CHECK_FALSE(s.count("m"));
}

TEST_CASE("unobserved confounder blocks backdoor identification") {
  CausalGraph g = parse_graph(
      "digraph { u [observed=\"no\"]; u -> t; u -> y; t -> y; }");
  CHECK(find_backdoor_sets(g, "t", "y").empty());
}

TEST_CASE("backdoor argument validation") {
  CausalGraph g = parse_graph(kInstrumentGraph);
  CHECK_THROWS_AS(find_backdoor_sets(g, "t", "t"), ArgumentError);
  CHECK_THROWS_AS(find_backdoor_sets(g, "q", "y"), ArgumentError);
}

TEST_CASE("instruments") {
  CausalGraph g = parse_graph(kInstrumentGraph);
  CHECK(find_instruments(g, "t", "y") == NodeSet{"z"});

  // Direct z -> y edge disqualifies z.
  CausalGraph direct =
      parse_graph("digraph { z -> t; z -> y; t -> y; }");
  CHECK(direct.d_separated({"z"}, {"y"},
                           NodeSet{}) == false);
  CHECK(find_instruments(direct, "t", "y").empty());

  // An unobserved candidate is never reported.
  CausalGraph latent = parse_graph(
      "digraph { z [observed=\"no\"]; z -> t; w -> t; w -> y; t -> y; }");
  CHECK(find_instruments(latent, "t", "y").empty());
}

TEST_CASE("frontdoor set") {
  CausalGraph g = parse_graph(kFrontdoor);
  auto fd = find_frontdoor_set(g, "t", "y");
  REQUIRE(fd.has_value());
  CHECK(*fd == NodeSet{"m"});

  // Direct t -> y edge leaves a directed path uncovered.
  CausalGraph leaky = parse_graph(
      "digraph { u [observed=\"no\"]; u -> t; u -> y; t -> m; m -> y;"
      " t -> y; }");
  CHECK_FALSE(find_frontdoor_set(leaky, "t", "y").has_value());

  // Confounded mediator fails the third condition.
  CausalGraph confounded = parse_graph(
      "digraph { u [observed=\"no\"]; v [observed=\"no\"]; u -> t; u -> y;"
      " t -> m; m -> y; v -> m; v -> y; }");
  CHECK_FALSE(find_frontdoor_set(confounded, "t", "y").has_value());

  CHECK_FALSE(find_frontdoor_set(parse_graph(kInstrumentGraph), "t", "y").has_value());
}

TEST_CASE("variable roles") {
  CausalGraph g = parse_graph(kInstrumentGraph);
  CHECK(classify_variable(g, "w", "t", "y") == VariableRole::kConfounder);
  CHECK(classify_variable(g, "z", "t", "y") == VariableRole::kInstrument);

  CausalGraph chain = parse_graph(kMediatorChain);
  CHECK(classify_variable(chain, "m", "t", "y") == VariableRole::kMediator);

  CausalGraph coll = parse_graph("digraph { t -> y; t -> c; y -> c; }");
  CHECK(classify_variable(coll, "c", "t", "y") == VariableRole::kCollider);

  CausalGraph other = parse_graph("digraph { t -> y; x -> q; }");
  CHECK(classify_variable(other, "x", "t", "y") == VariableRole::kOther);

  CHECK(to_string(VariableRole::kConfounder) == "confounder");
}

TEST_CASE("identify_effect on the examples") {
  CausalGraph ig = parse_graph(kInstrumentGraph);
  auto estimands = identify_effect(ig, "t", "y");
  REQUIRE(estimands.size() == 2);
  CHECK(estimands[0].kind == EstimandKind::kBackdoor);
  CHECK(estimands[0].adjustment_set == NodeSet{"w"});
  CHECK(estimands[1].kind == EstimandKind::kIv);
  CHECK(estimands[1].instrument_set == NodeSet{"z"});

  auto chain = identify_effect(parse_graph(kMediatorChain), "t", "y");
  REQUIRE(chain.size() >= 1);
  CHECK(chain[0].kind == EstimandKind::kBackdoor);
  CHECK(chain[0].adjustment_set.empty());

  auto fd = identify_effect(parse_graph(kFrontdoor), "t", "y");
  REQUIRE(fd.size() == 1);
  CHECK(fd[0].kind == EstimandKind::kFrontdoor);
  CHECK(fd[0].mediator_set == NodeSet{"m"});

  // Fully latent confounding, no mediator, no instrument: nothing.
  CausalGraph stuck = parse_graph(
      "digraph { u [observed=\"no\"]; u -> t; u -> y; t -> y; }");
  CHECK(identify_effect(stuck, "t", "y").empty());
}

TEST_CASE("identify_effect argument validation") {
  CausalGraph g = parse_graph(kInstrumentGraph);
  CHECK_THROWS_AS(identify_effect(g, "t", "t"), ArgumentError);
  CHECK_THROWS_AS(identify_effect(g, "missing", "y"), ArgumentError);
  // Outcome upstream of treatment is a usage error, not "no estimand".
  CHECK_THROWS_AS(identify_effect(g, "y", "t"), ArgumentError);

  CausalGraph latent_t = parse_graph(
      "digraph { t [observed=\"no\"]; t -> y; }");
  CHECK_THROWS_AS(identify_effect(latent_t, "t", "y"), ArgumentError);
}

TEST_CASE("estimand kind strings") {
  CHECK(to_string(EstimandKind::kBackdoor) == "backdoor");
  CHECK(estimand_kind_from_string("frontdoor") == EstimandKind::kFrontdoor);
  CHECK(estimand_kind_from_string("iv") == EstimandKind::kIv);
  CHECK_THROWS_AS(estimand_kind_from_string("sideways"), ArgumentError);
}

TEST_CASE("backdoor search matches brute force on random dags") {
  Rng rng(29);
  int compared = 0;
  for (int trial = 0; trial < 150; ++trial) {
    CausalGraph g = oracle::random_dag(rng);
    auto names = g.node_names();
    if (names.size() < 2) continue;
    std::string t = names[rng.uniform_index(names.size())];
    std::string y = names[rng.uniform_index(names.size())];
    if (t == y || !g.is_observed(t) || !g.is_observed(y)) continue;
    if (g.ancestors({t}).count(y)) std::swap(t, y);
    if (g.ancestors({t}).count(y)) continue;

    auto oracle_all = oracle::backdoor_sets_bruteforce(g, t, y);
    auto all = find_backdoor_sets(g, t, y, true);
    CHECK(all == oracle_all);
    CHECK(find_backdoor_sets(g, t, y) == oracle::minimal_sets(oracle_all));
    ++compared;
  }
  CHECK(compared > 50);
}
