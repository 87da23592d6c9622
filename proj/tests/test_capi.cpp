#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "causal/causal.h"

using json = nlohmann::json;

namespace {

const char* kFig1a = "digraph { w -> t; w -> y; z -> t; t -> y; }";

struct GraphHandle {
  causal_graph* g = nullptr;
  ~GraphHandle() { causal_graph_free(g); }
};

struct DatasetHandle {
  causal_dataset* d = nullptr;
  ~DatasetHandle() { causal_dataset_free(d); }
};

struct StringHandle {
  char* s = nullptr;
  ~StringHandle() { causal_string_free(s); }
};

}  // namespace

TEST_CASE("graph parse, inspect, serialize") {
  GraphHandle g;
  REQUIRE(causal_graph_parse(kFig1a, &g.g) == CAUSAL_OK);
  CHECK(causal_graph_node_count(g.g) == 4);
  CHECK(causal_graph_edge_count(g.g) == 4);

  StringHandle dot;
  REQUIRE(causal_graph_to_dot(g.g, &dot.s) == CAUSAL_OK);
  GraphHandle back;
  CHECK(causal_graph_parse(dot.s, &back.g) == CAUSAL_OK);
  CHECK(causal_graph_node_count(back.g) == 4);
}

TEST_CASE("parse failures set status and message") {
  causal_graph* g = nullptr;
  CHECK(causal_graph_parse("not dot at all", &g) == CAUSAL_ERR_PARSE);
  CHECK(g == nullptr);
  CHECK(std::strlen(causal_last_error()) > 0);

  CHECK(causal_graph_parse("digraph { a -> b; b -> a; }", &g) ==
        CAUSAL_ERR_PARSE);
  CHECK(causal_graph_parse(nullptr, &g) == CAUSAL_ERR_ARGUMENT);
  CHECK(causal_graph_from_file("/nonexistent/g.dot", &g) == CAUSAL_ERR_IO);
}

TEST_CASE("dataset csv round trip through files") {
  namespace fs = std::filesystem;
  DatasetHandle data;
  GraphHandle graph;
  double ate = 0;
  REQUIRE(causal_simulate_example(1, 500, 42, &data.d, &graph.g, &ate) ==
          CAUSAL_OK);
  CHECK(ate == 10.0);
  CHECK(causal_dataset_rows(data.d) == 500);
  CHECK(causal_dataset_cols(data.d) == 4);

  fs::path path = fs::temp_directory_path() / "causal_capi_test.csv";
  REQUIRE(causal_dataset_save_csv(data.d, path.string().c_str()) ==
          CAUSAL_OK);
  const char* required[] = {"t", "y", "w", "z"};
  DatasetHandle loaded;
  REQUIRE(causal_dataset_from_csv(path.string().c_str(), required, 4,
                                  &loaded.d) == CAUSAL_OK);
  StringHandle a, b;
  REQUIRE(causal_dataset_to_csv(data.d, &a.s) == CAUSAL_OK);
  REQUIRE(causal_dataset_to_csv(loaded.d, &b.s) == CAUSAL_OK);
  CHECK(std::string(a.s) == std::string(b.s));
  fs::remove(path);

  const char* missing[] = {"nope"};
  causal_dataset* bad = nullptr;
  CHECK(causal_dataset_from_csv(path.string().c_str(), missing, 1, &bad) ==
        CAUSAL_ERR_IO);
}

TEST_CASE("identify returns estimands and roles") {
  GraphHandle g;
  REQUIRE(causal_graph_parse(kFig1a, &g.g) == CAUSAL_OK);
  StringHandle out;
  REQUIRE(causal_identify(g.g, "t", "y", &out.s) == CAUSAL_OK);
  json j = json::parse(out.s);
  REQUIRE(j.contains("estimands"));
  REQUIRE(j["estimands"].size() == 2);
  CHECK(j["estimands"][0]["kind"] == "backdoor");
  CHECK(j["estimands"][0]["adjustment_set"] == json::array({"w"}));
  CHECK(j["estimands"][1]["kind"] == "iv");
  CHECK(j["variable_roles"]["w"] == "confounder");
  CHECK(j["variable_roles"]["z"] == "instrument");

  char* err = nullptr;
  CHECK(causal_identify(g.g, "t", "t", &err) == CAUSAL_ERR_ARGUMENT);
  CHECK(causal_identify(g.g, "nope", "y", &err) == CAUSAL_ERR_ARGUMENT);
}

TEST_CASE("estimate end to end") {
  GraphHandle g;
  DatasetHandle d;
  double ate = 0;
  REQUIRE(causal_simulate_example(1, 20000, 7, &d.d, &g.g, &ate) ==
          CAUSAL_OK);
  StringHandle out;
  REQUIRE(causal_estimate(g.g, d.d, "t", "y", "backdoor", 0,
                          "linear_regression", 1, &out.s) == CAUSAL_OK);
  json j = json::parse(out.s);
  CHECK(std::abs(double(j["ate"]) - 10.0) < 0.5);
  CHECK(j["method"] == "linear_regression");
  CHECK(j["estimand"]["kind"] == "backdoor");

  char* err = nullptr;
  CHECK(causal_estimate(g.g, d.d, "t", "y", "backdoor", 0, "made_up", 1,
                        &err) == CAUSAL_ERR_UNKNOWN_METHOD);
  CHECK(causal_estimate(g.g, d.d, "t", "y", "backdoor", 0, "iv_wald", 1,
                        &err) == CAUSAL_ERR_INCOMPATIBLE);
  CHECK(causal_estimate(g.g, d.d, "t", "y", "backdoor", 5,
                        "linear_regression", 1, &err) ==
        CAUSAL_ERR_ARGUMENT);
  CHECK(causal_estimate(g.g, d.d, "t", "y", "sideways", 0,
                        "linear_regression", 1, &err) ==
        CAUSAL_ERR_ARGUMENT);
}

TEST_CASE("refute end to end with sensitivity") {
  GraphHandle g;
  DatasetHandle d;
  double ate = 0;
  REQUIRE(causal_simulate_example(1, 3000, 11, &d.d, &g.g, &ate) ==
          CAUSAL_OK);
  json cfg = {
      {"treatment", "t"},
      {"outcome", "y"},
      {"estimand_kind", "backdoor"},
      {"estimand_index", 0},
      {"estimator", "linear_regression"},
      {"seed", 5},
      {"refuters",
       json::array({
           {{"name", "placebo_treatment"}, {"replications", 30}},
           {{"name", "bootstrap"}, {"replications", 30}},
           {{"name", "unobserved_common_cause"},
            {"kappa_t_grid", {0.0, 1.0}},
            {"kappa_y_grid", {0.0, 1.0}},
            {"replications", 5}},
       })},
  };
  StringHandle out;
  REQUIRE(causal_refute(g.g, d.d, cfg.dump().c_str(), &out.s) == CAUSAL_OK);
  json j = json::parse(out.s);
  CHECK(j.contains("estimate"));
  REQUIRE(j["reports"].size() == 2);
  CHECK(j["reports"][0]["refuter"] == "placebo_treatment");
  CHECK(j["reports"][0]["passed"] == true);
  CHECK(j["reports"][1]["refuter"] == "bootstrap");
  REQUIRE(j.contains("sensitivity"));
  CHECK(j["sensitivity"]["grid"].size() == 4);

  // Byte-identical across runs.
  StringHandle again;
  REQUIRE(causal_refute(g.g, d.d, cfg.dump().c_str(), &again.s) ==
          CAUSAL_OK);
  CHECK(std::string(out.s) == std::string(again.s));

  char* err = nullptr;
  CHECK(causal_refute(g.g, d.d, "{broken", &err) == CAUSAL_ERR_PARSE);
  json bad = cfg;
  bad["refuters"] = json::array({{{"name", "mystery"}}});
  CHECK(causal_refute(g.g, d.d, bad.dump().c_str(), &err) ==
        CAUSAL_ERR_UNKNOWN_METHOD);
}

TEST_CASE("simulate linear from json config") {
  DatasetHandle d;
  GraphHandle g;
  double ate = 0;
  const char* cfg =
      "{\"n\":1000,\"num_confounders\":2,\"num_instruments\":0,"
      "\"include_mediator\":true,\"effect\":5.0,\"seed\":3}";
  REQUIRE(causal_simulate_linear(cfg, &d.d, &g.g, &ate) == CAUSAL_OK);
  CHECK(ate == 5.0);
  CHECK(causal_dataset_rows(d.d) == 1000);

  causal_dataset* bad_d = nullptr;
  causal_graph* bad_g = nullptr;
  CHECK(causal_simulate_linear("{\"n\":0}", &bad_d, &bad_g, &ate) ==
        CAUSAL_ERR_ARGUMENT);
  CHECK(causal_simulate_example(9, 100, 1, &bad_d, &bad_g, &ate) ==
        CAUSAL_ERR_ARGUMENT);
}

TEST_CASE("reproduce figure summary") {
  StringHandle csv, summary;
  REQUIRE(causal_reproduce_figure(2, 5, 500, 13, &csv.s, &summary.s) ==
          CAUSAL_OK);
  json j = json::parse(summary.s);
  CHECK(j["correct_estimator"] == "no_adjustment");
  CHECK(j["faulty_estimator"] == "adjust_m");
  CHECK(j["true_ate"] == 9.0);
  CHECK(std::string(csv.s).rfind("dataset_index,estimator,ate\n", 0) == 0);
}
