// Command-line front end for the causal estimation engine. Talks to the
// engine exclusively through the C API in causal/causal.h; JSON handling
// here is presentation-side plumbing.
//
// Exit codes: 0 success, 2 input/parse/IO, 3 estimand-estimator
// incompatibility, 4 unknown method or refuter, 1 anything else.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "causal/causal.h"

namespace {

using Json = nlohmann::ordered_json;

int exit_code_for(causal_status status) {
  switch (status) {
    case CAUSAL_OK: return 0;
    case CAUSAL_ERR_PARSE:
    case CAUSAL_ERR_ARGUMENT:
    case CAUSAL_ERR_IO: return 2;
    case CAUSAL_ERR_INCOMPATIBLE: return 3;
    case CAUSAL_ERR_UNKNOWN_METHOD: return 4;
    default: return 1;
  }
}

[[noreturn]] void fail(causal_status status) {
  std::cerr << "error: " << causal_last_error() << "\n";
  std::exit(exit_code_for(status));
}

void check(causal_status status) {
  if (status != CAUSAL_OK) fail(status);
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { causal_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    std::exit(2);
  }
  out << content;
}

struct GraphHandle {
  causal_graph* g = nullptr;
  ~GraphHandle() { causal_graph_free(g); }
};

struct DatasetHandle {
  causal_dataset* d = nullptr;
  ~DatasetHandle() { causal_dataset_free(d); }
};

// Analysis options shared by `estimate` and `refute`. An optional JSON
// config file provides defaults; explicitly passed flags win.
struct AnalysisArgs {
  std::string graph_path, data_path, treatment, outcome;
  std::string estimand_kind = "backdoor";
  std::size_t estimand_index = 0;
  std::string method = "linear_regression";
  std::uint64_t seed = 0;
  std::string config_path, output_path;
};

void add_analysis_options(CLI::App* cmd, AnalysisArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "JSON config file; flags override its values");
  cmd->add_option("--graph", args.graph_path, "causal graph (.dot)");
  cmd->add_option("--data", args.data_path, "dataset (.csv)");
  cmd->add_option("--treatment", args.treatment, "treatment column");
  cmd->add_option("--outcome", args.outcome, "outcome column");
  cmd->add_option("--estimand-kind", args.estimand_kind,
                  "backdoor | frontdoor | iv");
  cmd->add_option("--estimand-index", args.estimand_index,
                  "index within the chosen kind");
  cmd->add_option("--method", args.method,
                  "linear_regression | propensity_score_weighting | iv_wald "
                  "| frontdoor_two_stage");
  cmd->add_option("--seed", args.seed, "random seed");
  cmd->add_option("--output", args.output_path, "write result JSON here");
}

void merge_config_file(const CLI::App* cmd, AnalysisArgs& args) {
  if (args.config_path.empty()) return;
  std::ifstream in(args.config_path);
  if (!in) {
    std::cerr << "error: cannot open config '" << args.config_path << "'\n";
    std::exit(2);
  }
  Json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config JSON: " << e.what() << "\n";
    std::exit(2);
  }
  auto absent = [&](const char* flag) {
    return cmd->get_option(flag)->count() == 0;
  };
  if (absent("--graph")) args.graph_path = cfg.value("graph", args.graph_path);
  if (absent("--data")) args.data_path = cfg.value("data", args.data_path);
  if (absent("--treatment"))
    args.treatment = cfg.value("treatment", args.treatment);
  if (absent("--outcome")) args.outcome = cfg.value("outcome", args.outcome);
  if (absent("--estimand-kind"))
    args.estimand_kind = cfg.value("estimand_kind", args.estimand_kind);
  if (absent("--estimand-index"))
    args.estimand_index = cfg.value("estimand_index", args.estimand_index);
  if (absent("--method")) args.method = cfg.value("estimator", args.method);
  if (absent("--seed")) args.seed = cfg.value("seed", args.seed);
  if (absent("--output"))
    args.output_path = cfg.value("output", args.output_path);
}

void require_paths(const AnalysisArgs& args, bool need_data) {
  if (args.graph_path.empty()) {
    std::cerr << "error: --graph is required\n";
    std::exit(2);
  }
  if (need_data && args.data_path.empty()) {
    std::cerr << "error: --data is required\n";
    std::exit(2);
  }
  if (args.treatment.empty() || args.outcome.empty()) {
    std::cerr << "error: --treatment and --outcome are required\n";
    std::exit(2);
  }
}

int cmd_identify(const std::string& graph_path, const std::string& treatment,
                 const std::string& outcome, const std::string& output) {
  GraphHandle graph;
  check(causal_graph_from_file(graph_path.c_str(), &graph.g));
  OwnedString json;
  check(causal_identify(graph.g, treatment.c_str(), outcome.c_str(),
                        &json.ptr));
  std::cout << json.str() << "\n";
  if (!output.empty()) write_file(output, json.str() + "\n");
  return 0;
}

int cmd_estimate(const AnalysisArgs& args) {
  GraphHandle graph;
  check(causal_graph_from_file(args.graph_path.c_str(), &graph.g));
  DatasetHandle data;
  check(causal_dataset_from_csv(args.data_path.c_str(), nullptr, 0, &data.d));
  OwnedString json;
  check(causal_estimate(graph.g, data.d, args.treatment.c_str(),
                        args.outcome.c_str(), args.estimand_kind.c_str(),
                        args.estimand_index, args.method.c_str(), args.seed,
                        &json.ptr));
  const Json est = Json::parse(json.str());
  std::cout << "ate = " << est["ate"].get<double>() << "  (95% CI ["
            << est["ci_low"].get<double>() << ", "
            << est["ci_high"].get<double>() << "], method "
            << est["method"].get<std::string>() << ")\n";
  if (!args.output_path.empty()) write_file(args.output_path, json.str() + "\n");
  else std::cout << json.str() << "\n";
  return 0;
}

int cmd_refute(const AnalysisArgs& args, const std::vector<std::string>& refuters,
               int replications, double fraction, double true_effect,
               bool permute, const std::vector<double>& kappa_t,
               const std::vector<double>& kappa_y, int sensitivity_reps,
               const std::string& hist_dir) {
  GraphHandle graph;
  check(causal_graph_from_file(args.graph_path.c_str(), &graph.g));
  DatasetHandle data;
  check(causal_dataset_from_csv(args.data_path.c_str(), nullptr, 0, &data.d));

  std::vector<std::string> names = refuters;
  if (names.size() == 1 && names[0] == "all")
    names = {"placebo_treatment",   "dummy_outcome", "simulated_outcome",
             "random_common_cause", "data_subset",   "bootstrap",
             "unobserved_common_cause"};

  Json cfg;
  cfg["treatment"] = args.treatment;
  cfg["outcome"] = args.outcome;
  cfg["estimand_kind"] = args.estimand_kind;
  cfg["estimand_index"] = args.estimand_index;
  cfg["estimator"] = args.method;
  cfg["seed"] = args.seed;
  Json list = Json::array();
  for (const auto& name : names) {
    Json r;
    r["name"] = name;
    if (name == "unobserved_common_cause") {
      r["kappa_t_grid"] = kappa_t;
      r["kappa_y_grid"] = kappa_y;
      r["replications"] = sensitivity_reps;
    } else {
      r["replications"] = replications;
      if (name == "data_subset") r["fraction"] = fraction;
      if (name == "simulated_outcome") r["true_effect"] = true_effect;
      if (name == "placebo_treatment") r["permute"] = permute;
    }
    list.push_back(r);
  }
  cfg["refuters"] = list;

  OwnedString json;
  check(causal_refute(graph.g, data.d, cfg.dump().c_str(), &json.ptr));
  const Json result = Json::parse(json.str());
  for (const auto& report : result["reports"]) {
    std::cout << report["refuter"].get<std::string>() << ": "
              << (report["passed"].get<bool>() ? "PASS" : "FAIL")
              << "  (p = " << report["p_value"].get<double>()
              << ", target = " << report["target"].get<double>() << ")\n";
  }
  if (!hist_dir.empty()) {
    std::filesystem::create_directories(hist_dir);
    for (const auto& report : result["reports"]) {
      std::ostringstream csv;
      csv << "replication,ate\n";
      std::size_t i = 0;
      for (const auto& ate : report["refuted_ates"])
        csv << i++ << ',' << ate.dump() << '\n';
      write_file(hist_dir + "/" + report["refuter"].get<std::string>() +
                     ".csv",
                 csv.str());
    }
  }
  if (!args.output_path.empty()) write_file(args.output_path, json.str() + "\n");
  else std::cout << json.str() << "\n";
  return 0;
}

int cmd_simulate(const std::string& dgp, std::size_t n, std::uint64_t seed,
                 const std::string& out_data, const std::string& out_graph,
                 const std::string& linear_config) {
  DatasetHandle data;
  GraphHandle graph;
  double true_ate = 0.0;
  if (dgp == "example1" || dgp == "example2") {
    check(causal_simulate_example(dgp == "example1" ? 1 : 2, n, seed, &data.d,
                                  &graph.g, &true_ate));
  } else if (dgp == "linear") {
    Json cfg = linear_config.empty() ? Json::object()
                                     : Json::parse(linear_config, nullptr,
                                                   /*allow_exceptions=*/true);
    cfg["n"] = n;
    cfg["seed"] = seed;
    check(causal_simulate_linear(cfg.dump().c_str(), &data.d, &graph.g,
                                 &true_ate));
  } else {
    std::cerr << "error: --dgp must be example1, example2 or linear\n";
    return 2;
  }
  check(causal_dataset_save_csv(data.d, out_data.c_str()));
  if (!out_graph.empty()) {
    OwnedString dot;
    check(causal_graph_to_dot(graph.g, &dot.ptr));
    write_file(out_graph, dot.str());
  }
  std::cout << "wrote " << causal_dataset_rows(data.d) << " rows to "
            << out_data << " (true ATE " << true_ate << ")\n";
  return 0;
}

int cmd_reproduce_figure(int variant, std::size_t n_datasets, std::size_t n,
                         std::uint64_t seed, const std::string& out_dir) {
  OwnedString table, summary;
  check(causal_reproduce_figure(variant, n_datasets, n, seed, &table.ptr,
                                &summary.ptr));
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create directory '" << out_dir << "'\n";
    return 2;
  }
  const std::string stem = out_dir + "/figure1_variant" +
                           std::to_string(variant);
  write_file(stem + ".csv", table.str());
  write_file(stem + "_summary.json", summary.str() + "\n");
  std::cout << summary.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal effect estimation: model, identify, estimate, refute"};
  app.require_subcommand(1);

  // identify
  auto* identify = app.add_subcommand(
      "identify", "derive effect estimands from a causal graph");
  std::string id_graph, id_treatment, id_outcome, id_output;
  identify->add_option("--graph", id_graph)->required();
  identify->add_option("--treatment", id_treatment)->required();
  identify->add_option("--outcome", id_outcome)->required();
  identify->add_option("--output", id_output);

  // estimate
  auto* estimate =
      app.add_subcommand("estimate", "estimate the average treatment effect");
  AnalysisArgs est_args;
  add_analysis_options(estimate, est_args);

  // refute
  auto* refute =
      app.add_subcommand("refute", "run validation tests on an estimate");
  AnalysisArgs ref_args;
  add_analysis_options(refute, ref_args);
  std::vector<std::string> refuters;
  int replications = 100, sensitivity_reps = 20;
  double fraction = 0.8, true_effect = 0.0;
  bool permute = false;
  std::vector<double> kappa_t{0.0, 1.0}, kappa_y{0.0, 1.0, 2.0, 5.0};
  std::string hist_dir;
  refute->add_option("--refuters", refuters,
                     "comma-separated refuter names, or 'all'")
      ->required()
      ->delimiter(',');
  refute->add_option("--replications", replications);
  refute->add_option("--fraction", fraction, "data_subset fraction");
  refute->add_option("--true-effect", true_effect,
                     "simulated_outcome injected effect");
  refute->add_flag("--permute", permute, "placebo permutes instead of redraws");
  refute->add_option("--kappa-t", kappa_t, "sensitivity grid")->delimiter(',');
  refute->add_option("--kappa-y", kappa_y, "sensitivity grid")->delimiter(',');
  refute->add_option("--sensitivity-replications", sensitivity_reps);
  refute->add_option("--hist-dir", hist_dir,
                     "write per-refuter histogram CSVs here");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "generate data with known ground truth");
  std::string dgp = "example1", out_data = "data.csv", out_graph,
              linear_config;
  std::size_t sim_n = 10000;
  std::uint64_t sim_seed = 0;
  simulate->add_option("--dgp", dgp, "example1 | example2 | linear");
  simulate->add_option("--n", sim_n);
  simulate->add_option("--seed", sim_seed);
  simulate->add_option("--out-data", out_data)->required();
  simulate->add_option("--out-graph", out_graph);
  simulate->add_option("--linear-config", linear_config,
                       "JSON overrides for the linear DGP");

  // reproduce-figure
  auto* figure = app.add_subcommand(
      "reproduce-figure", "estimate distributions under correct and faulty "
                          "identification");
  int variant = 1;
  std::size_t n_datasets = 100, fig_n = 10000;
  std::uint64_t fig_seed = 0;
  std::string out_dir = ".";
  figure->add_option("--variant", variant, "1 | 2")->required();
  figure->add_option("--n-datasets", n_datasets);
  figure->add_option("--n", fig_n);
  figure->add_option("--seed", fig_seed);
  figure->add_option("--out-dir", out_dir);

  CLI11_PARSE(app, argc, argv);

  if (identify->parsed())
    return cmd_identify(id_graph, id_treatment, id_outcome, id_output);
  if (estimate->parsed()) {
    merge_config_file(estimate, est_args);
    require_paths(est_args, true);
    return cmd_estimate(est_args);
  }
  if (refute->parsed()) {
    merge_config_file(refute, ref_args);
    require_paths(ref_args, true);
    return cmd_refute(ref_args, refuters, replications, fraction, true_effect,
                      permute, kappa_t, kappa_y, sensitivity_reps, hist_dir);
  }
  if (simulate->parsed())
    return cmd_simulate(dgp, sim_n, sim_seed, out_data, out_graph,
                        linear_config);
  if (figure->parsed())
    return cmd_reproduce_figure(variant, n_datasets, fig_n, fig_seed, out_dir);
  return 1;
}
