#include "causal/causal.h"

#include <cstring>
#include <string>

#include "causal/dataset.hpp"
#include "causal/error.hpp"
#include "causal/estimate.hpp"
#include "causal/graph.hpp"
#include "causal/identify.hpp"
#include "causal/json_io.hpp"
#include "causal/refute.hpp"
#include "causal/simulate.hpp"

struct causal_graph {
  causal::CausalGraph graph;
};

struct causal_dataset {
  causal::Dataset data;
};

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `fn`, translating exceptions into status codes and the
// thread-local error message.
template <typename Fn>
causal_status guarded(Fn&& fn) {
  try {
    fn();
    return CAUSAL_OK;
  } catch (const causal::ParseError& e) {
    g_last_error = e.what();
    return CAUSAL_ERR_PARSE;
  } catch (const causal::GraphError& e) {
    g_last_error = e.what();
    return CAUSAL_ERR_PARSE;
  } catch (const causal::IoError& e) {
    g_last_error = e.what();
    return CAUSAL_ERR_IO;
  } catch (const causal::IncompatibleError& e) {
    g_last_error = e.what();
    return CAUSAL_ERR_INCOMPATIBLE;
  } catch (const causal::UnknownMethodError& e) {
    g_last_error = e.what();
    return CAUSAL_ERR_UNKNOWN_METHOD;
  } catch (const causal::NumericError& e) {
    g_last_error = e.what();
    return CAUSAL_ERR_NUMERIC;
  } catch (const causal::ArgumentError& e) {
    g_last_error = e.what();
    return CAUSAL_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CAUSAL_ERR_INTERNAL;
  }
}

causal_status require(bool ok, const char* msg) {
  if (ok) return CAUSAL_OK;
  g_last_error = msg;
  return CAUSAL_ERR_ARGUMENT;
}

// Identification JSON shared by causal_identify and the CLI.
causal::Json identify_json(const causal::CausalGraph& g,
                           const std::string& treatment,
                           const std::string& outcome) {
  causal::Json j;
  j["treatment"] = treatment;
  j["outcome"] = outcome;
  causal::Json estimands = causal::Json::array();
  for (const auto& e : causal::identify_effect(g, treatment, outcome))
    estimands.push_back(causal::to_json(e));
  j["estimands"] = estimands;
  causal::Json roles;
  for (const auto& name : g.node_names()) {
    if (name == treatment || name == outcome) continue;
    roles[name] =
        causal::to_string(causal::classify_variable(g, name, treatment,
                                                    outcome));
  }
  j["variable_roles"] = roles;
  return j;
}

causal::Estimand select_estimand(const causal::CausalGraph& g,
                                 const std::string& treatment,
                                 const std::string& outcome,
                                 const std::string& kind_name,
                                 std::size_t index) {
  const causal::EstimandKind kind =
      causal::estimand_kind_from_string(kind_name);
  std::size_t seen = 0;
  for (const auto& e : causal::identify_effect(g, treatment, outcome)) {
    if (e.kind != kind) continue;
    if (seen == index) return e;
    ++seen;
  }
  throw causal::ArgumentError(
      "no " + kind_name + " estimand at index " + std::to_string(index) +
      " (" + std::to_string(seen) + " identified)");
}

}  // namespace

extern "C" {

const char* causal_last_error(void) { return g_last_error.c_str(); }

void causal_string_free(char* s) { delete[] s; }

causal_status causal_graph_parse(const char* dot_text, causal_graph** out) {
  if (auto st = require(dot_text && out, "null argument")) return st;
  return guarded([&] {
    *out = new causal_graph{causal::parse_graph(dot_text)};
  });
}

causal_status causal_graph_from_file(const char* path, causal_graph** out) {
  if (auto st = require(path && out, "null argument")) return st;
  return guarded([&] {
    *out = new causal_graph{causal::parse_graph_file(path)};
  });
}

causal_status causal_graph_to_dot(const causal_graph* g, char** out) {
  if (auto st = require(g && out, "null argument")) return st;
  return guarded([&] { *out = copy_string(g->graph.to_dot()); });
}

size_t causal_graph_node_count(const causal_graph* g) {
  return g ? g->graph.node_count() : 0;
}

size_t causal_graph_edge_count(const causal_graph* g) {
  return g ? g->graph.edge_count() : 0;
}

void causal_graph_free(causal_graph* g) { delete g; }

causal_status causal_dataset_from_csv(const char* path,
                                      const char* const* required_columns,
                                      size_t n_required,
                                      causal_dataset** out) {
  if (auto st = require(path && out && (n_required == 0 || required_columns),
                        "null argument"))
    return st;
  return guarded([&] {
    std::set<std::string> required;
    for (size_t i = 0; i < n_required; ++i)
      required.insert(required_columns[i]);
    *out = new causal_dataset{causal::load_csv(path, required)};
  });
}

causal_status causal_dataset_to_csv(const causal_dataset* d, char** out) {
  if (auto st = require(d && out, "null argument")) return st;
  return guarded([&] { *out = copy_string(d->data.to_csv()); });
}

causal_status causal_dataset_save_csv(const causal_dataset* d,
                                      const char* path) {
  if (auto st = require(d && path, "null argument")) return st;
  return guarded([&] { d->data.save_csv(path); });
}

size_t causal_dataset_rows(const causal_dataset* d) {
  return d ? d->data.rows() : 0;
}

size_t causal_dataset_cols(const causal_dataset* d) {
  return d ? d->data.cols() : 0;
}

void causal_dataset_free(causal_dataset* d) { delete d; }

causal_status causal_identify(const causal_graph* g, const char* treatment,
                              const char* outcome, char** json_out) {
  if (auto st = require(g && treatment && outcome && json_out,
                        "null argument"))
    return st;
  return guarded([&] {
    *json_out =
        copy_string(identify_json(g->graph, treatment, outcome).dump(2));
  });
}

causal_status causal_estimate(const causal_graph* g, const causal_dataset* d,
                              const char* treatment, const char* outcome,
                              const char* estimand_kind, size_t estimand_index,
                              const char* method, uint64_t seed,
                              char** json_out) {
  if (auto st = require(g && d && treatment && outcome && estimand_kind &&
                            method && json_out,
                        "null argument"))
    return st;
  return guarded([&] {
    const causal::Estimand estimand = select_estimand(
        g->graph, treatment, outcome, estimand_kind, estimand_index);
    const causal::EffectEstimate est =
        causal::estimate_effect(d->data, estimand, method, causal::Rng(seed));
    *json_out = copy_string(causal::to_json(est).dump(2));
  });
}

causal_status causal_refute(const causal_graph* g, const causal_dataset* d,
                            const char* config_json, char** json_out) {
  if (auto st = require(g && d && config_json && json_out, "null argument"))
    return st;
  return guarded([&] {
    causal::Json cfg;
    try {
      cfg = causal::Json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      throw causal::ParseError(std::string("bad refute config: ") + e.what(),
                               0, 0);
    }
    const auto treatment = cfg.at("treatment").get<std::string>();
    const auto outcome = cfg.at("outcome").get<std::string>();
    const auto kind = cfg.value("estimand_kind", std::string("backdoor"));
    const auto index = cfg.value("estimand_index", std::size_t{0});
    const auto estimator =
        cfg.value("estimator", std::string("linear_regression"));
    const auto seed = cfg.value("seed", std::uint64_t{0});
    if (!cfg.contains("refuters") || !cfg.at("refuters").is_array() ||
        cfg.at("refuters").empty())
      throw causal::ArgumentError(
          "refute config must list at least one refuter");

    causal::Pipeline pipeline{
        g->graph,
        select_estimand(g->graph, treatment, outcome, kind, index),
        estimator,
        {}};
    if (!causal::estimator_compatible(estimator, pipeline.estimand.kind))
      throw causal::IncompatibleError(
          "estimator '" + estimator + "' is not compatible with a " + kind +
          " estimand");

    causal::Rng root(seed);
    causal::Json out;
    out["estimate"] = causal::to_json(
        pipeline.run_estimate(d->data, root.derive(~std::uint64_t{0})));

    causal::Json reports = causal::Json::array();
    std::uint64_t refuter_index = 0;
    for (const auto& r : cfg.at("refuters")) {
      const auto name = r.at("name").get<std::string>();
      const std::uint64_t rseed =
          causal::Rng(seed).derive(refuter_index++).next_u64();
      if (name == "unobserved_common_cause") {
        std::vector<double> kt = r.value("kappa_t_grid",
                                         std::vector<double>{0.0, 1.0});
        std::vector<double> ky = r.value(
            "kappa_y_grid", std::vector<double>{0.0, 1.0, 2.0, 5.0});
        const int reps = r.value("replications", 20);
        out["sensitivity"] = causal::to_json(
            causal::sensitivity_unobserved_confounder(pipeline, d->data, kt,
                                                      ky, reps, rseed));
        continue;
      }
      causal::RefuterOptions opts;
      opts.replications = r.value("replications", 100);
      opts.significance_level = r.value("significance_level", 0.05);
      opts.subset_fraction = r.value("fraction", 0.8);
      opts.simulated_true_effect = r.value("true_effect", 0.0);
      opts.placebo_permute = r.value("permute", false);
      reports.push_back(causal::to_json(
          causal::run_refuter(name, pipeline, d->data, opts, rseed)));
    }
    out["reports"] = reports;
    *json_out = copy_string(out.dump(2));
  });
}

causal_status causal_simulate_example(int variant, size_t n, uint64_t seed,
                                      causal_dataset** data_out,
                                      causal_graph** graph_out,
                                      double* true_ate_out) {
  if (auto st = require(data_out != nullptr, "null argument")) return st;
  return guarded([&] {
    causal::SimulatedData sim;
    if (variant == 1)
      sim = causal::dgp_example1(n, causal::Rng(seed));
    else if (variant == 2)
      sim = causal::dgp_example2(n, causal::Rng(seed));
    else
      throw causal::ArgumentError("variant must be 1 or 2, got " +
                                  std::to_string(variant));
    *data_out = new causal_dataset{std::move(sim.data)};
    if (graph_out) *graph_out = new causal_graph{std::move(sim.graph)};
    if (true_ate_out) *true_ate_out = sim.true_ate;
  });
}

causal_status causal_simulate_linear(const char* config_json,
                                     causal_dataset** data_out,
                                     causal_graph** graph_out,
                                     double* true_ate_out) {
  if (auto st = require(config_json && data_out, "null argument")) return st;
  return guarded([&] {
    causal::Json cfg;
    try {
      cfg = causal::Json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      throw causal::ParseError(std::string("bad DGP config: ") + e.what(), 0,
                               0);
    }
    causal::LinearDgpConfig c;
    c.n = cfg.value("n", c.n);
    c.num_confounders = cfg.value("num_confounders", c.num_confounders);
    c.num_instruments = cfg.value("num_instruments", c.num_instruments);
    c.include_mediator = cfg.value("include_mediator", c.include_mediator);
    c.effect = cfg.value("effect", c.effect);
    c.noise_variance = cfg.value("noise_variance", c.noise_variance);
    c.seed = cfg.value("seed", c.seed);
    causal::SimulatedData sim = causal::generate_linear_dgp(c);
    *data_out = new causal_dataset{std::move(sim.data)};
    if (graph_out) *graph_out = new causal_graph{std::move(sim.graph)};
    if (true_ate_out) *true_ate_out = sim.true_ate;
  });
}

causal_status causal_reproduce_figure(int variant, size_t n_datasets,
                                      size_t n, uint64_t seed,
                                      char** table_csv_out,
                                      char** summary_json_out) {
  if (auto st = require(table_csv_out && summary_json_out, "null argument"))
    return st;
  return guarded([&] {
    const causal::Figure1Result result =
        causal::replicate_figure1(variant, n_datasets, n, causal::Rng(seed));
    causal::Json summary;
    summary["variant"] = variant;
    summary["n_datasets"] = n_datasets;
    summary["n"] = n;
    summary["true_ate"] = result.summary.true_ate;
    summary["correct_estimator"] = result.summary.correct_label;
    summary["correct_mean"] = result.summary.correct_mean;
    summary["correct_std"] = result.summary.correct_std;
    summary["faulty_estimator"] = result.summary.faulty_label;
    summary["faulty_mean"] = result.summary.faulty_mean;
    summary["faulty_std"] = result.summary.faulty_std;
    summary["std_ratio_faulty_over_correct"] =
        result.summary.correct_std > 0.0
            ? result.summary.faulty_std / result.summary.correct_std
            : 0.0;
    *table_csv_out = copy_string(causal::figure1_table_csv(result));
    *summary_json_out = copy_string(summary.dump(2));
  });
}

}  // extern "C"
