#include "causal/json_io.hpp"

#include "causal/error.hpp"

namespace causal {

namespace {

Json set_to_json(const NodeSet& s) {
  Json arr = Json::array();
  for (const auto& n : s) arr.push_back(n);
  return arr;
}

NodeSet set_from_json(const Json& j) {
  NodeSet out;
  for (const auto& v : j) out.insert(v.get<std::string>());
  return out;
}

}  // namespace

Json to_json(const Estimand& e) {
  Json j;
  j["kind"] = to_string(e.kind);
  j["treatment"] = e.treatment;
  j["outcome"] = e.outcome;
  switch (e.kind) {
    case EstimandKind::kBackdoor:
      j["adjustment_set"] = set_to_json(e.adjustment_set);
      break;
    case EstimandKind::kFrontdoor:
      j["mediator_set"] = set_to_json(e.mediator_set);
      break;
    case EstimandKind::kIv:
      j["instrument_set"] = set_to_json(e.instrument_set);
      break;
  }
  return j;
}

Estimand estimand_from_json(const Json& j) {
  Estimand e;
  e.kind = estimand_kind_from_string(j.at("kind").get<std::string>());
  e.treatment = j.at("treatment").get<std::string>();
  e.outcome = j.at("outcome").get<std::string>();
  switch (e.kind) {
    case EstimandKind::kBackdoor:
      if (j.contains("adjustment_set"))
        e.adjustment_set = set_from_json(j.at("adjustment_set"));
      break;
    case EstimandKind::kFrontdoor:
      e.mediator_set = set_from_json(j.at("mediator_set"));
      break;
    case EstimandKind::kIv:
      e.instrument_set = set_from_json(j.at("instrument_set"));
      break;
  }
  return e;
}

Json to_json(const EffectEstimate& e) {
  Json j;
  j["ate"] = e.ate;
  j["std_error"] = e.std_error;
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["method"] = e.method;
  j["ci_method"] = e.ci_method;
  j["n"] = e.n;
  j["estimand"] = to_json(e.estimand);
  if (e.weak_instrument_warning) j["weak_instrument_warning"] = true;
  if (e.separation_warning) j["separation_warning"] = true;
  return j;
}

Json to_json(const RefutationReport& r) {
  Json j;
  j["refuter"] = r.refuter;
  j["category"] = r.category;
  j["original_ate"] = r.original_ate;
  j["target"] = r.target;
  j["p_value"] = r.p_value;
  j["significance_level"] = r.significance_level;
  j["passed"] = r.passed;
  j["replications"] = r.replications;
  j["seed"] = r.seed;
  if (r.has_interval) {
    j["interval_low"] = r.interval_low;
    j["interval_high"] = r.interval_high;
  }
  j["refuted_ates"] = r.refuted_ates;
  return j;
}

Json to_json(const SensitivitySurface& s) {
  Json j;
  j["original_ate"] = s.original_ate;
  j["replications"] = s.replications;
  j["seed"] = s.seed;
  Json grid = Json::array();
  for (const auto& cell : s.grid) {
    Json c;
    c["kappa_t"] = cell.kappa_t;
    c["kappa_y"] = cell.kappa_y;
    c["adjusted_ate"] = cell.adjusted_ate;
    grid.push_back(c);
  }
  j["grid"] = grid;
  return j;
}

}  // namespace causal
