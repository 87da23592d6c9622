#include "causal/identify.hpp"

#include <algorithm>
#include <deque>

#include "causal/error.hpp"

namespace causal {

namespace {

// Exhaustive minimal-set search is exponential in the candidate count;
// refuse clearly rather than hang.
constexpr std::size_t kMaxSearchCandidates = 20;

void validate_pair(const CausalGraph& g, const std::string& t,
                   const std::string& y) {
  if (!g.has_node(t)) throw ArgumentError("unknown node '" + t + "'");
  if (!g.has_node(y)) throw ArgumentError("unknown node '" + y + "'");
  if (t == y) throw ArgumentError("treatment equals outcome: '" + t + "'");
  if (!g.is_observed(t))
    throw ArgumentError("treatment '" + t + "' is unobserved");
  if (!g.is_observed(y))
    throw ArgumentError("outcome '" + y + "' is unobserved");
  if (g.ancestors({t}).count(y))
    throw ArgumentError("outcome '" + y + "' is an ancestor of treatment '" +
                        t + "'");
}

// Forward reachability from `from`, never stepping through `avoid`.
NodeSet reachable_avoiding(const CausalGraph& g, const std::string& from,
                           const std::string& avoid) {
  NodeSet seen{from};
  std::deque<std::string> frontier{from};
  while (!frontier.empty()) {
    std::string u = frontier.front();
    frontier.pop_front();
    for (const auto& c : g.children(u)) {
      if (c == avoid || seen.count(c)) continue;
      seen.insert(c);
      frontier.push_back(c);
    }
  }
  return seen;
}

// Visits subsets of `candidates` in order of increasing size, each size in
// lexicographic order. The callback returns true to record the subset.
template <typename Fn>
void for_each_subset_by_size(const std::vector<std::string>& candidates,
                             Fn&& fn) {
  const std::size_t m = candidates.size();
  for (std::size_t size = 0; size <= m; ++size) {
    std::vector<std::size_t> comb(size);
    for (std::size_t i = 0; i < size; ++i) comb[i] = i;
    for (;;) {
      NodeSet subset;
      for (std::size_t i : comb) subset.insert(candidates[i]);
      fn(subset);
      if (size == 0) break;
      // next combination
      std::size_t i = size;
      while (i > 0 && comb[i - 1] == m - size + (i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < size; ++j) comb[j] = comb[j - 1] + 1;
    }
    if (size == 0 && m == 0) break;
  }
}

bool is_superset_of_any(const NodeSet& s, const std::vector<NodeSet>& sets) {
  for (const auto& base : sets)
    if (std::includes(s.begin(), s.end(), base.begin(), base.end()))
      return true;
  return false;
}

}  // namespace

std::string to_string(EstimandKind kind) {
  switch (kind) {
    case EstimandKind::kBackdoor: return "backdoor";
    case EstimandKind::kFrontdoor: return "frontdoor";
    case EstimandKind::kIv: return "iv";
  }
  return "?";
}

EstimandKind estimand_kind_from_string(const std::string& s) {
  if (s == "backdoor") return EstimandKind::kBackdoor;
  if (s == "frontdoor") return EstimandKind::kFrontdoor;
  if (s == "iv") return EstimandKind::kIv;
  throw ArgumentError("unknown estimand kind '" + s + "'");
}

std::string to_string(VariableRole role) {
  switch (role) {
    case VariableRole::kConfounder: return "confounder";
    case VariableRole::kInstrument: return "instrument";
    case VariableRole::kMediator: return "mediator";
    case VariableRole::kCollider: return "collider";
    case VariableRole::kOther: return "other";
  }
  return "?";
}

std::vector<NodeSet> find_backdoor_sets(const CausalGraph& g,
                                        const std::string& treatment,
                                        const std::string& outcome,
                                        bool all_sets) {
  validate_pair(g, treatment, outcome);

  const NodeSet desc_t = g.descendants({treatment});
  std::vector<std::string> candidates;
  for (const auto& n : g.observed_nodes())
    if (n != treatment && n != outcome && !desc_t.count(n))
      candidates.push_back(n);
  if (candidates.size() > kMaxSearchCandidates)
    throw ArgumentError(
        "backdoor search refused: " + std::to_string(candidates.size()) +
        " candidate nodes exceed the exhaustive-search limit of " +
        std::to_string(kMaxSearchCandidates));

  const CausalGraph pruned = g.without_outgoing_edges({treatment});
  auto valid = [&](const NodeSet& s) {
    return pruned.d_separated({treatment}, {outcome}, s);
  };

  std::vector<NodeSet> result;
  for_each_subset_by_size(candidates, [&](const NodeSet& s) {
    if (!all_sets && is_superset_of_any(s, result)) return;
    if (valid(s)) result.push_back(s);
  });
  std::sort(result.begin(), result.end());
  return result;
}

NodeSet find_instruments(const CausalGraph& g, const std::string& treatment,
                         const std::string& outcome) {
  validate_pair(g, treatment, outcome);
  const CausalGraph pruned = g.without_outgoing_edges({treatment});
  NodeSet instruments;
  for (const auto& z : g.observed_nodes()) {
    if (z == treatment || z == outcome) continue;
    if (g.d_separated({z}, {treatment}, {})) continue;  // irrelevant to t
    if (pruned.d_separated({z}, {outcome}, {})) instruments.insert(z);
  }
  return instruments;
}

std::optional<NodeSet> find_frontdoor_set(const CausalGraph& g,
                                          const std::string& treatment,
                                          const std::string& outcome) {
  validate_pair(g, treatment, outcome);
  if (g.directed_paths(treatment, outcome).empty()) return std::nullopt;

  std::vector<std::string> candidates;
  for (const auto& n : g.observed_nodes())
    if (n != treatment && n != outcome) candidates.push_back(n);
  if (candidates.size() > kMaxSearchCandidates)
    throw ArgumentError(
        "frontdoor search refused: " + std::to_string(candidates.size()) +
        " candidate nodes exceed the exhaustive-search limit of " +
        std::to_string(kMaxSearchCandidates));

  const CausalGraph pruned_t = g.without_outgoing_edges({treatment});
  std::optional<NodeSet> found;
  for_each_subset_by_size(candidates, [&](const NodeSet& m) {
    if (found || m.empty()) return;
    // (i) every directed treatment->outcome path passes through m
    const CausalGraph pruned_m = g.without_outgoing_edges(m);
    if (pruned_m.descendants({treatment}).count(outcome)) return;
    // (ii) no unblocked backdoor path from treatment to m
    if (!pruned_t.d_separated({treatment}, m, {})) return;
    // (iii) treatment blocks every backdoor path from m to the outcome
    if (!pruned_m.d_separated(m, {outcome}, {treatment})) return;
    found = m;
  });
  return found;
}

VariableRole classify_variable(const CausalGraph& g, const std::string& v,
                               const std::string& treatment,
                               const std::string& outcome) {
  validate_pair(g, treatment, outcome);
  if (!g.has_node(v)) throw ArgumentError("unknown node '" + v + "'");
  if (v == treatment || v == outcome)
    throw ArgumentError("cannot classify the treatment or outcome itself");

  const bool causes_t = g.descendants({v}).count(treatment) != 0;
  const bool causes_y_avoiding_t =
      reachable_avoiding(g, v, treatment).count(outcome) != 0;
  if (causes_t && causes_y_avoiding_t) return VariableRole::kConfounder;

  if (g.is_observed(v) && find_instruments(g, treatment, outcome).count(v))
    return VariableRole::kInstrument;

  const NodeSet desc_t = g.descendants({treatment});
  const NodeSet anc_y = g.ancestors({outcome});
  if (v != treatment && v != outcome && desc_t.count(v) && anc_y.count(v))
    return VariableRole::kMediator;

  if (desc_t.count(v) && g.descendants({outcome}).count(v))
    return VariableRole::kCollider;

  return VariableRole::kOther;
}

std::vector<Estimand> identify_effect(const CausalGraph& g,
                                      const std::string& treatment,
                                      const std::string& outcome) {
  validate_pair(g, treatment, outcome);
  std::vector<Estimand> out;

  for (const auto& s : find_backdoor_sets(g, treatment, outcome)) {
    Estimand e;
    e.kind = EstimandKind::kBackdoor;
    e.treatment = treatment;
    e.outcome = outcome;
    e.adjustment_set = s;
    out.push_back(std::move(e));
  }
  if (auto m = find_frontdoor_set(g, treatment, outcome)) {
    Estimand e;
    e.kind = EstimandKind::kFrontdoor;
    e.treatment = treatment;
    e.outcome = outcome;
    e.mediator_set = *m;
    out.push_back(std::move(e));
  }
  NodeSet instruments = find_instruments(g, treatment, outcome);
  if (!instruments.empty()) {
    Estimand e;
    e.kind = EstimandKind::kIv;
    e.treatment = treatment;
    e.outcome = outcome;
    e.instrument_set = instruments;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace causal
