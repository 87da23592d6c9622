#ifndef CAUSAL_IDENTIFY_HPP
#define CAUSAL_IDENTIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "causal/graph.hpp"

namespace causal {

enum class EstimandKind { kBackdoor, kFrontdoor, kIv };

std::string to_string(EstimandKind kind);
EstimandKind estimand_kind_from_string(const std::string& s);

// An identification result. Exactly the set matching `kind` is populated;
// every referenced node is observed in the graph the estimand came from.
struct Estimand {
  EstimandKind kind;
  std::string treatment;
  std::string outcome;
  NodeSet adjustment_set;  // backdoor
  NodeSet mediator_set;    // frontdoor
  NodeSet instrument_set;  // iv

  bool operator==(const Estimand&) const = default;
};

// All minimal observed adjustment sets satisfying the backdoor criterion
// (block every backdoor path, contain no descendant of the treatment),
// lexicographically sorted. With all_sets=true, every valid set is
// returned, not only the minimal ones.
std::vector<NodeSet> find_backdoor_sets(const CausalGraph& g,
                                        const std::string& treatment,
                                        const std::string& outcome,
                                        bool all_sets = false);

// Observed nodes that are d-connected to the treatment and d-separated
// from the outcome once the treatment's outgoing edges are removed
// (unconditional graphical instrument definition).
NodeSet find_instruments(const CausalGraph& g, const std::string& treatment,
                         const std::string& outcome);

// Minimal observed set intercepting all directed treatment->outcome
// paths, unconfounded with the treatment, and with all of its backdoor
// paths to the outcome blocked by the treatment; nullopt if none exists.
std::optional<NodeSet> find_frontdoor_set(const CausalGraph& g,
                                          const std::string& treatment,
                                          const std::string& outcome);

enum class VariableRole { kConfounder, kInstrument, kMediator, kCollider, kOther };

std::string to_string(VariableRole role);

// Graphical role of v relative to (treatment, outcome). Precedence when
// several apply: confounder > instrument > mediator > collider.
VariableRole classify_variable(const CausalGraph& g, const std::string& v,
                               const std::string& treatment,
                               const std::string& outcome);

// Every estimand the implemented criteria yield: one backdoor estimand
// per minimal adjustment set, at most one frontdoor estimand, at most one
// iv estimand. An empty result means "not identified by the implemented
// criteria", which is weaker than "not identifiable".
std::vector<Estimand> identify_effect(const CausalGraph& g,
                                      const std::string& treatment,
                                      const std::string& outcome);

}  // namespace causal

#endif
