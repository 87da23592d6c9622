#ifndef CAUSAL_GRAPH_HPP
#define CAUSAL_GRAPH_HPP

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace causal {

// Node sets are kept as std::set<std::string> so every returned set is
// already in lexicographic order.
using NodeSet = std::set<std::string>;

// A simple path through the graph skeleton. forward[i] is true when the
// edge between nodes[i] and nodes[i+1] is oriented nodes[i] -> nodes[i+1].
struct Path {
  std::vector<std::string> nodes;
  std::vector<bool> forward;

  std::string to_string() const;
};

// Immutable causal DAG over named variables. Nodes carry an observed flag
// (default observed); validation rejects cycles, duplicate nodes,
// self-loops, duplicate edges and malformed names at construction, so
// every live CausalGraph is a valid DAG. All queries are const and
// reentrant.
class CausalGraph {
 public:
  struct Node {
    std::string name;
    bool observed = true;
  };

  CausalGraph() = default;  // empty graph
  CausalGraph(std::vector<Node> nodes,
              std::vector<std::pair<std::string, std::string>> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_node(const std::string& name) const;
  bool is_observed(const std::string& name) const;

  // All node names in declaration order.
  std::vector<std::string> node_names() const;
  NodeSet observed_nodes() const;
  const std::vector<std::pair<std::string, std::string>>& edges() const {
    return edges_;
  }

  bool has_edge(const std::string& from, const std::string& to) const;
  NodeSet parents(const std::string& name) const;
  NodeSet children(const std::string& name) const;

  // Every edge goes from earlier to later in the returned sequence.
  std::vector<std::string> topological_order() const;

  // Reflexive-transitive closure along reversed (resp. forward) edges.
  NodeSet ancestors(const NodeSet& s) const;
  NodeSet descendants(const NodeSet& s) const;

  // True iff every path between x and y is blocked by z under d-separation
  // semantics. Computed by reachability, not path enumeration; x, y, z
  // must be pairwise disjoint.
  bool d_separated(const NodeSet& x, const NodeSet& y, const NodeSet& z) const;

  // All simple paths from t to y whose first edge points into t,
  // lexicographic by node sequence. Refuses graphs with more than
  // kMaxEnumerationNodes nodes.
  std::vector<Path> backdoor_paths(const std::string& t,
                                   const std::string& y) const;

  // All directed simple paths t -> ... -> y (used by the frontdoor check).
  std::vector<std::vector<std::string>> directed_paths(
      const std::string& t, const std::string& y) const;

  // Copy with all outgoing edges of the given nodes removed.
  CausalGraph without_outgoing_edges(const NodeSet& s) const;

  // Copy with one extra node and edges from it to the given children.
  CausalGraph with_added_node(const std::string& name, bool observed,
                              const NodeSet& children) const;

  // Restricted-DOT serialization; parse_graph(to_dot()) round-trips.
  std::string to_dot() const;

  static constexpr std::size_t kMaxEnumerationNodes = 64;

 private:
  std::size_t index_of(const std::string& name) const;  // throws ArgumentError

  std::vector<Node> nodes_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::vector<std::vector<std::size_t>> parents_;   // sorted by name
  std::vector<std::vector<std::size_t>> children_;  // sorted by name
};

// Parses the restricted DOT dialect:
//   digraph [name] { stmt* }
//   stmt := node [attrs] ';' | node '->' node [attrs] ';'
//   attrs := '[' observed = "yes"|"no" ']'   (edges take no attributes)
// '#' starts a comment running to end of line. Anything outside this
// grammar is a parse error.
CausalGraph parse_graph(const std::string& text);

CausalGraph parse_graph_file(const std::string& path);

}  // namespace causal

#endif
