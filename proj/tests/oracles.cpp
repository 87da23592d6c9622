#include "oracles.hpp"

#include <algorithm>

namespace causal::oracle {

std::vector<Path> all_paths(const CausalGraph& g, const std::string& a,
                            const std::string& b) {
  std::vector<Path> out;
  NodeSet on_path{a};
  Path cur;
  cur.nodes.push_back(a);

  auto dfs = [&](auto&& self, const std::string& u) -> void {
    if (u == b) {
      out.push_back(cur);
      return;
    }
    struct Step {
      std::string node;
      bool forward;
    };
    std::vector<Step> steps;
    for (const auto& c : g.children(u)) steps.push_back({c, true});
    for (const auto& p : g.parents(u)) steps.push_back({p, false});
    std::sort(steps.begin(), steps.end(),
              [](const Step& x, const Step& y) { return x.node < y.node; });
    for (const auto& s : steps) {
      if (on_path.count(s.node)) continue;
      on_path.insert(s.node);
      cur.nodes.push_back(s.node);
      cur.forward.push_back(s.forward);
      self(self, s.node);
      cur.nodes.pop_back();
      cur.forward.pop_back();
      on_path.erase(s.node);
    }
  };
  dfs(dfs, a);
  return out;
}

bool path_blocked(const CausalGraph& g, const Path& path, const NodeSet& z) {
  for (std::size_t i = 1; i + 1 < path.nodes.size(); ++i) {
    const bool incoming = path.forward[i - 1];   // edge points into node i
    const bool outgoing_back = !path.forward[i];  // next edge points into i
    const bool collider = incoming && outgoing_back;
    const std::string& node = path.nodes[i];
    if (!collider) {
      if (z.count(node)) return true;
    } else {
      const NodeSet desc = g.descendants({node});
      bool opened = false;
      for (const auto& d : desc)
        if (z.count(d)) {
          opened = true;
          break;
        }
      if (!opened) return true;
    }
  }
  return false;
}

bool d_separated_paths(const CausalGraph& g, const NodeSet& x,
                       const NodeSet& y, const NodeSet& z) {
  for (const auto& a : x)
    for (const auto& b : y)
      for (const auto& path : all_paths(g, a, b))
        if (!path_blocked(g, path, z)) return false;
  return true;
}

std::vector<NodeSet> backdoor_sets_bruteforce(const CausalGraph& g,
                                              const std::string& t,
                                              const std::string& y) {
  const NodeSet desc_t = g.descendants({t});
  std::vector<std::string> candidates;
  for (const auto& n : g.observed_nodes())
    if (n != t && n != y) candidates.push_back(n);

  const std::vector<Path> paths = g.backdoor_paths(t, y);
  std::vector<NodeSet> valid;
  const std::size_t m = candidates.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    NodeSet s;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) s.insert(candidates[i]);
    bool ok = true;
    for (const auto& n : s)
      if (desc_t.count(n)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    for (const auto& path : paths)
      if (!path_blocked(g, path, s)) {
        ok = false;
        break;
      }
    if (ok) valid.push_back(std::move(s));
  }
  std::sort(valid.begin(), valid.end());
  return valid;
}

std::vector<NodeSet> minimal_sets(std::vector<NodeSet> sets) {
  std::vector<NodeSet> out;
  for (const auto& s : sets) {
    bool has_proper_subset = false;
    for (const auto& other : sets) {
      if (other == s || other.size() >= s.size()) continue;
      if (std::includes(s.begin(), s.end(), other.begin(), other.end())) {
        has_proper_subset = true;
        break;
      }
    }
    if (!has_proper_subset) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CausalGraph random_dag(Rng& rng, std::size_t max_nodes, double edge_prob,
                       double unobserved_prob) {
  const std::size_t n = 1 + rng.uniform_index(max_nodes);
  std::vector<CausalGraph::Node> nodes;
  for (std::size_t i = 0; i < n; ++i)
    nodes.push_back(
        {"n" + std::to_string(i), !rng.bernoulli(unobserved_prob)});
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(edge_prob))
        edges.emplace_back(nodes[i].name, nodes[j].name);
  return CausalGraph(std::move(nodes), std::move(edges));
}

}  // namespace causal::oracle
