#include "causal/graph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "causal/error.hpp"

namespace causal {

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  }
  return true;
}

}  // namespace

std::string Path::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out += nodes[i];
    if (i + 1 < nodes.size()) out += forward[i] ? " -> " : " <- ";
  }
  return out;
}

CausalGraph::CausalGraph(
    std::vector<Node> nodes,
    std::vector<std::pair<std::string, std::string>> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const std::string& name = nodes_[i].name;
    if (!valid_identifier(name))
      throw GraphError("invalid node name '" + name + "'");
    if (!index.emplace(name, i).second)
      throw GraphError("duplicate node '" + name + "'");
  }

  parents_.assign(nodes_.size(), {});
  children_.assign(nodes_.size(), {});
  std::unordered_set<std::string> seen_edges;
  for (const auto& [from, to] : edges_) {
    auto fit = index.find(from);
    auto tit = index.find(to);
    if (fit == index.end())
      throw GraphError("edge endpoint '" + from + "' is not a declared node");
    if (tit == index.end())
      throw GraphError("edge endpoint '" + to + "' is not a declared node");
    if (from == to) throw GraphError("self-loop on node '" + from + "'");
    if (!seen_edges.insert(from + "\x1f" + to).second)
      throw GraphError("duplicate edge " + from + " -> " + to);
    children_[fit->second].push_back(tit->second);
    parents_[tit->second].push_back(fit->second);
  }

  auto by_name = [this](std::size_t a, std::size_t b) {
    return nodes_[a].name < nodes_[b].name;
  };
  for (auto& v : parents_) std::sort(v.begin(), v.end(), by_name);
  for (auto& v : children_) std::sort(v.begin(), v.end(), by_name);

  // Acyclicity via Kahn's algorithm; on failure walk back through nodes
  // of in-degree > 0 to report one concrete cycle.
  std::vector<std::size_t> indeg(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) indeg[i] = parents_[i].size();
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t removed = 0;
  std::vector<std::size_t> local_indeg = indeg;
  while (!ready.empty()) {
    std::size_t u = ready.front();
    ready.pop_front();
    ++removed;
    for (std::size_t v : children_[u])
      if (--local_indeg[v] == 0) ready.push_back(v);
  }
  if (removed != nodes_.size()) {
    // Every remaining node lies on or leads into a cycle; follow parents
    // among remaining nodes until one repeats.
    std::size_t start = 0;
    while (local_indeg[start] == 0) ++start;
    std::vector<std::size_t> trail;
    std::unordered_map<std::size_t, std::size_t> pos;
    std::size_t cur = start;
    while (!pos.count(cur)) {
      pos[cur] = trail.size();
      trail.push_back(cur);
      for (std::size_t p : parents_[cur]) {
        if (local_indeg[p] > 0) {
          cur = p;
          break;
        }
      }
    }
    std::string msg = "graph contains a directed cycle: ";
    std::vector<std::size_t> cycle(trail.begin() + pos[cur], trail.end());
    std::reverse(cycle.begin(), cycle.end());
    for (std::size_t i = 0; i < cycle.size(); ++i)
      msg += nodes_[cycle[i]].name + " -> ";
    msg += nodes_[cycle.front()].name;
    throw GraphError(msg);
  }
}

std::size_t CausalGraph::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].name == name) return i;
  throw ArgumentError("unknown node '" + name + "'");
}

bool CausalGraph::has_node(const std::string& name) const {
  for (const auto& n : nodes_)
    if (n.name == name) return true;
  return false;
}

bool CausalGraph::is_observed(const std::string& name) const {
  return nodes_[index_of(name)].observed;
}

std::vector<std::string> CausalGraph::node_names() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.name);
  return out;
}

NodeSet CausalGraph::observed_nodes() const {
  NodeSet out;
  for (const auto& n : nodes_)
    if (n.observed) out.insert(n.name);
  return out;
}

bool CausalGraph::has_edge(const std::string& from,
                           const std::string& to) const {
  std::size_t f = index_of(from), t = index_of(to);
  return std::find(children_[f].begin(), children_[f].end(), t) !=
         children_[f].end();
}

NodeSet CausalGraph::parents(const std::string& name) const {
  NodeSet out;
  for (std::size_t p : parents_[index_of(name)]) out.insert(nodes_[p].name);
  return out;
}

NodeSet CausalGraph::children(const std::string& name) const {
  NodeSet out;
  for (std::size_t c : children_[index_of(name)]) out.insert(nodes_[c].name);
  return out;
}

std::vector<std::string> CausalGraph::topological_order() const {
  std::vector<std::size_t> indeg(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) indeg[i] = parents_[i].size();
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::vector<std::string> order;
  order.reserve(nodes_.size());
  while (!ready.empty()) {
    std::size_t u = ready.front();
    ready.pop_front();
    order.push_back(nodes_[u].name);
    for (std::size_t v : children_[u])
      if (--indeg[v] == 0) ready.push_back(v);
  }
  return order;
}

namespace {

NodeSet closure(const CausalGraph& g, const NodeSet& s,
                const std::vector<std::vector<std::size_t>>& step,
                const std::vector<CausalGraph::Node>& nodes,
                const std::vector<std::string>& names) {
  (void)g;
  std::vector<bool> seen(nodes.size(), false);
  std::deque<std::size_t> frontier;
  for (const auto& name : s) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ArgumentError("unknown node '" + name + "'");
    std::size_t i = static_cast<std::size_t>(it - names.begin());
    seen[i] = true;
    frontier.push_back(i);
  }
  while (!frontier.empty()) {
    std::size_t u = frontier.front();
    frontier.pop_front();
    for (std::size_t v : step[u]) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push_back(v);
      }
    }
  }
  NodeSet out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (seen[i]) out.insert(nodes[i].name);
  return out;
}

}  // namespace

NodeSet CausalGraph::ancestors(const NodeSet& s) const {
  return closure(*this, s, parents_, nodes_, node_names());
}

NodeSet CausalGraph::descendants(const NodeSet& s) const {
  return closure(*this, s, children_, nodes_, node_names());
}

bool CausalGraph::d_separated(const NodeSet& x, const NodeSet& y,
                              const NodeSet& z) const {
  auto check_disjoint = [](const NodeSet& a, const NodeSet& b,
                           const char* what) {
    for (const auto& n : a)
      if (b.count(n))
        throw ArgumentError(std::string("d_separated: sets ") + what +
                            " overlap on node '" + n + "'");
  };
  check_disjoint(x, y, "x and y");
  check_disjoint(x, z, "x and z");
  check_disjoint(y, z, "y and z");

  std::vector<bool> in_x(nodes_.size(), false), in_y(nodes_.size(), false),
      in_z(nodes_.size(), false);
  auto mark = [this](const NodeSet& s, std::vector<bool>& flags) {
    for (const auto& n : s) flags[index_of(n)] = true;
  };
  mark(x, in_x);
  mark(y, in_y);
  mark(z, in_z);

  // in_anc_z: z together with its ancestors; a collider passes the trail
  // exactly when it lies in this set.
  NodeSet anc_z = ancestors(z);
  std::vector<bool> in_anc_z(nodes_.size(), false);
  for (const auto& n : anc_z) in_anc_z[index_of(n)] = true;

  // Reachability over (node, arrival direction) states. Direction `up`
  // means the trail arrived from a child, `down` from a parent.
  enum Dir { kUp = 0, kDown = 1 };
  std::vector<std::array<bool, 2>> visited(nodes_.size(), {false, false});
  std::deque<std::pair<std::size_t, Dir>> frontier;
  for (const auto& n : x) frontier.emplace_back(index_of(n), kUp);

  while (!frontier.empty()) {
    auto [u, dir] = frontier.front();
    frontier.pop_front();
    if (visited[u][dir]) continue;
    visited[u][dir] = true;
    if (!in_z[u] && in_y[u]) return false;

    if (dir == kUp) {
      if (!in_z[u]) {
        for (std::size_t p : parents_[u]) frontier.emplace_back(p, kUp);
        for (std::size_t c : children_[u]) frontier.emplace_back(c, kDown);
      }
    } else {
      if (!in_z[u])
        for (std::size_t c : children_[u]) frontier.emplace_back(c, kDown);
      if (in_anc_z[u])
        for (std::size_t p : parents_[u]) frontier.emplace_back(p, kUp);
    }
  }
  return true;
}

std::vector<Path> CausalGraph::backdoor_paths(const std::string& t,
                                              const std::string& y) const {
  if (t == y) throw ArgumentError("backdoor_paths: treatment equals outcome");
  if (nodes_.size() > kMaxEnumerationNodes)
    throw ArgumentError("path enumeration refused for graphs with more than " +
                        std::to_string(kMaxEnumerationNodes) + " nodes");
  std::size_t ti = index_of(t), yi = index_of(y);

  std::vector<Path> out;
  std::vector<bool> on_path(nodes_.size(), false);
  Path cur;

  // DFS over the skeleton; neighbor order is lexicographic, so output is
  // deterministic.
  auto dfs = [&](auto&& self, std::size_t u) -> void {
    if (u == yi) {
      out.push_back(cur);
      return;
    }
    struct Step {
      std::size_t node;
      bool forward;
    };
    std::vector<Step> steps;
    for (std::size_t c : children_[u]) steps.push_back({c, true});
    for (std::size_t p : parents_[u]) steps.push_back({p, false});
    std::sort(steps.begin(), steps.end(), [this](const Step& a, const Step& b) {
      return nodes_[a.node].name < nodes_[b.node].name;
    });
    for (const Step& s : steps) {
      if (on_path[s.node]) continue;
      on_path[s.node] = true;
      cur.nodes.push_back(nodes_[s.node].name);
      cur.forward.push_back(s.forward);
      self(self, s.node);
      cur.nodes.pop_back();
      cur.forward.pop_back();
      on_path[s.node] = false;
    }
  };

  on_path[ti] = true;
  cur.nodes.push_back(t);
  // First edge must point into t.
  for (std::size_t p : parents_[ti]) {
    if (on_path[p]) continue;
    on_path[p] = true;
    cur.nodes.push_back(nodes_[p].name);
    cur.forward.push_back(false);
    dfs(dfs, p);
    cur.nodes.pop_back();
    cur.forward.pop_back();
    on_path[p] = false;
  }
  return out;
}

std::vector<std::vector<std::string>> CausalGraph::directed_paths(
    const std::string& t, const std::string& y) const {
  if (nodes_.size() > kMaxEnumerationNodes)
    throw ArgumentError("path enumeration refused for graphs with more than " +
                        std::to_string(kMaxEnumerationNodes) + " nodes");
  std::size_t ti = index_of(t), yi = index_of(y);
  std::vector<std::vector<std::string>> out;
  std::vector<bool> on_path(nodes_.size(), false);
  std::vector<std::string> cur{nodes_[ti].name};
  auto dfs = [&](auto&& self, std::size_t u) -> void {
    if (u == yi) {
      out.push_back(cur);
      return;
    }
    for (std::size_t c : children_[u]) {
      if (on_path[c]) continue;
      on_path[c] = true;
      cur.push_back(nodes_[c].name);
      self(self, c);
      cur.pop_back();
      on_path[c] = false;
    }
  };
  on_path[ti] = true;
  dfs(dfs, ti);
  return out;
}

CausalGraph CausalGraph::without_outgoing_edges(const NodeSet& s) const {
  for (const auto& n : s) index_of(n);  // validate
  std::vector<std::pair<std::string, std::string>> kept;
  for (const auto& e : edges_)
    if (!s.count(e.first)) kept.push_back(e);
  return CausalGraph(nodes_, std::move(kept));
}

CausalGraph CausalGraph::with_added_node(const std::string& name,
                                         bool observed,
                                         const NodeSet& children) const {
  if (has_node(name))
    throw ArgumentError("node '" + name + "' already exists");
  auto nodes = nodes_;
  nodes.push_back({name, observed});
  auto edges = edges_;
  for (const auto& c : children) edges.emplace_back(name, c);
  return CausalGraph(std::move(nodes), std::move(edges));
}

std::string CausalGraph::to_dot() const {
  std::ostringstream out;
  out << "digraph {\n";
  for (const auto& n : nodes_) {
    out << "  " << n.name;
    if (!n.observed) out << " [observed=\"no\"]";
    out << ";\n";
  }
  for (const auto& [from, to] : edges_)
    out << "  " << from << " -> " << to << ";\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// DOT-subset parser

namespace {

struct Token {
  enum Kind { kIdent, kString, kArrow, kSymbol, kEnd } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws_and_comments();
    std::size_t line = line_, col = col_;
    if (pos_ >= text_.size()) return {Token::kEnd, "", line, col};
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ident += text_[pos_];
        advance();
      }
      return {Token::kIdent, ident, line, col};
    }
    if (c == '"') {
      advance();
      std::string value;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n')
          throw ParseError("unterminated string literal", line, col);
        value += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size())
        throw ParseError("unterminated string literal", line, col);
      advance();
      return {Token::kString, value, line, col};
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      advance();
      advance();
      return {Token::kArrow, "->", line, col};
    }
    if (c == '{' || c == '}' || c == ';' || c == '[' || c == ']' || c == '=' ||
        c == ',') {
      advance();
      return {Token::kSymbol, std::string(1, c), line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line,
                     col);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

[[noreturn]] void fail(const Token& tok, const std::string& msg) {
  throw ParseError(msg, tok.line, tok.column);
}

}  // namespace

CausalGraph parse_graph(const std::string& text) {
  Lexer lex(text);
  Token tok = lex.next();
  if (tok.kind != Token::kIdent || tok.text != "digraph")
    fail(tok, "expected 'digraph'");
  tok = lex.next();
  if (tok.kind == Token::kIdent) tok = lex.next();  // optional graph name
  if (tok.kind != Token::kSymbol || tok.text != "{") fail(tok, "expected '{'");

  std::vector<CausalGraph::Node> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::unordered_map<std::string, std::size_t> declared;  // name -> nodes idx

  // Implicit declaration on first mention; an explicit node statement may
  // later set the observed flag, but only once.
  auto touch = [&](const std::string& name) -> std::size_t {
    auto it = declared.find(name);
    if (it != declared.end()) return it->second;
    nodes.push_back({name, true});
    declared[name] = nodes.size() - 1;
    return nodes.size() - 1;
  };
  std::unordered_set<std::string> explicitly_declared;

  for (;;) {
    tok = lex.next();
    if (tok.kind == Token::kSymbol && tok.text == "}") break;
    if (tok.kind == Token::kEnd) fail(tok, "expected '}' before end of input");
    if (tok.kind != Token::kIdent) fail(tok, "expected node name");
    Token first = tok;

    tok = lex.next();
    if (tok.kind == Token::kArrow) {
      Token to = lex.next();
      if (to.kind != Token::kIdent) fail(to, "expected node name after '->'");
      tok = lex.next();
      if (tok.kind == Token::kSymbol && tok.text == "[")
        fail(tok, "edge attributes are not supported");
      if (!(tok.kind == Token::kSymbol && tok.text == ";"))
        fail(tok, "expected ';' after edge statement");
      touch(first.text);
      touch(to.text);
      edges.emplace_back(first.text, to.text);
      continue;
    }

    // Node statement.
    std::size_t idx = touch(first.text);
    if (!explicitly_declared.insert(first.text).second)
      fail(first, "duplicate node declaration '" + first.text + "'");
    if (tok.kind == Token::kSymbol && tok.text == "[") {
      for (;;) {
        Token key = lex.next();
        if (key.kind != Token::kIdent) fail(key, "expected attribute name");
        if (key.text != "observed")
          fail(key, "unrecognized attribute '" + key.text + "'");
        Token eq = lex.next();
        if (!(eq.kind == Token::kSymbol && eq.text == "="))
          fail(eq, "expected '=' in attribute");
        Token value = lex.next();
        if (value.kind != Token::kString)
          fail(value, "expected quoted attribute value");
        if (value.text == "no")
          nodes[idx].observed = false;
        else if (value.text == "yes")
          nodes[idx].observed = true;
        else
          fail(value, "attribute observed must be \"yes\" or \"no\"");
        Token sep = lex.next();
        if (sep.kind == Token::kSymbol && sep.text == ",") continue;
        if (sep.kind == Token::kSymbol && sep.text == "]") break;
        fail(sep, "expected ',' or ']' in attribute list");
      }
      tok = lex.next();
    }
    if (!(tok.kind == Token::kSymbol && tok.text == ";"))
      fail(tok, "expected ';' after node statement");
  }

  tok = lex.next();
  if (tok.kind != Token::kEnd) fail(tok, "trailing input after '}'");

  try {
    return CausalGraph(std::move(nodes), std::move(edges));
  } catch (const GraphError&) {
    throw;  // cycle / duplicate-edge diagnostics pass through unchanged
  }
}

CausalGraph parse_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

}  // namespace causal
