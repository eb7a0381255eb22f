#include "relknot/reach.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_map>

#include "relknot/errors.hpp"

namespace relknot {

Wff Wff::atom(std::size_t index) {
  if (index == 0) throw ArgumentError("atoms are numbered from 1");
  Wff w;
  w.kind_ = Kind::atom;
  w.index_ = index;
  return w;
}

Wff Wff::truth() { return Wff(); }

Wff Wff::falsity() {
  Wff w;
  w.kind_ = Kind::falsity;
  return w;
}

Wff Wff::conj(Wff a, Wff b) {
  Wff w;
  w.kind_ = Kind::conj;
  w.a_ = std::make_shared<const Wff>(std::move(a));
  w.b_ = std::make_shared<const Wff>(std::move(b));
  return w;
}

Wff Wff::disj(Wff a, Wff b) {
  Wff w = conj(std::move(a), std::move(b));
  w.kind_ = Kind::disj;
  return w;
}

Wff Wff::neg(Wff a) {
  Wff w;
  w.kind_ = Kind::neg;
  w.a_ = std::make_shared<const Wff>(std::move(a));
  return w;
}

Wff Wff::all_of(std::size_t n) {
  if (n == 0) return truth();
  Wff w = atom(1);
  for (std::size_t i = 2; i <= n; ++i) w = conj(std::move(w), atom(i));
  return w;
}

std::size_t Wff::arity() const {
  switch (kind_) {
    case Kind::atom:
      return index_;
    case Kind::conj:
    case Kind::disj:
      return std::max(a_->arity(), b_->arity());
    case Kind::neg:
      return a_->arity();
    default:
      return 0;
  }
}

std::string Wff::to_string() const {
  switch (kind_) {
    case Kind::atom:
      return "a" + std::to_string(index_);
    case Kind::truth:
      return "T";
    case Kind::falsity:
      return "F";
    case Kind::conj:
      return "(" + a_->to_string() + " & " + b_->to_string() + ")";
    case Kind::disj:
      return "(" + a_->to_string() + " | " + b_->to_string() + ")";
    case Kind::neg:
      return "~" + a_->to_string();
  }
  return "?";
}

bool eval_wff(const Wff& w, const std::vector<bool>& assignment) {
  if (assignment.size() < w.arity())
    throw ArgumentError("formula uses " + std::to_string(w.arity()) + " atoms, assignment has " +
                        std::to_string(assignment.size()));
  switch (w.kind_) {
    case Wff::Kind::atom:
      return assignment[w.index_ - 1];
    case Wff::Kind::truth:
      return true;
    case Wff::Kind::falsity:
      return false;
    case Wff::Kind::conj:
      return eval_wff(*w.a_, assignment) && eval_wff(*w.b_, assignment);
    case Wff::Kind::disj:
      return eval_wff(*w.a_, assignment) || eval_wff(*w.b_, assignment);
    case Wff::Kind::neg:
      return !eval_wff(*w.a_, assignment);
  }
  return false;
}

ConditionalTheory ConditionalTheory::parse(const std::string& spec) {
  std::string s;
  for (char ch : spec)
    if (ch != ' ') s += (ch == '(' || ch == ',') ? ':' : ch;
  if (!s.empty() && s.back() == ')') s.pop_back();
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
  if (parts.empty()) throw ArgumentError("empty theory name");

  ConditionalTheory t;
  const std::string& head = parts[0];
  if (head == "value_monotone") {
    t.kind = TheoryKind::value_monotone;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i] == "strict")
        t.strict = true;
      else if (parts[i] == "weak")
        t.strict = false;
      else if (parts[i] != "crossing_count" && parts[i] != "crossings")
        throw ArgumentError("unknown value_monotone parameter '" + parts[i] + "'");
    }
    return t;
  }
  if (parts.size() > 1) throw ArgumentError("theory '" + head + "' takes no parameters");
  if (head == "always" || head == "unconditional")
    t.kind = TheoryKind::always;
  else if (head == "parity")
    t.kind = TheoryKind::parity;
  else if (head == "arc_C1" || head == "arc_c1" || head == "C1")
    t.kind = TheoryKind::arc_c1;
  else if (head == "component_rel")
    t.kind = TheoryKind::component_rel;
  else
    throw ArgumentError("unknown theory '" + spec + "'");
  return t;
}

std::string ConditionalTheory::name() const {
  switch (kind) {
    case TheoryKind::always:
      return "always";
    case TheoryKind::parity:
      return "parity";
    case TheoryKind::value_monotone:
      return strict ? "value_monotone:strict" : "value_monotone:weak";
    case TheoryKind::arc_c1:
      return "arc_C1";
    case TheoryKind::component_rel:
      return "component_rel";
  }
  return "?";
}

namespace {

bool needs_target(const ConditionalTheory& t) {
  return t.kind == TheoryKind::parity || t.kind == TheoryKind::value_monotone;
}

// Atoms and formula given the source and, when needed, the target.
Verdict judge(const ConditionalTheory& t, const LabeledDiagram& from, const Move& m,
              const LabeledDiagram* to) {
  Verdict v;
  switch (t.kind) {
    case TheoryKind::always:
      v.atoms = {true};
      v.formula = Wff::disj(Wff::atom(1), Wff::neg(Wff::atom(1)));
      break;
    case TheoryKind::parity: {
      std::size_t a = from.diagram.crossing_count(), b = to->diagram.crossing_count();
      v.atoms = {a % 2 == b % 2};
      v.formula = Wff::atom(1);
      break;
    }
    case TheoryKind::value_monotone: {
      std::size_t a = from.diagram.crossing_count(), b = to->diagram.crossing_count();
      v.atoms = {a <= b, b <= a};
      v.formula = t.strict ? Wff::conj(Wff::atom(1), Wff::neg(Wff::atom(2))) : Wff::atom(1);
      break;
    }
    case TheoryKind::arc_c1: {
      if (from.mode != Mode::arc_relation)
        throw ArgumentError("arc_C1 needs a diagram labeled on arcs");
      for (const auto& a : m.passed) v.atoms.push_back(from.rel.relate(a, m.moving));
      for (const auto& [x, y] : m.merges) v.atoms.push_back(from.rel.relate(x, y));
      v.formula = Wff::all_of(v.atoms.size());
      break;
    }
    case TheoryKind::component_rel: {
      if (from.mode != Mode::component_relation)
        throw ArgumentError("component_rel needs a diagram labeled on components");
      // Per-atom split of the moves-level predicate.
      const Diagram& d = from.diagram;
      auto comp = [&](const std::string& arc) {
        return d.components()[d.arcs()[*d.find_arc(arc)].component].name;
      };
      for (const auto& a : m.passed) v.atoms.push_back(from.rel.relate(comp(a), comp(m.moving)));
      v.formula = Wff::all_of(v.atoms.size());
      break;
    }
  }
  v.licensed = eval_wff(v.formula, v.atoms);
  return v;
}

}  // namespace

Verdict evaluate(const ConditionalTheory& t, const LabeledDiagram& from, const Move& m) {
  // The candidate carries the arc names; `m` may only hold type and site.
  const auto cands = candidate_moves(from);
  auto it = std::find(cands.begin(), cands.end(), m);
  if (it == cands.end()) throw PreconditionError("move is not applicable to this diagram");
  if (!needs_target(t)) return judge(t, from, *it, nullptr);
  const LabeledDiagram to = apply_move(from, *it);
  return judge(t, from, *it, &to);
}

bool licensed(const ConditionalTheory& t, const LabeledDiagram& from, const Move& m) {
  return evaluate(t, from, m).licensed;
}

std::vector<Move> licensed_moves(const ConditionalTheory& t, const LabeledDiagram& d) {
  std::vector<Move> out;
  for (auto& m : candidate_moves(d)) {
    std::optional<LabeledDiagram> to;
    if (needs_target(t)) to = apply_candidate(d, m);
    if (judge(t, d, m, to ? &*to : nullptr).licensed) out.push_back(std::move(m));
  }
  return out;
}

Bounds default_bounds(const LabeledDiagram& source) {
  Bounds b;
  b.max_crossings = source.diagram.crossing_count() + 2;
  if (const char* env = std::getenv("RELKNOT_MAX_STATES")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) b.max_states = static_cast<std::size_t>(n);
  }
  return b;
}

std::optional<std::size_t> MoveGraph::find(const std::string& key) const {
  auto it = std::find(keys.begin(), keys.end(), key);
  if (it == keys.end()) return std::nullopt;
  return static_cast<std::size_t>(it - keys.begin());
}

namespace {

std::vector<std::size_t> closure(const MoveGraph& g, std::size_t n, bool forward) {
  std::vector<std::vector<std::size_t>> adj(g.nodes.size());
  for (const auto& e : g.edges) {
    if (forward)
      adj[e.from].push_back(e.to);
    else
      adj[e.to].push_back(e.from);
  }
  std::vector<bool> seen(g.nodes.size(), false);
  std::vector<std::size_t> stack{n}, out;
  seen[n] = true;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    out.push_back(x);
    for (std::size_t y : adj[x])
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Search {
  MoveGraph graph;
  std::vector<std::optional<std::size_t>> parent_edge;  // BFS tree
  std::optional<std::size_t> hit;
};

Search search(const ConditionalTheory& t, const LabeledDiagram& source, const Bounds& b,
              const std::string* stop_key) {
  if (b.max_states == 0) throw ArgumentError("state bound must be positive");
  Search s;
  MoveGraph& g = s.graph;
  g.bounds = b;
  std::unordered_map<std::string, std::size_t> index;
  auto add = [&](LabeledDiagram d, std::string key, std::size_t depth) {
    index.emplace(key, g.nodes.size());
    g.nodes.push_back(std::move(d));
    g.keys.push_back(std::move(key));
    g.depth.push_back(depth);
    s.parent_edge.push_back(std::nullopt);
    return g.nodes.size() - 1;
  };
  add(source, canonical_key(source), 0);
  if (stop_key && g.keys[0] == *stop_key) {
    s.hit = 0;
    return s;
  }

  std::set<std::pair<std::size_t, std::size_t>> seen_edges;
  for (std::size_t cur = 0; cur < g.nodes.size(); ++cur) {
    const LabeledDiagram from = g.nodes[cur];
    const std::size_t depth = g.depth[cur];
    for (auto& m : candidate_moves(from)) {
      const bool beyond =
          static_cast<long>(from.diagram.crossing_count()) + crossing_delta(m.type) >
          static_cast<long>(b.max_crossings);
      std::optional<LabeledDiagram> built;
      if (needs_target(t) || !beyond) built = apply_candidate(from, m);
      if (!judge(t, from, m, built ? &*built : nullptr).licensed) continue;
      if (beyond) {
        ++g.beyond_crossings;
        continue;
      }
      LabeledDiagram& to = *built;
      std::string key = canonical_key(to);
      std::size_t target;
      if (auto it = index.find(key); it != index.end()) {
        target = it->second;
      } else if (depth >= b.max_depth || g.nodes.size() >= b.max_states) {
        g.truncated = true;
        continue;
      } else {
        target = add(std::move(to), std::move(key), depth + 1);
        s.parent_edge[target] = g.edges.size();
      }
      if (seen_edges.emplace(cur, target).second)
        g.edges.push_back({cur, target, m});
      if (stop_key && g.keys[target] == *stop_key) {
        s.hit = target;
        return s;
      }
    }
  }
  return s;
}

}  // namespace

std::vector<std::size_t> MoveGraph::out_set(std::size_t n) const { return closure(*this, n, true); }

std::vector<std::size_t> MoveGraph::in_set(std::size_t n) const { return closure(*this, n, false); }

MoveGraph explore(const ConditionalTheory& t, const LabeledDiagram& source, const Bounds& b) {
  return search(t, source, b, nullptr).graph;
}

ReachResult reachable(const ConditionalTheory& t, const LabeledDiagram& from,
                      const LabeledDiagram& to, const Bounds& b) {
  const std::string key = canonical_key(to);
  Search s = search(t, from, b, &key);
  ReachResult r;
  r.states = s.graph.nodes.size();
  r.truncated = s.graph.truncated;
  if (!s.hit) return r;
  r.found = true;
  for (std::size_t n = *s.hit; s.parent_edge[n];) {
    const auto& e = s.graph.edges[*s.parent_edge[n]];
    r.path.push_back(e.move);
    n = e.from;
  }
  std::reverse(r.path.begin(), r.path.end());
  return r;
}

Condensation condense(const MoveGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges) adj[e.from].push_back(e.to);

  // Iterative Tarjan.
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> idx(n, none), low(n, 0), comp(n, none);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> raw;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (idx[root] != none) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < adj[v].size()) {
        std::size_t w = adj[v][i++];
        if (idx[w] == none) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
        continue;
      }
      if (low[v] == idx[v]) {
        std::vector<std::size_t> c;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          c.push_back(w);
        } while (w != v);
        std::sort(c.begin(), c.end());
        raw.push_back(std::move(c));
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }

  Condensation out;
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  out.classes = std::move(raw);
  out.class_of.assign(n, 0);
  for (std::size_t c = 0; c < out.classes.size(); ++c)
    for (std::size_t v : out.classes[c]) out.class_of[v] = c;
  std::set<std::pair<std::size_t, std::size_t>> es;
  for (const auto& e : g.edges) {
    std::size_t a = out.class_of[e.from], b = out.class_of[e.to];
    if (a != b) es.emplace(a, b);
  }
  out.edges.assign(es.begin(), es.end());
  out.terminal.assign(out.classes.size(), true);
  for (const auto& [a, b] : out.edges) out.terminal[a] = false;
  return out;
}

std::string to_dot(const MoveGraph& g) {
  std::ostringstream os;
  os << "digraph moves {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& d = g.nodes[i].diagram;
    os << "  n" << i << " [label=\"" << i << ": " << d.crossing_count() << "x";
    if (d.free_loop_count()) os << " +" << d.free_loop_count() << "o";
    os << "\"" << (i == 0 ? ", shape=box" : "") << "];\n";
  }
  for (const auto& e : g.edges)
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << to_string(e.move.type) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace relknot
