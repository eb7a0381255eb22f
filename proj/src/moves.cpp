#include "relknot/moves.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <set>
#include <stdexcept>

#include "relknot/errors.hpp"

namespace relknot {

std::string to_string(MoveType t) {
  switch (t) {
    case MoveType::r1_plus: return "R1+";
    case MoveType::r1_minus: return "R1-";
    case MoveType::r2_plus: return "R2+";
    case MoveType::r2_minus: return "R2-";
    case MoveType::r3: return "R3";
  }
  return "?";
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::unconditional: return "unconditional";
    case Condition::arc_c1: return "arc_C1";
    case Condition::component_rel: return "component_rel";
  }
  return "?";
}

Condition parse_condition(const std::string& s) {
  if (s == "unconditional" || s == "always") return Condition::unconditional;
  if (s == "arc_C1" || s == "C1" || s == "arc_c1") return Condition::arc_c1;
  if (s == "component_rel" || s == "component") return Condition::component_rel;
  throw ArgumentError("unknown condition '" + s + "'");
}

const LabelTemplate& MoveScheme::at(const std::string& slot) const {
  auto it = templates.find(slot);
  if (it == templates.end()) throw ArgumentError("scheme '" + name + "' has no slot " + slot);
  return it->second;
}

MoveScheme MoveScheme::default_scheme() {
  MoveScheme s;
  s.name = "default";
  auto put = [&](const char* slot, const char* term, const char* witness) {
    s.templates[slot] = {parse_term(term), witness};
  };
  put("R1+.piece", "a", "a");
  put("R1-.merged", "x & y", "x");
  put("R2+.outer", "a", "a");
  put("R2+.middle", "a & c", "a");
  put("R2+.over", "c", "c");
  put("R2-.merged", "u1 & m & u2", "u1");
  put("R2-.over", "c", "c");
  put("R3.interior", "b & (a1 | a2 | a3)", "b");
  return s;
}

MoveScheme MoveScheme::named(const std::string& name) {
  if (name == "default") return default_scheme();
  throw ArgumentError("unknown move scheme '" + name + "'");
}

EntropyReport check_entropy_decreasing(const MoveScheme& scheme) {
  EntropyReport r;
  for (const auto& [slot, t] : scheme.templates) {
    std::string why;
    if (!t.term.is_lattice()) why = "uses negation";
    else if (!lattice_leq(t.term, BoolTerm::var(t.witness)))
      why = "is not below its witness " + t.witness;
    if (!why.empty()) r.violations.push_back(slot + ": " + t.term.to_string() + " " + why);
  }
  r.ok = r.violations.empty();
  return r;
}

namespace {

using Vertex = Diagram::Vertex;
using Edge = Diagram::Edge;

bool over_port(int p) { return p == 1 || p == 3; }

std::vector<std::string> dedupe(std::vector<std::string> xs) {
  std::vector<std::string> out;
  for (auto& x : xs)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  return out;
}

const std::string& arc_name(const Diagram& d, int e) { return d.arcs()[d.arc_of_edge(e)].name; }

std::string side_name(int s) { return s == 0 ? "left" : "right"; }

// Two-sided bigon with one strand over at both corners; returns the edges.
struct Bigon {
  int over = -1, under = -1;
};

std::optional<Bigon> coherent_bigon(const Diagram& d, const Diagram::Face& f) {
  if (f.sides.size() != 2) return std::nullopt;
  int e1 = f.sides[0].edge, e2 = f.sides[1].edge;
  if (e1 == e2) return std::nullopt;
  const auto& es = d.edges();
  const auto& vs = d.vertices();
  for (int e : {e1, e2})
    if (!vs[es[e].tail].crossing || es[e].tail == es[e].head) return std::nullopt;
  auto is_over = [&](int e) { return over_port(es[e].tail_port) && over_port(es[e].head_port); };
  auto is_under = [&](int e) { return es[e].tail_port == 2 && es[e].head_port == 0; };
  Bigon b;
  if (is_over(e1) && is_under(e2)) b = {e1, e2};
  else if (is_over(e2) && is_under(e1)) b = {e2, e1};
  else return std::nullopt;
  std::set<int> ends1{es[b.over].tail, es[b.over].head}, ends2{es[b.under].tail, es[b.under].head};
  if (ends1 != ends2) return std::nullopt;
  return b;
}

// Triangle with one strand over at both of its corners and one under at both.
struct Triangle {
  int top = -1, middle = -1, bottom = -1;  // interior edges
  int x_mb = -1;                           // corner of middle and bottom
};

std::optional<Triangle> admissible_triangle(const Diagram& d, const Diagram::Face& f) {
  if (f.sides.size() != 3) return std::nullopt;
  const auto& es = d.edges();
  const auto& vs = d.vertices();
  std::set<int> edges, corners;
  Triangle t;
  for (const auto& s : f.sides) {
    const Edge& ed = es[s.edge];
    if (!vs[ed.tail].crossing || ed.tail == ed.head) return std::nullopt;
    edges.insert(s.edge);
    corners.insert(ed.tail);
    corners.insert(ed.head);
    bool over_t = over_port(ed.tail_port), over_h = over_port(ed.head_port);
    if (over_t && over_h) {
      if (t.top >= 0) return std::nullopt;
      t.top = s.edge;
    } else if (!over_t && !over_h) {
      if (t.bottom >= 0) return std::nullopt;
      t.bottom = s.edge;
    } else {
      if (t.middle >= 0) return std::nullopt;
      t.middle = s.edge;
    }
  }
  if (edges.size() != 3 || corners.size() != 3 || t.top < 0 || t.middle < 0 || t.bottom < 0)
    return std::nullopt;
  std::set<int> top_ends{es[t.top].tail, es[t.top].head};
  for (int v : corners)
    if (!top_ends.count(v)) t.x_mb = v;
  return t;
}

}  // namespace

std::vector<Move> candidate_moves(const LabeledDiagram& ld) {
  const Diagram& d = ld.diagram;
  const auto& es = d.edges();
  const auto& vs = d.vertices();
  std::vector<Move> out;

  // Reductions first.
  for (std::size_t v : d.crossings()) {
    bool kink = false;
    for (int p = 0; p < 4; ++p) {
      const Edge& ed = es[vs[v].edge[p]];
      if (ed.tail == static_cast<int>(v) && ed.head == static_cast<int>(v)) kink = true;
    }
    if (!kink) continue;
    Move m;
    m.type = MoveType::r1_minus;
    m.site = {static_cast<int>(v)};
    const std::string& x = d.arcs()[d.under_in_arc(v)].name;
    const std::string& y = d.arcs()[d.under_out_arc(v)].name;
    m.moving = d.arcs()[d.over_arc(v)].name;
    m.passed = dedupe({x, y});
    if (x != y) m.merges = {{x, y}};
    m.description = "R1- remove kink at crossing " + vs[v].id;
    out.push_back(std::move(m));
  }
  for (std::size_t fi = 0; fi < d.faces().size(); ++fi) {
    auto b = coherent_bigon(d, d.faces()[fi]);
    if (!b) continue;
    int v1 = es[b->under].tail, v2 = es[b->under].head;
    Move m;
    m.type = MoveType::r2_minus;
    m.site = {v1, v2, static_cast<int>(fi)};
    m.moving = arc_name(d, b->over);
    std::string u1 = d.arcs()[d.under_in_arc(v1)].name, mid = arc_name(d, b->under),
                u2 = d.arcs()[d.under_out_arc(v2)].name;
    m.passed = dedupe({u1, mid, u2});
    for (auto [x, y] : {std::pair{u1, mid}, std::pair{mid, u2}, std::pair{u1, u2}})
      if (x != y) m.merges.emplace_back(x, y);
    m.description = "R2- remove bigon of " + m.moving + " over " + mid + " at crossings " +
                    vs[v1].id + "," + vs[v2].id;
    out.push_back(std::move(m));
  }
  for (std::size_t fi = 0; fi < d.faces().size(); ++fi) {
    auto t = admissible_triangle(d, d.faces()[fi]);
    if (!t) continue;
    Move m;
    m.type = MoveType::r3;
    m.site = {static_cast<int>(fi)};
    m.moving = arc_name(d, t->top);
    std::size_t x = static_cast<std::size_t>(t->x_mb);
    m.passed = dedupe({d.arcs()[d.over_arc(x)].name, d.arcs()[d.under_in_arc(x)].name,
                       d.arcs()[d.under_out_arc(x)].name});
    m.description = "R3 move " + m.moving + " across crossing " + vs[x].id;
    out.push_back(std::move(m));
  }

  // Creations.
  for (std::size_t e = 0; e < es.size(); ++e)
    for (int side = 0; side < 2; ++side)
      for (int first_under : {1, 0}) {
        Move m;
        m.type = MoveType::r1_plus;
        m.site = {static_cast<int>(e), side, first_under};
        m.moving = arc_name(d, static_cast<int>(e));
        m.passed = {m.moving};
        m.description = "R1+ kink on " + m.moving + " (edge " + std::to_string(e) + ", " +
                        side_name(side) + ", " + (first_under ? "under first" : "over first") +
                        ")";
        out.push_back(std::move(m));
      }
  auto r2 = [&](const Diagram::Side& o, const Diagram::Side& u, int order) {
    Move m;
    m.type = MoveType::r2_plus;
    m.site = {o.edge, o.side, u.edge, u.side, order};
    m.moving = arc_name(d, o.edge);
    m.passed = {arc_name(d, u.edge)};
    m.description = "R2+ push " + m.moving + " over " + m.passed[0] + " (edges " +
                    std::to_string(o.edge) + " " + side_name(o.side) + ", " +
                    std::to_string(u.edge) + " " + side_name(u.side) +
                    (order < 0 ? "" : order == 0 ? ", later over earlier" : ", earlier over later") +
                    ")";
    out.push_back(std::move(m));
  };
  for (const auto& f : d.faces()) {
    for (std::size_t i = 0; i < f.sides.size(); ++i) {
      r2(f.sides[i], f.sides[i], 0);
      r2(f.sides[i], f.sides[i], 1);
      for (std::size_t j = 0; j < f.sides.size(); ++j)
        if (i != j && f.sides[i].edge != f.sides[j].edge) r2(f.sides[i], f.sides[j], -1);
    }
  }
  // Separate pieces may be joined along any of their faces.
  for (std::size_t fa = 0; fa < d.faces().size(); ++fa)
    for (std::size_t fb = 0; fb < d.faces().size(); ++fb) {
      const auto& a = d.faces()[fa];
      const auto& b = d.faces()[fb];
      if (a.piece == b.piece) continue;
      for (const auto& so : a.sides)
        for (const auto& su : b.sides) r2(so, su, -1);
    }
  return out;
}

bool permitted(const LabeledDiagram& ld, const Move& m, Condition c) {
  switch (c) {
    case Condition::unconditional:
      return true;
    case Condition::arc_c1: {
      if (ld.mode != Mode::arc_relation)
        throw ArgumentError("arc_C1 needs a diagram labeled on arcs");
      for (const auto& a : m.passed)
        if (!ld.rel.relate(a, m.moving)) return false;
      for (const auto& [x, y] : m.merges)
        if (!ld.rel.relate(x, y)) return false;
      return true;
    }
    case Condition::component_rel: {
      if (ld.mode != Mode::component_relation)
        throw ArgumentError("component_rel needs a diagram labeled on components");
      const Diagram& d = ld.diagram;
      auto comp = [&](const std::string& arc) {
        return d.components()[d.arcs()[*d.find_arc(arc)].component].name;
      };
      const std::string cc = comp(m.moving);
      for (const auto& a : m.passed)
        if (!ld.rel.relate(comp(a), cc)) return false;
      return true;
    }
  }
  return false;
}

std::vector<Move> enumerate_moves(const LabeledDiagram& d, Condition c) {
  std::vector<Move> out;
  for (auto& m : candidate_moves(d))
    if (permitted(d, m, c)) out.push_back(std::move(m));
  return out;
}

namespace {

struct Tag {
  BoolTerm term;
  std::string witness;
  bool special = false;
};

// Mutable copy of a diagram for surgery. Dead entries are dropped by finish().
struct Work {
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  std::vector<std::vector<Tag>> tags;
  std::vector<char> vdead, edead;
  int next_id = 1;

  explicit Work(const Diagram& d) : vs(d.vertices()), es(d.edges()) {
    for (const auto& ed : es) tags.push_back({Tag{BoolTerm::var(ed.arc), ed.arc, false}});
    vdead.assign(vs.size(), 0);
    edead.assign(es.size(), 0);
    for (const auto& v : vs) {
      try {
        next_id = std::max(next_id, std::stoi(v.id) + 1);
      } catch (const std::exception&) {
      }
    }
  }

  int add_vertex(bool crossing, int sign) {
    Vertex v;
    v.crossing = crossing;
    v.sign = sign;
    if (crossing) {
      std::set<std::string> ids;
      for (const auto& x : vs) ids.insert(x.id);
      while (ids.count(std::to_string(next_id))) ++next_id;
      v.id = std::to_string(next_id++);
    }
    vs.push_back(v);
    vdead.push_back(0);
    return static_cast<int>(vs.size()) - 1;
  }

  int add_edge(int tail, int tp, int head, int hp, const std::string& comp,
               std::vector<Tag> t) {
    Edge ed;
    ed.tail = tail;
    ed.tail_port = tp;
    ed.head = head;
    ed.head_port = hp;
    ed.component = comp;
    es.push_back(ed);
    tags.push_back(std::move(t));
    edead.push_back(0);
    int e = static_cast<int>(es.size()) - 1;
    vs[tail].edge[tp] = e;
    vs[head].edge[hp] = e;
    return e;
  }

  void kill_edge(int e) { edead[e] = 1; }

  // Splits e at a new two-valent point; returns (first half, second half).
  std::pair<int, int> subdivide(int e) {
    Edge old = es[e];
    int p = add_vertex(false, 1);
    int a = add_edge(old.tail, old.tail_port, p, 0, old.component, tags[e]);
    int b = add_edge(p, 1, old.head, old.head_port, old.component, tags[e]);
    kill_edge(e);
    return {a, b};
  }

  // Replaces a crossing by one point per strand pass.
  void split_crossing(int v) {
    Vertex x = vs[v];
    vdead[v] = 1;
    for (int in : {0, Diagram::over_in_port(x.sign)}) {
      int out = (in + 2) % 4;
      int p = add_vertex(false, 1);
      int ein = x.edge[in], eout = x.edge[out];
      es[ein].head = p;
      es[ein].head_port = 0;
      es[eout].tail = p;
      es[eout].tail_port = 1;
      vs[p].edge[0] = ein;
      vs[p].edge[1] = eout;
    }
  }

  // Merges edges through two-valent points until only free loops keep one.
  void normalize() {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t p = 0; p < vs.size(); ++p) {
        if (vdead[p] || vs[p].crossing || vs[p].edge[0] == vs[p].edge[1]) continue;
        int a = vs[p].edge[0], b = vs[p].edge[1];
        es[a].head = es[b].head;
        es[a].head_port = es[b].head_port;
        vs[es[a].head].edge[es[a].head_port] = a;
        for (auto& t : tags[b]) tags[a].push_back(t);
        kill_edge(b);
        vdead[p] = 1;
        changed = true;
      }
    }
  }
};

std::string conjunct_key(const Tag& t) { return t.term.to_string(); }

BoolTerm instantiate(const LabelTemplate& t, const std::map<std::string, std::string>& vars) {
  std::map<std::string, BoolTerm> sub;
  for (const auto& [k, v] : vars) sub[k] = BoolTerm::var(v);
  return t.term.substitute(sub);
}

Tag special(const MoveScheme& s, const std::string& slot,
            const std::map<std::string, std::string>& vars) {
  const auto& t = s.at(slot);
  auto w = vars.find(t.witness);
  return {instantiate(t, vars), w == vars.end() ? t.witness : w->second, true};
}

// Groups live edges into arcs with the same rule the diagram uses.
std::vector<std::vector<int>> arc_groups(const std::vector<Vertex>& vs,
                                         const std::vector<Edge>& es) {
  std::vector<int> next(es.size());
  for (std::size_t e = 0; e < es.size(); ++e) {
    const auto& v = vs[es[e].head];
    next[e] = v.edge[v.crossing ? (es[e].head_port + 2) % 4 : 1];
  }
  auto starts_arc = [&](int e) { return vs[es[e].tail].crossing && es[e].tail_port == 2; };
  std::vector<char> seen(es.size(), 0);
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < es.size(); ++s) {
    if (seen[s] || !starts_arc(static_cast<int>(s))) continue;
    std::vector<int> arc;
    for (int e = static_cast<int>(s);; e = next[e]) {
      seen[e] = 1;
      arc.push_back(e);
      if (vs[es[e].head].crossing && es[e].head_port == 0) break;
    }
    out.push_back(std::move(arc));
  }
  for (std::size_t s = 0; s < es.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> cyc;
    for (int e = static_cast<int>(s); !seen[e]; e = next[e]) {
      seen[e] = 1;
      cyc.push_back(e);
    }
    out.push_back(std::move(cyc));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
  });
  return out;
}

MoveResult finish(Work& w, const LabeledDiagram& src) {
  w.normalize();
  std::vector<int> vmap(w.vs.size(), -1), emap(w.es.size(), -1);
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  std::vector<std::vector<Tag>> tags;
  for (std::size_t v = 0; v < w.vs.size(); ++v)
    if (!w.vdead[v]) {
      vmap[v] = static_cast<int>(vs.size());
      vs.push_back(w.vs[v]);
    }
  for (std::size_t e = 0; e < w.es.size(); ++e)
    if (!w.edead[e]) {
      emap[e] = static_cast<int>(es.size());
      es.push_back(w.es[e]);
      tags.push_back(w.tags[e]);
    }
  for (auto& v : vs)
    for (int p = 0; p < v.degree(); ++p) v.edge[p] = emap[v.edge[p]];
  for (auto& ed : es) {
    ed.tail = vmap[ed.tail];
    ed.head = vmap[ed.head];
  }

  // Labels: template conjuncts win over inherited names.
  auto groups = arc_groups(vs, es);
  MoveResult res;
  std::vector<ArcLabel> labels;
  std::set<std::string> taken;
  std::vector<std::string> names(groups.size());
  for (std::size_t a = 0; a < groups.size(); ++a) {
    std::vector<Tag> specials, olds;
    std::set<std::string> seen;
    for (int e : groups[a])
      for (const auto& t : tags[e]) {
        if (!seen.insert((t.special ? "s:" : "o:") + conjunct_key(t)).second) continue;
        (t.special ? specials : olds).push_back(t);
      }
    const auto& use = specials.empty() ? olds : specials;
    if (use.empty()) throw std::logic_error("move produced an unlabeled arc");
    std::vector<BoolTerm> terms;
    for (const auto& t : use) terms.push_back(t.term);
    ArcLabel l{"", BoolTerm::meet_all(terms), use.front().witness};
    if (l.term.kind() == BoolTerm::Kind::var && taken.insert(l.term.name()).second)
      names[a] = l.term.name();
    labels.push_back(std::move(l));
  }
  std::set<std::string> avoid(taken);
  for (const auto& arc : src.diagram.arcs()) avoid.insert(arc.name);
  for (std::size_t a = 0; a < groups.size(); ++a) {
    if (names[a].empty()) {
      for (int k = 1;; ++k) {
        std::string cand = labels[a].witness + "_" + std::to_string(k);
        if (!avoid.count(cand)) {
          names[a] = cand;
          break;
        }
      }
      avoid.insert(names[a]);
    }
    labels[a].arc = names[a];
    for (int e : groups[a]) es[e].arc = names[a];
  }

  try {
    res.diagram.diagram = Diagram::from_parts(std::move(vs), std::move(es));
  } catch (const ParseError& e) {
    throw std::logic_error(std::string("move produced an invalid diagram: ") + e.what());
  }
  res.diagram.mode = src.mode;
  if (src.mode == Mode::component_relation) {
    res.diagram.rel = src.rel;
  } else {
    // Labels were assigned in group order, which is the diagram's arc order.
    BinaryRelation r(res.diagram.diagram.arc_names());
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = 0; j < labels.size(); ++j)
        r.set(i, j, eval_rel(src.rel, labels[i].term, labels[j].term));
    res.diagram.rel = std::move(r);
  }
  res.labels = std::move(labels);
  return res;
}

void do_r1_plus(Work& w, const Move& m, const MoveScheme& s) {
  int e = m.site[0], side = m.site[1], first_under = m.site[2];
  Edge old = w.es[e];
  // Ports of (incoming piece, outgoing piece, loop tail, loop head) and sign.
  struct Layout {
    int sign, pin, pout, ltail, lhead;
  };
  static const Layout table[2][2] = {
      {{-1, 1, 2, 3, 0}, {1, 0, 1, 2, 3}},   // left: over first, under first
      {{1, 3, 2, 1, 0}, {-1, 0, 3, 2, 1}}};  // right
  const Layout& L = table[side][first_under];
  const std::string a = m.moving;
  int x = w.add_vertex(true, L.sign);
  auto tag = [&] { return std::vector<Tag>{special(s, "R1+.piece", {{"a", a}})}; };
  w.kill_edge(e);
  w.add_edge(old.tail, old.tail_port, x, L.pin, old.component, tag());
  w.add_edge(x, L.pout, old.head, old.head_port, old.component, tag());
  w.add_edge(x, L.ltail, x, L.lhead, old.component, tag());
}

void do_r1_minus(Work& w, const Diagram& d, const Move& m, const MoveScheme& s) {
  int v = m.site[0];
  std::string x = d.arcs()[d.under_in_arc(v)].name, y = d.arcs()[d.under_out_arc(v)].name;
  Tag t = special(s, "R1-.merged", {{"x", x}, {"y", y}});
  for (int p = 0; p < 4; ++p) {
    int e = w.vs[v].edge[p];
    if (w.es[e].tail == v && w.es[e].head == v) w.tags[e].push_back(t);
  }
  w.split_crossing(v);
}

void r2_plus_core(Work& w, int eo, int so, int eu, int su, const std::string& a,
                  const std::string& c, const MoveScheme& s) {
  Edge o = w.es[eo], u = w.es[eu];
  int first_sign = su == 0 ? 1 : -1;
  bool parallel = so != su;
  int xa = w.add_vertex(true, parallel ? first_sign : -first_sign);
  int xb = w.add_vertex(true, parallel ? -first_sign : first_sign);
  int first = parallel ? xa : xb, second = parallel ? xb : xa;
  w.kill_edge(eo);
  w.kill_edge(eu);
  auto outer = [&] { return std::vector<Tag>{special(s, "R2+.outer", {{"a", a}})}; };
  auto over = [&] { return std::vector<Tag>{special(s, "R2+.over", {{"c", c}})}; };
  w.add_edge(u.tail, u.tail_port, xa, 0, u.component, outer());
  w.add_edge(xa, 2, xb, 0, u.component, {special(s, "R2+.middle", {{"a", a}, {"c", c}})});
  w.add_edge(xb, 2, u.head, u.head_port, u.component, outer());
  auto in_port = [&](int x) { return Diagram::over_in_port(w.vs[x].sign); };
  auto out_port = [&](int x) { return Diagram::over_out_port(w.vs[x].sign); };
  w.add_edge(o.tail, o.tail_port, first, in_port(first), o.component, over());
  w.add_edge(first, out_port(first), second, in_port(second), o.component, over());
  w.add_edge(second, out_port(second), o.head, o.head_port, o.component, over());
}

void do_r2_plus(Work& w, const Move& m, const MoveScheme& s) {
  int eo = m.site[0], so = m.site[1], eu = m.site[2], su = m.site[3], order = m.site[4];
  const std::string c = m.moving, a = m.passed.front();
  if (order < 0) {
    r2_plus_core(w, eo, so, eu, su, a, c, s);
    return;
  }
  auto [e1, rest] = w.subdivide(eo);
  auto [e2, e3] = w.subdivide(rest);
  (void)e2;
  if (order == 0) r2_plus_core(w, e3, so, e1, su, a, c, s);
  else r2_plus_core(w, e1, so, e3, su, a, c, s);
}

void do_r2_minus(Work& w, const Diagram& d, const Move& m, const MoveScheme& s) {
  int v1 = m.site[0], v2 = m.site[1];
  const auto& f = d.faces()[m.site[2]];
  auto b = coherent_bigon(d, f);
  std::string u1 = d.arcs()[d.under_in_arc(v1)].name, mid = arc_name(d, b->under),
              u2 = d.arcs()[d.under_out_arc(v2)].name;
  w.tags[b->under].push_back(special(s, "R2-.merged", {{"u1", u1}, {"m", mid}, {"u2", u2}}));
  w.tags[b->over].push_back(special(s, "R2-.over", {{"c", m.moving}}));
  w.split_crossing(v1);
  w.split_crossing(v2);
}

void do_r3(Work& w, const Diagram& d, const Move& m, const MoveScheme& s) {
  auto t = admissible_triangle(d, d.faces()[m.site[0]]);
  const auto& es = d.edges();
  // New ends per edge, applied after all are computed.
  std::map<int, std::pair<int, int>> new_tail, new_head;
  for (int e : {t->top, t->middle, t->bottom}) {
    const Edge& ed = es[e];
    int P = ed.tail, outP = ed.tail_port, inP = (outP + 2) % 4;
    int Q = ed.head, inQ = ed.head_port, outQ = (inQ + 2) % 4;
    int s_in = d.vertices()[P].edge[inP], s_out = d.vertices()[Q].edge[outQ];
    new_head[s_in] = {Q, inQ};
    new_tail[s_out] = {P, outP};
    new_tail[e] = {Q, outQ};
    new_head[e] = {P, inP};
  }
  for (auto& [e, end] : new_tail) std::tie(w.es[e].tail, w.es[e].tail_port) = end;
  for (auto& [e, end] : new_head) std::tie(w.es[e].head, w.es[e].head_port) = end;
  for (int e : {t->top, t->middle, t->bottom}) {
    const Edge& ed = w.es[e];
    w.vs[ed.tail].edge[ed.tail_port] = e;
    w.vs[ed.head].edge[ed.head_port] = e;
  }
  for (auto& [e, end] : new_head) w.vs[end.first].edge[end.second] = e;
  for (auto& [e, end] : new_tail) w.vs[end.first].edge[end.second] = e;

  std::vector<std::string> as = m.passed;
  while (as.size() < 3) as.push_back(as.back());
  w.tags[t->top].clear();
  w.tags[t->middle].clear();
  w.tags[t->bottom] = {special(
      s, "R3.interior", {{"c", m.moving}, {"b", arc_name(d, t->bottom)}, {"a1", as[0]}, {"a2", as[1]}, {"a3", as[2]}})};
}

}  // namespace

MoveResult apply_move_traced(const LabeledDiagram& ld, const Move& m, const MoveScheme& s) {
  auto cands = candidate_moves(ld);
  auto it = std::find(cands.begin(), cands.end(), m);
  if (it == cands.end()) throw PreconditionError("move is not applicable: " + m.description);
  return apply_candidate_traced(ld, *it, s);
}

MoveResult apply_candidate_traced(const LabeledDiagram& ld, const Move& mv, const MoveScheme& s) {
  Work w(ld.diagram);
  switch (mv.type) {
    case MoveType::r1_plus: do_r1_plus(w, mv, s); break;
    case MoveType::r1_minus: do_r1_minus(w, ld.diagram, mv, s); break;
    case MoveType::r2_plus: do_r2_plus(w, mv, s); break;
    case MoveType::r2_minus: do_r2_minus(w, ld.diagram, mv, s); break;
    case MoveType::r3: do_r3(w, ld.diagram, mv, s); break;
  }
  return finish(w, ld);
}

LabeledDiagram apply_move(const LabeledDiagram& d, const Move& m, const MoveScheme& scheme) {
  return apply_move_traced(d, m, scheme).diagram;
}

int crossing_delta(MoveType t) {
  switch (t) {
    case MoveType::r1_plus: return 1;
    case MoveType::r1_minus: return -1;
    case MoveType::r2_plus: return 2;
    case MoveType::r2_minus: return -2;
    case MoveType::r3: return 0;
  }
  return 0;
}

LabeledDiagram apply_candidate(const LabeledDiagram& d, const Move& m, const MoveScheme& scheme) {
  return apply_candidate_traced(d, m, scheme).diagram;
}

}  // namespace relknot
