#include "relknot/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "relknot/errors.hpp"
#include "text_util.hpp"

namespace relknot {

namespace {

bool is_out_port(const Diagram::Vertex& v, int p) {
  if (!v.crossing) return p == 1;
  return p == 2 || p == Diagram::over_out_port(v.sign);
}

int strand_out_port(const Diagram::Vertex& v, int in_port) {
  return v.crossing ? (in_port + 2) % 4 : 1;
}

int next_edge(const std::vector<Diagram::Vertex>& vs, const std::vector<Diagram::Edge>& es,
              int e) {
  const auto& ed = es[e];
  const auto& v = vs[ed.head];
  return v.edge[strand_out_port(v, ed.head_port)];
}

// Strand cycles in order of least edge index.
std::vector<std::vector<int>> strand_cycles(const std::vector<Diagram::Vertex>& vs,
                                            const std::vector<Diagram::Edge>& es) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(es.size(), 0);
  for (std::size_t s = 0; s < es.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> cyc;
    int e = static_cast<int>(s);
    while (!seen[e]) {
      seen[e] = 1;
      cyc.push_back(e);
      e = next_edge(vs, es, e);
    }
    if (e != static_cast<int>(s)) throw ParseError("strand following is not a permutation");
    out.push_back(std::move(cyc));
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

Diagram Diagram::from_parts(std::vector<Vertex> vertices, std::vector<Edge> edges) {
  Diagram d;
  const int nv = static_cast<int>(vertices.size());
  const int ne = static_cast<int>(edges.size());
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = edges[e];
    for (auto [v, p] : {std::pair{ed.tail, ed.tail_port}, std::pair{ed.head, ed.head_port}}) {
      if (v < 0 || v >= nv || p < 0 || p >= vertices[v].degree() || vertices[v].edge[p] != e)
        throw ParseError("edge '" + ed.arc + "' is attached to an inconsistent port");
    }
    if (!is_out_port(vertices[ed.tail], ed.tail_port))
      throw ParseError("edge '" + ed.arc + "' leaves through an incoming port");
    if (is_out_port(vertices[ed.head], ed.head_port))
      throw ParseError("edge '" + ed.arc + "' enters through an outgoing port");
  }
  for (int v = 0; v < nv; ++v) {
    const Vertex& vx = vertices[v];
    if (vx.crossing && vx.sign != 1 && vx.sign != -1)
      throw ParseError("crossing '" + vx.id + "' has no sign");
    for (int p = 0; p < vx.degree(); ++p) {
      int e = vx.edge[p];
      if (e < 0 || e >= ne) throw ParseError("crossing '" + vx.id + "' has a dangling port");
      const Edge& ed = edges[e];
      if (!((ed.tail == v && ed.tail_port == p) || (ed.head == v && ed.head_port == p)))
        throw ParseError("port pairing mismatch at '" + vx.id + "'");
    }
    if (!vx.crossing && vx.edge[0] != vx.edge[1])
      throw ParseError("two-valent vertex outside a free loop");
  }

  d.vertices_ = std::move(vertices);
  d.edges_ = std::move(edges);
  const auto& vs = d.vertices_;
  const auto& es = d.edges_;
  d.crossing_count_ = static_cast<std::size_t>(
      std::count_if(vs.begin(), vs.end(), [](const Vertex& v) { return v.crossing; }));

  // Components.
  d.component_of_edge_.assign(ne, 0);
  std::set<std::string> comp_names;
  for (auto& cyc : strand_cycles(vs, es)) {
    const std::string& name = es[cyc.front()].component;
    if (name.empty()) throw ParseError("component without a name");
    for (int e : cyc)
      if (es[e].component != name)
        throw ParseError("component names '" + name + "' and '" + es[e].component +
                         "' label one strand");
    if (!comp_names.insert(name).second)
      throw ParseError("component name '" + name + "' used twice");
    for (int e : cyc) d.component_of_edge_[e] = d.components_.size();
    d.components_.push_back({name, std::move(cyc)});
  }

  // Arcs: runs from an under-outgoing port to the next under-incoming port.
  for (std::size_t c = 0; c < d.components_.size(); ++c) {
    const auto& cyc = d.components_[c].edges;
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const Edge& ed = es[cyc[i]];
      if (vs[ed.tail].crossing && ed.tail_port == 2) starts.push_back(i);
    }
    if (starts.empty()) {
      d.arcs_.push_back({"", cyc, c});
      continue;
    }
    for (std::size_t s : starts) {
      Arc arc{"", {}, c};
      for (std::size_t i = s;; i = (i + 1) % cyc.size()) {
        arc.edges.push_back(cyc[i]);
        const Edge& ed = es[cyc[i]];
        if (vs[ed.head].crossing && ed.head_port == 0) break;
      }
      d.arcs_.push_back(std::move(arc));
    }
  }
  std::sort(d.arcs_.begin(), d.arcs_.end(), [](const Arc& a, const Arc& b) {
    return *std::min_element(a.edges.begin(), a.edges.end()) <
           *std::min_element(b.edges.begin(), b.edges.end());
  });
  d.arc_of_edge_.assign(ne, 0);
  std::set<std::string> arc_names;
  for (std::size_t a = 0; a < d.arcs_.size(); ++a) {
    Arc& arc = d.arcs_[a];
    arc.name = es[arc.edges.front()].arc;
    if (arc.name.empty()) throw ParseError("arc without a name");
    if (arc.name.find('/') != std::string::npos)
      throw ParseError("arc name '" + arc.name + "' contains '/'");
    for (int e : arc.edges) {
      if (es[e].arc != arc.name)
        throw ParseError("edges named '" + arc.name + "' and '" + es[e].arc +
                         "' belong to one arc");
      d.arc_of_edge_[e] = a;
    }
    if (!arc_names.insert(arc.name).second)
      throw ParseError("arc name '" + arc.name + "' names two different arcs");
  }

  // Faces: a dart arriving at port p continues from port p - 1 (clockwise).
  d.face_of_side_.assign(2 * static_cast<std::size_t>(ne), SIZE_MAX);
  for (int start = 0; start < 2 * ne; ++start) {
    if (d.face_of_side_[start] != SIZE_MAX) continue;
    Face f;
    int dart = start;
    do {
      d.face_of_side_[dart] = d.faces_.size();
      int e = dart / 2, dir = dart % 2;
      f.sides.push_back({e, dir});
      const Edge& ed = es[e];
      int v = dir == 0 ? ed.head : ed.tail;
      int p = dir == 0 ? ed.head_port : ed.tail_port;
      int q = (p - 1 + vs[v].degree()) % vs[v].degree();
      int g = vs[v].edge[q];
      dart = 2 * g + ((es[g].tail == v && es[g].tail_port == q) ? 0 : 1);
    } while (dart != start);
    d.faces_.push_back(std::move(f));
  }

  // Pieces and the Euler check.
  UnionFind uf(nv);
  for (const Edge& ed : es) uf.unite(ed.tail, ed.head);
  std::map<std::size_t, std::size_t> root_index;
  d.piece_of_vertex_.assign(nv, 0);
  for (int v = 0; v < nv; ++v) {
    auto [it, fresh] = root_index.emplace(uf.find(v), root_index.size());
    d.piece_of_vertex_[v] = it->second;
  }
  d.piece_count_ = root_index.size();
  std::vector<long> euler(d.piece_count_, 0);
  for (int v = 0; v < nv; ++v) ++euler[d.piece_of_vertex_[v]];
  for (const Edge& ed : es) --euler[d.piece_of_vertex_[ed.tail]];
  for (Face& f : d.faces_) {
    f.piece = d.piece_of_vertex_[es[f.sides.front().edge].tail];
    ++euler[f.piece];
  }
  for (std::size_t p = 0; p < d.piece_count_; ++p)
    if (euler[p] != 2)
      throw ParseError("shadow is not planar (V - E + F = " + std::to_string(euler[p]) +
                       " on a connected piece)");
  return d;
}

std::optional<std::size_t> Diagram::find_arc(std::string_view name) const {
  for (std::size_t a = 0; a < arcs_.size(); ++a)
    if (arcs_[a].name == name) return a;
  return std::nullopt;
}

std::optional<std::size_t> Diagram::find_component(std::string_view name) const {
  for (std::size_t c = 0; c < components_.size(); ++c)
    if (components_[c].name == name) return c;
  return std::nullopt;
}

std::vector<std::string> Diagram::arc_names() const {
  std::vector<std::string> out;
  for (const Arc& a : arcs_) out.push_back(a.name);
  return out;
}

std::vector<std::string> Diagram::component_names() const {
  std::vector<std::string> out;
  for (const Component& c : components_) out.push_back(c.name);
  return out;
}

std::vector<std::size_t> Diagram::crossings() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].crossing) out.push_back(v);
  return out;
}

std::size_t Diagram::under_in_arc(std::size_t v) const {
  return arc_of_edge_[vertices_[v].edge[0]];
}
std::size_t Diagram::under_out_arc(std::size_t v) const {
  return arc_of_edge_[vertices_[v].edge[2]];
}
std::size_t Diagram::over_arc(std::size_t v) const {
  return arc_of_edge_[vertices_[v].edge[over_in_port(vertices_[v].sign)]];
}

std::string to_string(Mode m) {
  return m == Mode::arc_relation ? "arcs" : "components";
}

void LabeledDiagram::validate() const {
  std::vector<std::string> want =
      mode == Mode::arc_relation ? diagram.arc_names() : diagram.component_names();
  std::vector<std::string> have = rel.elements();
  std::sort(want.begin(), want.end());
  std::sort(have.begin(), have.end());
  if (want != have)
    throw NameError(std::string("relation elements do not match the diagram's ") +
                    (mode == Mode::arc_relation ? "arc" : "component") + " names");
}

BinaryRelation LabeledDiagram::arc_relation() const {
  if (mode == Mode::component_relation) return induce_arc_relation(diagram, rel);
  std::vector<std::size_t> keep;
  for (const auto& a : diagram.arcs()) keep.push_back(rel.index_of(a.name));
  return rel.restricted(keep);
}

BinaryRelation induce_arc_relation(const Diagram& d, const BinaryRelation& components) {
  std::vector<std::string> want = d.component_names(), have = components.elements();
  std::sort(want.begin(), want.end());
  std::sort(have.begin(), have.end());
  if (want != have) throw NameError("relation elements do not match the component names");
  const auto& arcs = d.arcs();
  std::vector<std::size_t> comp_index;
  for (const auto& a : arcs) comp_index.push_back(components.index_of(d.components()[a.component].name));
  BinaryRelation out(d.arc_names());
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = 0; j < arcs.size(); ++j)
      out.set(i, j, components.at(comp_index[i], comp_index[j]));
  return out;
}

std::vector<CrossingClass> classify_crossings(const Diagram& d,
                                              const BinaryRelation& components) {
  std::vector<CrossingClass> out;
  for (std::size_t v : d.crossings()) {
    const auto& under = d.components()[d.arcs()[d.under_in_arc(v)].component].name;
    const auto& over = d.components()[d.arcs()[d.over_arc(v)].component].name;
    out.push_back(components.relate(under, over) ? CrossingClass::good : CrossingClass::bad);
  }
  return out;
}

namespace {

std::string arc_prefix(const std::string& token) { return token.substr(0, token.find('/')); }

}  // namespace

LabeledDiagram parse_diagram(std::string_view text) {
  auto lines = detail::content_lines(text);
  std::size_t split = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].tokens.size() == 1 && lines[i].tokens[0] == "%") {
      split = i;
      break;
    }

  std::vector<Diagram::Vertex> vs;
  std::vector<Diagram::Edge> es;
  std::map<std::string, int> edge_index;
  struct End {
    int v = -1, p = -1, line = 0;
  };
  std::vector<End> outs, ins;
  std::vector<std::string> comp_tokens;
  int comp_line = 0;
  std::vector<std::string> loop_names;
  std::set<std::string> ids;

  auto edge_of = [&](const std::string& tok, int line) {
    if (tok.empty() || tok.front() == '/' || tok.back() == '/')
      throw ParseError("malformed edge token '" + tok + "'", line);
    auto [it, fresh] = edge_index.emplace(tok, static_cast<int>(es.size()));
    if (fresh) {
      es.push_back({});
      es.back().arc = arc_prefix(tok);
      outs.emplace_back();
      ins.emplace_back();
    }
    return it->second;
  };
  auto attach = [&](const std::string& tok, int v, int p, bool out, int line) {
    int e = edge_of(tok, line);
    End& end = out ? outs[e] : ins[e];
    if (end.v >= 0)
      throw ParseError("edge '" + tok + "' used twice as " + (out ? "outgoing" : "incoming"),
                       line);
    end = {v, p, line};
    vs[v].edge[p] = e;
  };

  for (std::size_t i = 0; i < split; ++i) {
    const auto& ln = lines[i];
    const std::string& head = ln.tokens[0];
    if (head == "components:") {
      comp_tokens.assign(ln.tokens.begin() + 1, ln.tokens.end());
      comp_line = ln.number;
    } else if (head == "loops:") {
      if (ln.tokens.size() == 2 && std::all_of(ln.tokens[1].begin(), ln.tokens[1].end(),
                                               [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        int k = std::stoi(ln.tokens[1]);
        for (int j = 1; j <= k; ++j) loop_names.push_back("o" + std::to_string(j));
      } else {
        loop_names.insert(loop_names.end(), ln.tokens.begin() + 1, ln.tokens.end());
      }
    } else if (head == "X") {
      if (ln.tokens.size() < 2) throw ParseError("crossing line without an id", ln.number);
      Diagram::Vertex vx;
      vx.id = ln.tokens[1];
      if (!ids.insert(vx.id).second)
        throw ParseError("crossing id '" + vx.id + "' used twice", ln.number);
      std::map<std::string, std::string> kv;
      for (std::size_t t = 2; t < ln.tokens.size(); ++t) {
        const auto& tok = ln.tokens[t];
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'", ln.number);
        std::string key = tok.substr(0, eq);
        if (key != "under_in" && key != "under_out" && key != "over_in" && key != "over_out" &&
            key != "sign")
          throw ParseError("unknown crossing field '" + key + "'", ln.number);
        if (!kv.emplace(key, tok.substr(eq + 1)).second)
          throw ParseError("field '" + key + "' repeated", ln.number);
      }
      for (const char* key : {"under_in", "under_out", "over_in", "over_out", "sign"})
        if (!kv.count(key))
          throw ParseError("crossing '" + vx.id + "' lacks " + key, ln.number);
      const std::string& s = kv["sign"];
      if (s == "+" || s == "+1") vx.sign = 1;
      else if (s == "-" || s == "-1") vx.sign = -1;
      else throw ParseError("sign must be + or -", ln.number);
      int v = static_cast<int>(vs.size());
      vs.push_back(vx);
      attach(kv["under_in"], v, 0, false, ln.number);
      attach(kv["under_out"], v, 2, true, ln.number);
      attach(kv["over_in"], v, Diagram::over_in_port(vx.sign), false, ln.number);
      attach(kv["over_out"], v, Diagram::over_out_port(vx.sign), true, ln.number);
    } else {
      throw ParseError("unexpected line '" + ln.text + "'", ln.number);
    }
  }

  for (const auto& [tok, e] : edge_index) {
    if (outs[e].v < 0)
      throw ParseError("edge '" + tok + "' is never outgoing (dangling port)", ins[e].line);
    if (ins[e].v < 0)
      throw ParseError("edge '" + tok + "' is never incoming (dangling port)", outs[e].line);
    es[e].tail = outs[e].v;
    es[e].tail_port = outs[e].p;
    es[e].head = ins[e].v;
    es[e].head_port = ins[e].p;
  }
  for (const auto& name : loop_names) {
    if (edge_index.count(name)) throw ParseError("loop name '" + name + "' is already an edge");
    int v = static_cast<int>(vs.size());
    int e = static_cast<int>(es.size());
    Diagram::Vertex pt;
    pt.crossing = false;
    pt.id = name;
    pt.edge = {e, e, -1, -1};
    vs.push_back(pt);
    Diagram::Edge ed;
    ed.tail = v;
    ed.tail_port = 1;
    ed.head = v;
    ed.head_port = 0;
    ed.arc = name;
    edge_index.emplace(name, e);
    es.push_back(ed);
  }

  // Name components: bindings first, then bare names in discovery order.
  auto cycles = strand_cycles(vs, es);
  std::vector<std::string> names(cycles.size());
  std::vector<std::string> bare;
  for (const auto& tok : comp_tokens) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) {
      bare.push_back(tok);
      continue;
    }
    std::string name = tok.substr(0, colon), target = tok.substr(colon + 1);
    std::optional<std::size_t> found;
    for (std::size_t c = 0; c < cycles.size() && !found; ++c)
      for (int e : cycles[c])
        if (es[e].arc == target || (edge_index.count(target) && edge_index[target] == e)) {
          found = c;
          break;
        }
    if (!found) throw ParseError("component binding '" + tok + "' names no arc", comp_line);
    if (!names[*found].empty())
      throw ParseError("component of '" + target + "' bound twice", comp_line);
    names[*found] = name;
  }
  std::size_t next_bare = 0;
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    if (!names[c].empty()) continue;
    if (comp_tokens.empty()) names[c] = "C" + std::to_string(c + 1);
    else if (next_bare < bare.size()) names[c] = bare[next_bare++];
    else throw ParseError("fewer component names than components", comp_line);
  }
  if (next_bare < bare.size()) throw ParseError("more component names than components", comp_line);
  for (std::size_t c = 0; c < cycles.size(); ++c)
    for (int e : cycles[c]) es[e].component = names[c];

  LabeledDiagram out;
  out.diagram = Diagram::from_parts(std::move(vs), std::move(es));
  if (split == lines.size()) {
    out.rel = BinaryRelation::full(out.diagram.arc_names());
    return out;
  }
  if (split + 1 >= lines.size() || lines[split + 1].tokens.size() != 2 ||
      lines[split + 1].tokens[0] != "on:")
    throw ParseError("relation section must start with 'on: arcs' or 'on: components'",
                     split + 1 < lines.size() ? lines[split + 1].number : lines[split].number);
  const auto& on = lines[split + 1].tokens[1];
  if (on == "arcs") out.mode = Mode::arc_relation;
  else if (on == "components") out.mode = Mode::component_relation;
  else throw ParseError("unknown relation target '" + on + "'", lines[split + 1].number);
  out.rel = detail::parse_relation_lines(lines, split + 2, lines.size());
  try {
    out.validate();
  } catch (const NameError& e) {
    throw ParseError(e.what(), lines[split + 2].number);
  }
  return out;
}

LabeledDiagram read_diagram_file(const std::string& path) {
  try {
    return parse_diagram(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_diagram(const LabeledDiagram& ld) {
  const Diagram& d = ld.diagram;
  std::vector<std::string> token(d.edges().size());
  for (const auto& arc : d.arcs())
    for (std::size_t k = 0; k < arc.edges.size(); ++k)
      token[arc.edges[k]] = arc.edges.size() == 1 ? arc.name : arc.name + "/" + std::to_string(k + 1);
  std::ostringstream out;
  out << "components:";
  for (const auto& c : d.components()) out << ' ' << c.name << ':' << d.edges()[c.edges.front()].arc;
  out << '\n';
  if (d.free_loop_count() > 0) {
    out << "loops:";
    for (const auto& v : d.vertices())
      if (!v.crossing) out << ' ' << d.edges()[v.edge[0]].arc;
    out << '\n';
  }
  for (const auto& v : d.vertices()) {
    if (!v.crossing) continue;
    out << "X " << v.id << " under_in=" << token[v.edge[0]] << " under_out=" << token[v.edge[2]]
        << " over_in=" << token[v.edge[Diagram::over_in_port(v.sign)]]
        << " over_out=" << token[v.edge[Diagram::over_out_port(v.sign)]]
        << " sign=" << (v.sign > 0 ? '+' : '-') << '\n';
  }
  out << "%\n" << "on: " << to_string(ld.mode) << '\n' << format_relation(ld.rel);
  return out.str();
}

namespace {

struct Traversal {
  std::vector<int> code;
  std::vector<int> edge_order;
};

// Breadth-first labeling from one vertex. Port numbering is intrinsic, so the
// start vertex fixes every label in its piece.
Traversal traverse(const Diagram& d, int start) {
  const auto& vs = d.vertices();
  const auto& es = d.edges();
  std::vector<int> vlabel(vs.size(), -1), elabel(es.size(), -1);
  std::vector<int> vorder{start};
  Traversal t;
  vlabel[start] = 0;
  for (std::size_t qi = 0; qi < vorder.size(); ++qi) {
    const auto& vx = vs[vorder[qi]];
    for (int p = 0; p < vx.degree(); ++p) {
      int e = vx.edge[p];
      if (elabel[e] < 0) {
        elabel[e] = static_cast<int>(t.edge_order.size());
        t.edge_order.push_back(e);
      }
      for (int w : {es[e].tail, es[e].head})
        if (vlabel[w] < 0) {
          vlabel[w] = static_cast<int>(vorder.size());
          vorder.push_back(w);
        }
    }
  }
  for (int v : vorder) {
    const auto& vx = vs[v];
    t.code.push_back(vx.crossing ? vx.sign : 0);
    for (int p = 0; p < vx.degree(); ++p) t.code.push_back(elabel[vx.edge[p]]);
  }
  for (int e : t.edge_order) {
    const auto& ed = es[e];
    t.code.insert(t.code.end(), {vlabel[ed.tail], ed.tail_port, vlabel[ed.head], ed.head_port});
  }
  return t;
}

struct PieceForms {
  std::vector<int> code;
  std::vector<std::vector<int>> edge_orders;  // one per optimal start
};

std::vector<PieceForms> piece_forms(const Diagram& d) {
  std::vector<PieceForms> out(d.piece_count());
  std::vector<char> done(d.piece_count(), 0);
  for (std::size_t v = 0; v < d.vertices().size(); ++v) {
    auto& pf = out[d.piece_of_vertex(v)];
    Traversal t = traverse(d, static_cast<int>(v));
    if (!done[d.piece_of_vertex(v)] || t.code < pf.code) {
      done[d.piece_of_vertex(v)] = 1;
      pf.code = std::move(t.code);
      pf.edge_orders = {std::move(t.edge_order)};
    } else if (t.code == pf.code) {
      pf.edge_orders.push_back(std::move(t.edge_order));
    }
  }
  return out;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string s;
  for (int x : xs) {
    s += std::to_string(x);
    s += ',';
  }
  return s;
}

constexpr std::size_t kMaxCanonicalCombos = 1'000'000;

}  // namespace

std::string shadow_key(const Diagram& d) {
  auto forms = piece_forms(d);
  std::vector<std::string> codes;
  for (const auto& f : forms) codes.push_back(join_ints(f.code));
  std::sort(codes.begin(), codes.end());
  std::string key;
  for (const auto& c : codes) key += "[" + c + "]";
  return key;
}

std::string canonical_key(const LabeledDiagram& ld) {
  const Diagram& d = ld.diagram;
  auto forms = piece_forms(d);
  std::vector<std::size_t> order(forms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return forms[a].code < forms[b].code; });
  std::string key = to_string(ld.mode) + ":";
  for (std::size_t p : order) key += "[" + join_ints(forms[p].code) + "]";

  const BinaryRelation arc_rel = ld.arc_relation();
  std::string fixed;  // order independent part of the decoration
  if (ld.mode == Mode::component_relation) {
    auto names = d.component_names();
    std::sort(names.begin(), names.end());
    for (const auto& n : names) fixed += n + ";";
    for (const auto& a : names)
      for (const auto& b : names) fixed += ld.rel.relate(a, b) ? '1' : '0';
  }

  // Slots in sorted order; pieces with equal codes may be permuted.
  std::vector<std::size_t> rank(d.edges().size());
  std::vector<char> used(forms.size(), 0);
  std::vector<const std::vector<int>*> chosen(order.size());
  std::optional<std::string> best;
  std::size_t combos = 0;
  auto decorate = [&]() {
    std::size_t r = 0;
    for (const auto* eo : chosen)
      for (int e : *eo) rank[e] = r++;
    std::vector<std::size_t> arcs(d.arcs().size());
    std::vector<std::size_t> first(d.arcs().size(), SIZE_MAX);
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      arcs[a] = a;
      for (int e : d.arcs()[a].edges) first[a] = std::min(first[a], rank[e]);
    }
    std::sort(arcs.begin(), arcs.end(), [&](auto x, auto y) { return first[x] < first[y]; });
    std::string s;
    if (ld.mode == Mode::component_relation) {
      for (auto a : arcs) s += d.components()[d.arcs()[a].component].name + ";";
    } else {
      for (auto a : arcs)
        for (auto b : arcs) s += arc_rel.at(a, b) ? '1' : '0';
    }
    if (!best || s < *best) best = std::move(s);
  };
  auto rec = [&](auto&& self, std::size_t slot) -> void {
    if (slot == order.size()) {
      if (++combos > kMaxCanonicalCombos)
        throw CapacityError("canonical form needs too many symmetric relabelings");
      decorate();
      return;
    }
    const auto& code = forms[order[slot]].code;
    for (std::size_t p = 0; p < forms.size(); ++p) {
      if (used[p] || forms[p].code != code) continue;
      used[p] = 1;
      for (const auto& eo : forms[p].edge_orders) {
        chosen[slot] = &eo;
        self(self, slot + 1);
      }
      used[p] = 0;
    }
  };
  rec(rec, 0);
  return key + "|" + (best ? *best : "") + "|" + fixed;
}

}  // namespace relknot
