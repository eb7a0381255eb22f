#include "relknot/coloring.hpp"

#include <algorithm>
#include <numeric>

#include "relknot/errors.hpp"
#include "text_util.hpp"

namespace relknot {

std::string to_string(ColoringType t) { return t == ColoringType::I ? "I" : "II"; }

ColoringType parse_coloring_type(std::string_view s) {
  if (s == "I" || s == "1") return ColoringType::I;
  if (s == "II" || s == "2") return ColoringType::II;
  throw ArgumentError("coloring type must be I or II, got '" + std::string(s) + "'");
}

std::string to_string(Indication i) {
  return i == Indication::consistent ? "consistent" : "obstructed";
}

namespace {

// One constraint over arc indices. `pair`: f(x) R f(y). `product`:
// f(out) = f(in) * f(over). `equal`: f(x) = f(y).
struct Constraint {
  enum class Kind { pair, product, equal } kind;
  std::size_t x = 0, y = 0, z = 0;

  bool holds(const PartialAlgebra& a, const std::vector<std::size_t>& f) const {
    switch (kind) {
      case Kind::pair:
        return a.rel().at(f[x], f[y]);
      case Kind::product: {
        auto p = a.try_apply(f[x], f[y], Op::star);
        return p && *p == f[z];
      }
      case Kind::equal:
        return f[x] == f[y];
    }
    return false;
  }
};

void require_component_mode(const LabeledDiagram& d) {
  if (d.mode != Mode::component_relation)
    throw ArgumentError("colorings need a diagram labeled on components");
}

std::vector<Constraint> constraints(const LabeledDiagram& d, ColoringType type) {
  require_component_mode(d);
  const Diagram& g = d.diagram;
  std::vector<Constraint> out;
  const BinaryRelation arcs = d.arc_relation();
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = 0; j < arcs.size(); ++j)
      if (arcs.at(i, j)) out.push_back({Constraint::Kind::pair, i, j, 0});
  const auto crossings = g.crossings();
  const auto cls = classify_crossings(g, d.rel);
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const std::size_t v = crossings[k];
    const std::size_t in = g.under_in_arc(v), out_arc = g.under_out_arc(v), over = g.over_arc(v);
    if (cls[k] == CrossingClass::good) {
      if (g.vertices()[v].sign > 0)
        out.push_back({Constraint::Kind::product, in, over, out_arc});
      else
        out.push_back({Constraint::Kind::product, out_arc, over, in});
    } else if (type == ColoringType::II) {
      out.push_back({Constraint::Kind::equal, in, out_arc, 0});
    }
  }
  return out;
}

void require_axioms(const PartialAlgebra& a) {
  const auto report = check_axioms(a, AlgebraKind::partial_quandle_rel);
  if (!report.ok())
    throw AxiomError("algebra is not a partial quandle with relation:\n" + report.describe(a));
}

}  // namespace

bool is_coloring(const LabeledDiagram& d, const PartialAlgebra& a,
                 const std::vector<std::size_t>& color, ColoringType type) {
  if (color.size() != d.diagram.arcs().size())
    throw ArgumentError("coloring has " + std::to_string(color.size()) + " colors for " +
                        std::to_string(d.diagram.arcs().size()) + " arcs");
  for (auto c : color)
    if (c >= a.size()) throw ArgumentError("color index out of range");
  for (const auto& c : constraints(d, type))
    if (!c.holds(a, color)) return false;
  return true;
}

std::vector<Coloring> enumerate_colorings(const LabeledDiagram& d, const PartialAlgebra& a,
                                          ColoringType type) {
  const auto cs = constraints(d, type);
  require_axioms(a);
  const Diagram& g = d.diagram;
  const std::size_t n = g.arcs().size();

  // Arcs by component, then arc order; each constraint is tested at the
  // position of its last arc.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return g.arcs()[x].component < g.arcs()[y].component;
  });
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  std::vector<std::vector<const Constraint*>> due(n);
  for (const auto& c : cs) {
    std::size_t last = std::max(pos[c.x], pos[c.y]);
    if (c.kind == Constraint::Kind::product) last = std::max(last, pos[c.z]);
    due[last].push_back(&c);
  }

  std::vector<Coloring> out;
  if (a.size() == 0 && n > 0) return out;
  std::vector<std::size_t> f(n, 0);
  // Iterative depth-first search; level k assigns arc order[k].
  std::size_t k = 0;
  std::vector<std::size_t> next(n + 1, 0);
  if (n == 0) {
    out.push_back({f, type});
    return out;
  }
  while (true) {
    if (next[k] == a.size()) {
      if (k == 0) break;
      next[k] = 0;
      --k;
      continue;
    }
    f[order[k]] = next[k]++;
    bool ok = true;
    for (const auto* c : due[k])
      if (!c->holds(a, f)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (k + 1 == n) {
      out.push_back({f, type});
    } else {
      ++k;
    }
  }
  return out;
}

std::size_t count_colorings(const LabeledDiagram& d, const PartialAlgebra& a, ColoringType type) {
  return enumerate_colorings(d, a, type).size();
}

Coloring parse_coloring(std::string_view text, const LabeledDiagram& d, const PartialAlgebra& a,
                        ColoringType type) {
  const Diagram& g = d.diagram;
  Coloring c;
  c.type = type;
  std::vector<bool> seen(g.arcs().size(), false);
  c.color.assign(g.arcs().size(), 0);
  for (const auto& line : detail::content_lines(text)) {
    auto eq = line.text.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'arc = element'", line.number);
    auto lhs = detail::split_ws(std::string_view(line.text).substr(0, eq));
    auto rhs = detail::split_ws(std::string_view(line.text).substr(eq + 1));
    if (lhs.size() != 1 || rhs.size() != 1)
      throw ParseError("expected 'arc = element'", line.number);
    auto arc = g.find_arc(lhs[0]);
    if (!arc) throw NameError("line " + std::to_string(line.number) + ": unknown arc '" + lhs[0] + "'");
    auto el = a.rel().find(rhs[0]);
    if (!el)
      throw NameError("line " + std::to_string(line.number) + ": unknown element '" + rhs[0] + "'");
    if (seen[*arc]) throw ParseError("arc '" + lhs[0] + "' colored twice", line.number);
    seen[*arc] = true;
    c.color[*arc] = *el;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ParseError("arc '" + g.arcs()[i].name + "' has no color");
  return c;
}

std::string format_coloring(const Coloring& c, const LabeledDiagram& d, const PartialAlgebra& a) {
  std::string out;
  for (std::size_t i = 0; i < c.color.size(); ++i)
    out += d.diagram.arcs()[i].name + " = " + a.name(c.color[i]) + "\n";
  return out;
}

std::vector<std::pair<std::string, Chain>> cycle_from_coloring(const LabeledDiagram& d,
                                                               const PartialAlgebra& a,
                                                               const Coloring& c,
                                                               const ChainComplex& cx) {
  if (c.type != ColoringType::II) throw ArgumentError("cycles need a type II coloring");
  if (!is_coloring(d, a, c.color, ColoringType::II))
    throw ArgumentError("not a type II coloring of this diagram");
  if (cx.max_degree() < 2) throw ArgumentError("complex must reach degree 2");
  const Diagram& g = d.diagram;
  std::vector<std::pair<std::string, Chain>> out;
  for (const auto& comp : g.components()) out.push_back({comp.name, Chain{2, {}}});
  const auto crossings = g.crossings();
  const auto cls = classify_crossings(g, d.rel);
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    if (cls[k] != CrossingClass::good) continue;
    const std::size_t v = crossings[k];
    const int sign = g.vertices()[v].sign;
    const std::size_t x = c.color[sign > 0 ? g.under_in_arc(v) : g.under_out_arc(v)];
    const std::size_t y = c.color[g.over_arc(v)];
    const std::size_t comp = g.arcs()[g.under_in_arc(v)].component;
    out[comp].second.add(Tuple{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)},
                         BigInt(sign));
  }
  for (auto& [name, z] : out) {
    z = cx.project(z);
    if (!boundary(cx, z).is_zero())
      throw Error("internal: chain of component " + name + " is not a cycle");
  }
  return out;
}

Indication coloring_indicator(const LabeledDiagram& d1, const LabeledDiagram& d2,
                              const PartialAlgebra& a, ColoringType type) {
  require_component_mode(d1);
  require_component_mode(d2);
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(d1.diagram.component_names()) != sorted(d2.diagram.component_names()))
    throw ArgumentError("diagrams have different components");
  for (const auto& x : d1.rel.elements())
    for (const auto& y : d1.rel.elements())
      if (d1.rel.relate(x, y) != d2.rel.relate(x, y))
        throw ArgumentError("diagrams carry different component relations");
  return count_colorings(d1, a, type) == count_colorings(d2, a, type) ? Indication::consistent
                                                                       : Indication::obstructed;
}

}  // namespace relknot
