#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "relknot/algebra.hpp"
#include "relknot/boolterm.hpp"
#include "relknot/chain.hpp"
#include "relknot/coloring.hpp"
#include "relknot/errors.hpp"
#include "relknot/moves.hpp"
#include "relknot/reach.hpp"
#include "relknot/relation.hpp"

using namespace relknot;

namespace {

constexpr const char* kVersion = "0.1.0";

bool porcelain = false;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string move_spec(const Move& m) {
  std::string out = to_string(m.type);
  for (int x : m.site) out += " " + std::to_string(x);
  return out;
}

Move parse_move_spec(const std::string& text) {
  std::istringstream in(text);
  std::string type;
  in >> type;
  Move m;
  if (type == "R1+")
    m.type = MoveType::r1_plus;
  else if (type == "R1-")
    m.type = MoveType::r1_minus;
  else if (type == "R2+")
    m.type = MoveType::r2_plus;
  else if (type == "R2-")
    m.type = MoveType::r2_minus;
  else if (type == "R3")
    m.type = MoveType::r3;
  else
    throw ArgumentError("move must start with R1+, R1-, R2+, R2- or R3, got '" + type + "'");
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      m.site.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw ArgumentError("bad site index '" + tok + "' in move '" + text + "'");
    }
  }
  return m;
}

// --- relation and term commands -------------------------------------------

int cmd_relate_terms(const std::string& file, const std::string& q, const std::string& p) {
  const auto r = read_relation_file(file);
  const bool v = eval_rel(r, parse_term(q), parse_term(p));
  std::cout << (v ? 1 : 0) << "\n";
  return v ? 0 : 1;
}

int cmd_closure(const std::string& file, const std::string& kind) {
  const auto r = read_relation_file(file);
  ClosureKind k;
  if (kind == "symmetric")
    k = ClosureKind::symmetric;
  else if (kind == "semi_transitive")
    k = ClosureKind::semi_transitive;
  else if (kind == "st")
    k = ClosureKind::st;
  else
    throw ArgumentError("closure kind must be symmetric, semi_transitive or st");
  const auto c = closure(r, k);
  if (!porcelain) std::cout << "# " << kind << " closure, " << c.pair_count() << " pairs\n";
  std::cout << format_relation(c);
  return 0;
}

// --- algebra and homology ---------------------------------------------------

int cmd_check_axioms(const std::string& file, const std::string& kind) {
  const auto a = read_algebra_file(file);
  const AlgebraKind k = kind.empty() ? a.kind() : parse_algebra_kind(kind);
  const auto report = check_axioms(a, k);
  if (porcelain) {
    for (const auto& v : report.violations) {
      std::cout << v.axiom;
      for (auto e : v.elements) std::cout << " " << a.name(e);
      std::cout << "\n";
    }
    if (report.ok()) std::cout << "ok\n";
  } else if (report.ok()) {
    std::cout << to_string(k) << ": all axioms hold\n";
  } else {
    std::cout << to_string(k) << ": " << report.violations.size() << " violation(s)\n"
              << report.describe(a);
  }
  return report.ok() ? 0 : 1;
}

ChainComplex build_complex(const std::string& file, const std::string& theory, int defect_k,
                           int max_degree) {
  const Theory t = parse_theory(theory);
  if (ends_with(file, ".rel")) {
    if (t != Theory::rel_defect)
      throw ArgumentError("a .rel file only supports --theory rel");
    return ChainComplex::for_relation(read_relation_file(file), defect_k, max_degree);
  }
  const auto a = read_algebra_file(file);
  if (t == Theory::rel_defect) return ChainComplex::for_relation(a.rel(), defect_k, max_degree);
  return ChainComplex::for_algebra(a, t, max_degree, defect_k);
}

int cmd_homology(const std::string& file, const std::string& theory, int defect_k, int max_degree,
                 int min_degree) {
  if (max_degree < 1) throw ArgumentError("--max-degree must be at least 1");
  if (min_degree < 0 || min_degree >= max_degree)
    throw ArgumentError("--min-degree must lie in [0, max-degree)");
  const auto cx = build_complex(file, theory, defect_k, max_degree);
  const auto groups = homology_range(cx, min_degree, max_degree - 1);
  for (int n = min_degree; n < max_degree; ++n) {
    const auto& g = groups[static_cast<std::size_t>(n - min_degree)];
    if (porcelain) {
      std::cout << n << " " << g.free_rank;
      for (const auto& d : g.invariant_factors) std::cout << " " << d;
      std::cout << "\n";
    } else {
      std::cout << "H_" << n << " = " << to_string(g) << "\n";
    }
  }
  return 0;
}

std::string order_text(const BigInt& order) {
  if (order == 0) return "free";
  if (order == 1) return "boundary";
  return "order " + order.str();
}

int cmd_boundary(const std::string& file, const std::string& theory, int defect_k,
                 const std::string& chain_text, bool express) {
  // Element names come from the file; the degree from the chain itself.
  std::vector<std::string> elements = ends_with(file, ".rel")
                                          ? read_relation_file(file).elements()
                                          : read_algebra_file(file).elements();
  const Chain c0 = parse_chain(chain_text, elements);
  if (c0.degree < 1) throw ArgumentError("chain must have degree at least 1");
  const auto cx = build_complex(file, theory, defect_k, c0.degree + 1);
  const Chain c = cx.project(c0);
  const Chain d = boundary(cx, c);
  if (!express) {
    std::cout << (porcelain ? "" : "boundary: ") << format_chain(d, elements) << "\n";
    return 0;
  }
  if (!d.is_zero()) {
    std::cout << (porcelain ? "not_a_cycle " : "not a cycle, boundary: ") << format_chain(d, elements)
              << "\n";
    return 1;
  }
  const auto cert = express_as_boundary(cx, c);
  if (porcelain) {
    std::cout << (cert.is_boundary ? "boundary" : "not_boundary") << " " << cert.order;
    if (cert.witness) std::cout << " " << format_chain(*cert.witness, elements);
    std::cout << "\n";
  } else if (cert.is_boundary) {
    std::cout << "boundary of: " << format_chain(*cert.witness, elements) << "\n";
  } else {
    std::cout << "not a boundary; " << order_text(cert.order) << " in homology\n";
  }
  return cert.is_boundary ? 0 : 1;
}

// --- colorings ----------------------------------------------------------------

std::string coloring_line(const Coloring& c, const LabeledDiagram& d, const PartialAlgebra& a) {
  std::string out;
  for (std::size_t i = 0; i < c.color.size(); ++i) {
    if (i) out += " ";
    out += d.diagram.arcs()[i].name + "=" + a.name(c.color[i]);
  }
  return out;
}

int cmd_color(const std::string& type_text, const std::string& dfile, const std::string& afile,
              bool list) {
  const auto type = parse_coloring_type(type_text);
  const auto d = read_diagram_file(dfile);
  const auto a = read_algebra_file(afile);
  const auto cs = enumerate_colorings(d, a, type);
  if (porcelain)
    std::cout << cs.size() << "\n";
  else
    std::cout << "type " << to_string(type) << " colorings: " << cs.size() << "\n";
  if (list)
    for (const auto& c : cs) std::cout << coloring_line(c, d, a) << "\n";
  return 0;
}

int cmd_cycle(const std::string& dfile, const std::string& afile, const std::string& cfile) {
  const auto d = read_diagram_file(dfile);
  const auto a = read_algebra_file(afile);
  Coloring c;
  try {
    c = parse_coloring(read_text_file(cfile), d, a, ColoringType::II);
  } catch (const ParseError& e) {
    throw ParseError(cfile + ": " + e.what());
  }
  const auto cx = ChainComplex::for_algebra(a, Theory::partial_quandle, 3);
  Chain total{2, {}};
  auto report = [&](const std::string& name, const Chain& z) {
    const std::string diag = order_text(order_in_homology(cx, z));
    if (porcelain)
      std::cout << name << "\t" << diag << "\t" << format_chain(z, a.elements()) << "\n";
    else
      std::cout << name << ": " << format_chain(z, a.elements()) << "  [" << diag << "]\n";
  };
  for (const auto& [name, z] : cycle_from_coloring(d, a, c, cx)) {
    report(name, z);
    total = total + z;
  }
  report(porcelain ? "total" : "sum", total);
  return 0;
}

// --- moves and reachability -----------------------------------------------------

int cmd_moves(const std::string& dfile, const std::string& theory, bool list) {
  const auto d = read_diagram_file(dfile);
  const auto t = ConditionalTheory::parse(theory);
  const auto ms = licensed_moves(t, d);
  if (porcelain) {
    if (!list) std::cout << ms.size() << "\n";
  } else {
    std::cout << ms.size() << " licensed move(s) under " << t.name() << "\n";
  }
  if (list)
    for (const auto& m : ms) {
      std::cout << move_spec(m);
      if (!porcelain) std::cout << "\t" << m.description;
      std::cout << "\n";
    }
  return 0;
}

int cmd_apply(const std::string& dfile, const std::string& spec, const std::string& theory,
              const std::string& scheme) {
  const auto d = read_diagram_file(dfile);
  const Move m = parse_move_spec(spec);
  const auto cands = candidate_moves(d);
  if (std::find(cands.begin(), cands.end(), m) == cands.end())
    throw PreconditionError("move '" + spec + "' is not applicable to " + dfile +
                            " (see 'moves --theory always --list')");
  if (!theory.empty() && !licensed(ConditionalTheory::parse(theory), d, m)) {
    std::cerr << "relknot: move '" << spec << "' is not licensed under " << theory << "\n";
    return 1;
  }
  const auto r = apply_move_traced(d, m, MoveScheme::named(scheme));
  if (!porcelain)
    for (const auto& l : r.labels)
      std::cout << "# " << l.arc << " <- " << l.term.to_string() << " (witness " << l.witness << ")\n";
  std::cout << format_diagram(r.diagram);
  return 0;
}

Bounds bounds_for(const LabeledDiagram& d, long crossings, long states, long depth) {
  Bounds b = default_bounds(d);
  if (crossings >= 0) b.max_crossings = static_cast<std::size_t>(crossings);
  if (states >= 0) b.max_states = static_cast<std::size_t>(states);
  if (depth >= 0) b.max_depth = static_cast<std::size_t>(depth);
  if (b.max_states == 0 || b.max_depth == 0) throw ArgumentError("bounds must be positive");
  return b;
}

int cmd_reach(const std::string& theory, const std::string& from_file, const std::string& to_file,
              long crossings, long states, long depth) {
  const auto t = ConditionalTheory::parse(theory);
  const auto from = read_diagram_file(from_file);
  const auto to = read_diagram_file(to_file);
  const auto r = reachable(t, from, to, bounds_for(from, crossings, states, depth));
  const std::string status = r.truncated ? "truncated" : "exhausted";
  if (r.found) {
    if (porcelain)
      std::cout << "yes " << r.path.size() << "\n";
    else
      std::cout << "yes: " << r.path.size() << " move(s)\n";
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      if (porcelain)
        std::cout << move_spec(r.path[i]) << "\n";
      else
        std::cout << "  " << i + 1 << ". " << move_spec(r.path[i]) << "\t" << r.path[i].description
                  << "\n";
    }
    return 0;
  }
  if (porcelain)
    std::cout << "no_within_bounds " << r.states << " " << status << "\n";
  else
    std::cout << "no_within_bounds (" << r.states << " states explored, search " << status << ")\n";
  return 1;
}

int cmd_explore(const std::string& theory, const std::string& dfile, bool dot, long crossings,
                long states, long depth) {
  const auto t = ConditionalTheory::parse(theory);
  const auto d = read_diagram_file(dfile);
  const auto g = explore(t, d, bounds_for(d, crossings, states, depth));
  if (dot) {
    std::cout << to_dot(g);
    return 0;
  }
  const auto c = condense(g);
  std::size_t terminal = 0;
  for (bool b : c.terminal) terminal += b ? 1 : 0;
  if (porcelain) {
    std::cout << g.nodes.size() << " " << g.edges.size() << " " << g.status() << " "
              << c.classes.size() << " " << terminal << "\n";
  } else {
    std::cout << "states: " << g.nodes.size() << "\n"
              << "edges: " << g.edges.size() << "\n"
              << "status: " << g.status() << "\n"
              << "beyond crossing bound: " << g.beyond_crossings << "\n"
              << "classes: " << c.classes.size() << "\n"
              << "terminal classes: " << terminal << "\n";
  }
  return 0;
}

int cmd_entropy_check(const std::string& scheme) {
  const auto s = MoveScheme::named(scheme);
  const auto r = check_entropy_decreasing(s);
  if (porcelain) {
    std::cout << (r.ok ? "ok" : "violations") << "\n";
    for (const auto& v : r.violations) std::cout << v << "\n";
  } else if (r.ok) {
    std::cout << "scheme " << s.name << ": entropy decreasing (" << s.templates.size()
              << " templates)\n";
  } else {
    std::cout << "scheme " << s.name << ": " << r.violations.size() << " violation(s)\n";
    for (const auto& v : r.violations) std::cout << "  " << v << "\n";
  }
  return r.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relknot: relation-conditioned knot diagrams, partial quandles and homology"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--porcelain", porcelain, "Stable machine-readable output");
  app.set_version_flag("--version", std::string("relknot ") + kVersion);

  int code = 0;
  std::string file, q, p, kind, theory = "pquandle", chain_text, type_text = "II", dfile, afile,
                                 cfile, from_file, to_file, move_text, scheme = "default";
  int defect_k = 0, max_degree = 3, min_degree = 0;
  long crossings = -1, states = -1, depth = -1;
  bool flag_list = false, flag_count = false, flag_express = false, flag_dot = false;

  auto* rt = app.add_subcommand("relate-terms", "Evaluate q R p for Boolean terms over a relation");
  rt->add_option("relation", file, ".rel file")->required();
  rt->add_option("q", q, "left term")->required();
  rt->add_option("p", p, "right term")->required();
  rt->callback([&] { code = cmd_relate_terms(file, q, p); });

  auto* cl = app.add_subcommand("closure", "Symmetric, semi-transitive or combined closure");
  cl->add_option("relation", file, ".rel file")->required();
  cl->add_option("--kind", kind, "symmetric | semi_transitive | st")->required();
  cl->callback([&] { code = cmd_closure(file, kind); });

  auto* ca = app.add_subcommand("check-axioms", "Check an algebra's axioms");
  ca->add_option("algebra", file, ".alg file")->required();
  ca->add_option("--kind", kind, "rack | quandle | partial_rack_rel | partial_quandle_rel");
  ca->callback([&] { code = cmd_check_axioms(file, kind); });

  auto* ho = app.add_subcommand("homology", "Homology groups of a relation or algebra");
  ho->add_option("file", file, ".alg or .rel file")->required();
  ho->add_option("--theory", theory, "rel | rack | quandle | prack | pquandle | gendefect")
      ->capture_default_str();
  ho->add_option("--defect", defect_k, "defect bound k")->capture_default_str();
  ho->add_option("--max-degree", max_degree, "complex is built up to this degree")
      ->capture_default_str();
  ho->add_option("--min-degree", min_degree, "first degree printed")->capture_default_str();
  ho->callback([&] { code = cmd_homology(file, theory, defect_k, max_degree, min_degree); });

  auto* bd = app.add_subcommand("boundary", "Boundary of a chain, or its homology diagnosis");
  bd->add_option("file", file, ".alg or .rel file")->required();
  bd->add_option("chain", chain_text, "e.g. (1,3) - (1,4); put -- before a chain starting with -")
      ->required();
  bd->add_option("--theory", theory, "homology theory")->capture_default_str();
  bd->add_option("--defect", defect_k, "defect bound k")->capture_default_str();
  bd->add_flag("--express", flag_express, "Express a cycle as a boundary or report its order");
  bd->callback([&] { code = cmd_boundary(file, theory, defect_k, chain_text, flag_express); });

  auto* co = app.add_subcommand("color", "Count or list colorings of a component-labeled diagram");
  co->add_option("--type", type_text, "I | II")->capture_default_str();
  co->add_option("--diagram", dfile, ".pd file")->required();
  co->add_option("--algebra", afile, ".alg file")->required();
  auto* count_opt = co->add_flag("--count", flag_count, "Print the count only (default)");
  co->add_flag("--list", flag_list, "List every coloring")->excludes(count_opt);
  co->callback([&] { code = cmd_color(type_text, dfile, afile, flag_list); });

  auto* cy = app.add_subcommand("cycle", "Per-component 2-cycles of a type II coloring");
  cy->add_option("--diagram", dfile, ".pd file")->required();
  cy->add_option("--algebra", afile, ".alg file")->required();
  cy->add_option("--coloring", cfile, "lines 'arc = element'")->required();
  cy->callback([&] { code = cmd_cycle(dfile, afile, cfile); });

  auto* mv = app.add_subcommand("moves", "Licensed elementary moves of a diagram");
  mv->add_option("--diagram", dfile, ".pd file")->required();
  mv->add_option("--theory", theory, "always | parity | value_monotone:weak|strict | arc_C1 | "
                                     "component_rel")
      ->required();
  mv->add_flag("--list", flag_list, "List the moves");
  mv->callback([&] { code = cmd_moves(dfile, theory, flag_list); });

  auto* ap = app.add_subcommand("apply", "Apply one move and print the new diagram");
  ap->add_option("--diagram", dfile, ".pd file")->required();
  ap->add_option("--move", move_text, "as printed by 'moves --list', e.g. \"R2- 0 1 3\"")
      ->required();
  std::string apply_theory;
  ap->add_option("--theory", apply_theory, "refuse the move unless this theory licenses it");
  ap->add_option("--scheme", scheme, "label scheme")->capture_default_str();
  ap->callback([&] { code = cmd_apply(dfile, move_text, apply_theory, scheme); });

  auto add_bounds = [&](CLI::App* sc) {
    sc->add_option("--max-crossings", crossings, "default: source crossings + 2");
    sc->add_option("--max-states", states, "default: 20000 or RELKNOT_MAX_STATES");
    sc->add_option("--max-depth", depth, "default: 50");
  };

  auto* re = app.add_subcommand("reach", "Bounded search for a licensed move path");
  re->add_option("--theory", theory, "conditional theory")->required();
  re->add_option("--from", from_file, ".pd file")->required();
  re->add_option("--to", to_file, ".pd file")->required();
  add_bounds(re);
  re->callback([&] { code = cmd_reach(theory, from_file, to_file, crossings, states, depth); });

  auto* ex = app.add_subcommand("explore", "Bounded move graph of a diagram");
  ex->add_option("--theory", theory, "conditional theory")->required();
  ex->add_option("--diagram", dfile, ".pd file")->required();
  ex->add_flag("--dot", flag_dot, "Print the graph in Graphviz format");
  add_bounds(ex);
  ex->callback([&] { code = cmd_explore(theory, dfile, flag_dot, crossings, states, depth); });

  auto* en = app.add_subcommand("entropy-check", "Check that a label scheme is entropy decreasing");
  en->add_option("--scheme", scheme, "label scheme")->capture_default_str();
  en->callback([&] { code = cmd_entropy_check(scheme); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "relknot: capacity exceeded: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "relknot: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "relknot: internal error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
