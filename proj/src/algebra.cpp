#include "relknot/algebra.hpp"

#include <charconv>
#include <sstream>

#include "relknot/errors.hpp"
#include "text_util.hpp"

namespace relknot {

std::string to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::rack:
      return "rack";
    case AlgebraKind::quandle:
      return "quandle";
    case AlgebraKind::partial_rack_rel:
      return "partial_rack_rel";
    case AlgebraKind::partial_quandle_rel:
      return "partial_quandle_rel";
  }
  return "?";
}

AlgebraKind parse_algebra_kind(std::string_view s) {
  if (s == "rack") return AlgebraKind::rack;
  if (s == "quandle") return AlgebraKind::quandle;
  if (s == "partial_rack_rel" || s == "prack") return AlgebraKind::partial_rack_rel;
  if (s == "partial_quandle_rel" || s == "pquandle") return AlgebraKind::partial_quandle_rel;
  throw ArgumentError("unknown algebra kind '" + std::string(s) + "'");
}

PartialAlgebra::PartialAlgebra(std::vector<std::string> elements, Table star, Table bar,
                               BinaryRelation rel, AlgebraKind kind)
    : elements_(std::move(elements)),
      star_(std::move(star)),
      bar_(std::move(bar)),
      rel_(std::move(rel)),
      kind_(kind) {
  const std::size_t n = elements_.size();
  if (rel_.elements() != elements_) throw ArgumentError("relation elements differ from algebra");
  for (const Table* t : {&star_, &bar_}) {
    if (t->size() != n) throw ArgumentError("operation table needs one row per element");
    for (const auto& row : *t) {
      if (row.size() != n) throw ArgumentError("operation table must be square");
      for (int v : row)
        if (v < kUndefined || v >= static_cast<int>(n))
          throw ArgumentError("operation table entry out of range");
    }
  }
}

std::optional<std::size_t> PartialAlgebra::try_apply(std::size_t x, std::size_t y, Op op) const {
  int v = table(op)[x][y];
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

std::size_t PartialAlgebra::apply(std::size_t x, std::size_t y, Op op) const {
  if (auto v = try_apply(x, y, op)) return *v;
  throw PartialityError(name(x) + (op == Op::star ? " * " : " bar* ") + name(y) +
                        " is undefined");
}

bool PartialAlgebra::involutory() const {
  for (std::size_t x = 0; x < size(); ++x)
    for (std::size_t y = 0; y < size(); ++y)
      if (rel_.at(x, y) && star_[x][y] != bar_[x][y]) return false;
  return true;
}

PartialAlgebra PartialAlgebra::with_kind(AlgebraKind k) const {
  PartialAlgebra copy = *this;
  copy.kind_ = k;
  return copy;
}

std::string apply_op(const PartialAlgebra& a, std::string_view x, std::string_view y, Op which) {
  return a.name(a.apply(a.index_of(x), a.index_of(y), which));
}

std::string AxiomReport::describe(const PartialAlgebra& a) const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.axiom << " (";
    for (std::size_t i = 0; i < v.elements.size(); ++i) out << (i ? "," : "") << a.name(v.elements[i]);
    out << "): " << v.detail << '\n';
  }
  return out.str();
}

namespace {

class Checker {
 public:
  Checker(const PartialAlgebra& a, AxiomReport& report) : a_(a), report_(report) {}

  void fail(const char* axiom, std::vector<std::size_t> els, std::string detail) {
    report_.violations.push_back({axiom, std::move(els), std::move(detail)});
  }

  std::optional<std::size_t> op(std::optional<std::size_t> x, std::optional<std::size_t> y,
                                Op o) const {
    if (!x || !y) return std::nullopt;
    return a_.try_apply(*x, *y, o);
  }

  void totality() {
    for (std::size_t x = 0; x < a_.size(); ++x)
      for (std::size_t y = 0; y < a_.size(); ++y)
        for (Op o : {Op::star, Op::bar})
          if (!a_.defined(x, y, o))
            fail("totality", {x, y}, o == Op::star ? "x*y undefined" : "x bar* y undefined");
  }

  // Idempotence on the pairs selected by `pick`.
  template <class Pick>
  void idempotent(const char* axiom, Pick pick) {
    for (std::size_t x = 0; x < a_.size(); ++x) {
      if (!pick(x)) continue;
      if (a_.try_apply(x, x, Op::star) != x || a_.try_apply(x, x, Op::bar) != x)
        fail(axiom, {x}, "x*x = x = x bar* x fails");
    }
  }

  template <class Pick>
  void invertible(const char* axiom, Pick pick) {
    for (std::size_t x = 0; x < a_.size(); ++x)
      for (std::size_t y = 0; y < a_.size(); ++y) {
        if (!pick(x, y)) continue;
        auto l = op(a_.try_apply(x, y, Op::star), y, Op::bar);
        auto r = op(a_.try_apply(x, y, Op::bar), y, Op::star);
        if (l != x || r != x) fail(axiom, {x, y}, "(x*y) bar* y = x = (x bar* y)*y fails");
      }
  }

  template <class Pick>
  void distributive(const char* axiom, Pick pick) {
    for (std::size_t x = 0; x < a_.size(); ++x)
      for (std::size_t y = 0; y < a_.size(); ++y)
        for (std::size_t z = 0; z < a_.size(); ++z) {
          if (!pick(x, y, z)) continue;
          auto l = op(a_.try_apply(x, y, Op::star), z, Op::star);
          auto r = op(a_.try_apply(x, z, Op::star), a_.try_apply(y, z, Op::star), Op::star);
          if (!l || !r)
            fail(axiom, {x, y, z}, "a product in (x*y)*z = (x*z)*(y*z) is undefined");
          else if (*l != *r)
            fail(axiom, {x, y, z}, "(x*y)*z = (x*z)*(y*z) fails");
        }
  }

 private:
  const PartialAlgebra& a_;
  AxiomReport& report_;
};

}  // namespace

AxiomReport check_axioms(const PartialAlgebra& a) { return check_axioms(a, a.kind()); }

AxiomReport check_axioms(const PartialAlgebra& a, AlgebraKind kind) {
  AxiomReport report{kind, {}};
  Checker c(a, report);
  const auto& R = a.rel();
  auto all1 = [](std::size_t) { return true; };
  auto all2 = [](std::size_t, std::size_t) { return true; };
  auto all3 = [](std::size_t, std::size_t, std::size_t) { return true; };

  if (kind == AlgebraKind::rack || kind == AlgebraKind::quandle) {
    c.totality();
    if (kind == AlgebraKind::quandle) c.idempotent("Q1", all1);
    c.invertible("Q2", all2);
    c.distributive("Q3", all3);
    return report;
  }

  auto related = [&](std::size_t x, std::size_t y) { return R.at(x, y); };
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (R.at(x, y))
        for (Op o : {Op::star, Op::bar})
          if (!a.defined(x, y, o))
            c.fail("PQ1", {x, y}, o == Op::star ? "x*y undefined" : "x bar* y undefined");

  const Preorder dom = dominance(R);
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y) {
      if (!R.at(x, y)) continue;
      for (Op o : {Op::star, Op::bar}) {
        auto v = a.try_apply(x, y, o);
        if (v && !dom.equivalent(*v, x))
          c.fail("PQ2", {x, y}, o == Op::star ? "x*y not equivalent to x"
                                              : "x bar* y not equivalent to x");
      }
    }

  if (kind == AlgebraKind::partial_quandle_rel)
    c.idempotent("PQ3", [&](std::size_t x) { return R.at(x, x); });
  c.invertible("PQ4", related);
  c.distributive("PQ5", [&](std::size_t x, std::size_t y, std::size_t z) {
    return R.at(x, y) && R.at(x, z) && R.at(y, z);
  });
  return report;
}

AxiomReport check_defect_operation(const PartialAlgebra& a) {
  AxiomReport report{a.kind(), {}};
  Checker c(a, report);
  const Preorder dom = dominance(a.rel());
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y) {
      auto v = a.try_apply(x, y, Op::star);
      if (!v)
        c.fail("totality", {x, y}, "x*y undefined");
      else if (!dom.equivalent(*v, x))
        c.fail("defect-1", {x, y}, "x*y not equivalent to x");
    }
  c.distributive("defect-2", [](std::size_t, std::size_t, std::size_t) { return true; });
  return report;
}

std::array<bool, 4> distributivity_variants(const PartialAlgebra& a) {
  std::array<bool, 4> ok{true, true, true, true};
  const auto& R = a.rel();
  auto op = [&](std::optional<std::size_t> x, std::optional<std::size_t> y,
                Op o) -> std::optional<std::size_t> {
    if (!x || !y) return std::nullopt;
    return a.try_apply(*x, *y, o);
  };
  // Variant k uses (first, second) operations: (*,*), (bar,*), (*,bar), (bar,bar).
  const std::array<std::pair<Op, Op>, 4> ops{{{Op::star, Op::star},
                                              {Op::bar, Op::star},
                                              {Op::star, Op::bar},
                                              {Op::bar, Op::bar}}};
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      for (std::size_t z = 0; z < a.size(); ++z) {
        if (!(R.at(x, y) && R.at(x, z) && R.at(y, z))) continue;
        for (std::size_t k = 0; k < 4; ++k) {
          // (x o1 y) o2 z = (x o2 z) o1 (y o2 z)
          auto [o1, o2] = ops[k];
          auto l = op(op(x, y, o1), z, o2);
          auto r = op(op(x, z, o2), op(y, z, o2), o1);
          if (!l || !r || *l != *r) ok[k] = false;
        }
      }
  return ok;
}

// ---------------------------------------------------------------------------
// Standard constructions.

StandardSpec parse_standard_spec(std::string_view s) {
  auto open = s.find('(');
  auto close = s.rfind(')');
  if (open == std::string_view::npos || close != s.size() - 1)
    throw ArgumentError("expected family(n[,k]), got '" + std::string(s) + "'");
  std::string_view fam = s.substr(0, open);
  std::string_view args = s.substr(open + 1, close - open - 1);
  std::vector<int> nums;
  while (!args.empty()) {
    auto comma = args.find(',');
    auto part = args.substr(0, comma);
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size())
      throw ArgumentError("bad integer '" + std::string(part) + "' in '" + std::string(s) + "'");
    nums.push_back(v);
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  StandardSpec spec{};
  std::size_t want = 1;
  if (fam == "dihedral") {
    spec.family = StandardSpec::Family::dihedral;
  } else if (fam == "core") {
    spec.family = StandardSpec::Family::core;
  } else if (fam == "conj") {
    spec.family = StandardSpec::Family::conj;
    want = 2;
  } else if (fam == "gset") {
    spec.family = StandardSpec::Family::gset_rack;
    want = 2;
  } else {
    throw ArgumentError("unknown family '" + std::string(fam) + "'");
  }
  if (nums.size() != want) throw ArgumentError("wrong number of parameters in '" + std::string(s) + "'");
  spec.n = nums[0];
  if (want == 2) spec.k = nums[1];
  return spec;
}

PartialAlgebra make_standard(const StandardSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw ArgumentError("carrier size must be at least 1");
  auto mod = [n](long v) { return static_cast<int>(((v % n) + n) % n); };
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  PartialAlgebra::Table star(n, std::vector<int>(n)), bar(n, std::vector<int>(n));
  AlgebraKind kind = AlgebraKind::quandle;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      switch (spec.family) {
        case StandardSpec::Family::dihedral:
        case StandardSpec::Family::core:
          // Abelian core: b a^-1 b written additively.
          star[x][y] = bar[x][y] = mod(2L * y - x);
          break;
        case StandardSpec::Family::conj:
          // Conjugation in an abelian group fixes everything.
          star[x][y] = bar[x][y] = x;
          break;
        case StandardSpec::Family::gset_rack:
          star[x][y] = mod(static_cast<long>(x) + spec.k);
          bar[x][y] = mod(static_cast<long>(x) - spec.k);
          kind = AlgebraKind::rack;
          break;
      }
    }
  BinaryRelation rel = BinaryRelation::full(names);
  return PartialAlgebra(std::move(names), std::move(star), std::move(bar), std::move(rel), kind);
}

// ---------------------------------------------------------------------------
// Text format.

PartialAlgebra::Table synthesize_bar(const PartialAlgebra::Table& star, const BinaryRelation& rel) {
  const std::size_t n = rel.size();
  PartialAlgebra::Table bar(n, std::vector<int>(n, PartialAlgebra::kUndefined));
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      if (!rel.at(x, y)) continue;
      int v = star[x][y];
      if (v < 0) continue;  // reported later as a PQ1 violation
      int& slot = bar[v][y];
      if (slot >= 0 && slot != static_cast<int>(x))
        throw ArgumentError("cannot derive bar* table: column " + rel.name(y) +
                            " of * is not injective on related elements (" + rel.name(slot) +
                            " and " + rel.name(x) + " both map to " + rel.name(v) + ")");
      slot = static_cast<int>(x);
    }
  return bar;
}

namespace {

struct Block {
  std::string label;  // "" when unlabeled
  std::vector<std::size_t> lines;
  int first_line = 0;
};

PartialAlgebra::Table parse_table(const std::vector<detail::Line>& lines, const Block& b,
                                  const BinaryRelation& names) {
  const std::size_t n = names.size();
  if (b.lines.size() != n)
    throw ParseError("table needs " + std::to_string(n) + " rows, found " +
                         std::to_string(b.lines.size()),
                     b.first_line);
  PartialAlgebra::Table t(n, std::vector<int>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& line = lines[b.lines[r]];
    if (line.tokens.size() != n)
      throw ParseError("table row needs " + std::to_string(n) + " entries", line.number);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& tok = line.tokens[c];
      if (tok == "-") {
        t[r][c] = PartialAlgebra::kUndefined;
      } else if (auto i = names.find(tok)) {
        t[r][c] = static_cast<int>(*i);
      } else {
        throw ParseError("unknown element '" + tok + "' in table", line.number);
      }
    }
  }
  return t;
}

}  // namespace

PartialAlgebra parse_algebra(std::string_view text) {
  auto lines = detail::content_lines(text);
  std::vector<Block> blocks(1);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& toks = lines[i].tokens;
    if (toks.size() == 1 && toks[0] == "%") {
      blocks.emplace_back();
      continue;
    }
    Block& b = blocks.back();
    if (b.lines.empty() && b.label.empty() && toks.size() == 1 &&
        (toks[0] == "star:" || toks[0] == "bar:" || toks[0] == "rel:")) {
      b.label = toks[0].substr(0, toks[0].size() - 1);
      b.first_line = lines[i].number;
      continue;
    }
    if (b.lines.empty() && b.first_line == 0) b.first_line = lines[i].number;
    b.lines.push_back(i);
  }

  // Header: optional kind line, then names.
  Block& head = blocks.front();
  std::optional<AlgebraKind> kind;
  std::size_t name_line = 0;
  if (head.lines.empty()) throw ParseError("missing element names");
  if (lines[head.lines[0]].tokens[0] == "kind:") {
    const auto& kl = lines[head.lines[0]];
    if (kl.tokens.size() != 2) throw ParseError("expected 'kind: <kind>'", kl.number);
    try {
      kind = parse_algebra_kind(kl.tokens[1]);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), kl.number);
    }
    name_line = 1;
  }
  if (head.lines.size() != name_line + 1)
    throw ParseError("first block must hold exactly one line of element names", head.first_line);
  const auto& names = lines[head.lines[name_line]].tokens;
  BinaryRelation proto;
  try {
    proto = BinaryRelation(names);
  } catch (const ArgumentError& e) {
    throw ParseError(e.what(), lines[head.lines[name_line]].number);
  }

  std::optional<Block> star_b, bar_b, rel_b;
  const char* positional[] = {"star", "bar", "rel"};
  for (std::size_t k = 1; k < blocks.size(); ++k) {
    Block& b = blocks[k];
    std::string label = b.label;
    if (label.empty()) {
      if (k - 1 >= 3) throw ParseError("too many blocks", b.first_line);
      label = positional[k - 1];
    }
    auto& slot = label == "star" ? star_b : label == "bar" ? bar_b : rel_b;
    if (slot) throw ParseError("duplicate " + label + " block", b.first_line);
    slot = b;
  }
  if (!star_b) throw ParseError("missing star table");

  auto star = parse_table(lines, *star_b, proto);
  BinaryRelation rel = BinaryRelation::full(names);
  if (rel_b) {
    std::vector<detail::Line> rel_lines;
    detail::Line header{rel_b->first_line, "", names};
    rel_lines.push_back(header);
    for (auto i : rel_b->lines) rel_lines.push_back(lines[i]);
    rel = detail::parse_relation_lines(rel_lines, 0, rel_lines.size());
  }
  PartialAlgebra::Table bar;
  if (bar_b) {
    bar = parse_table(lines, *bar_b, proto);
  } else {
    try {
      bar = synthesize_bar(star, rel);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), star_b->first_line);
    }
  }
  if (!kind) kind = rel_b ? AlgebraKind::partial_quandle_rel : AlgebraKind::quandle;
  return PartialAlgebra(names, std::move(star), std::move(bar), std::move(rel), *kind);
}

PartialAlgebra read_algebra_file(const std::string& path) {
  try {
    return parse_algebra(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_algebra(const PartialAlgebra& a) {
  std::ostringstream out;
  out << "kind: " << to_string(a.kind()) << '\n';
  for (std::size_t i = 0; i < a.size(); ++i) out << (i ? " " : "") << a.name(i);
  out << '\n';
  auto table = [&](Op op) {
    for (std::size_t x = 0; x < a.size(); ++x) {
      for (std::size_t y = 0; y < a.size(); ++y) {
        auto v = a.try_apply(x, y, op);
        out << (y ? " " : "") << (v ? a.name(*v) : std::string("-"));
      }
      out << '\n';
    }
  };
  out << "%\nstar:\n";
  table(Op::star);
  out << "%\nbar:\n";
  table(Op::bar);
  out << "%\nrel:\n";
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < a.size(); ++y) out << (y ? " " : "") << (a.rel().at(x, y) ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

}  // namespace relknot
