#include <doctest.h>

#include "relknot/algebra.hpp"
#include "relknot/errors.hpp"
#include "support.hpp"

using namespace relknot;
using testing_support::fixture;

namespace {

PartialAlgebra total_version(const PartialAlgebra& a, AlgebraKind kind) {
  auto full = BinaryRelation::full(a.elements());
  return PartialAlgebra(a.elements(), a.table(Op::star), synthesize_bar(a.table(Op::star), full),
                        full, kind);
}

}  // namespace

TEST_CASE("apply_op examples") {
  auto x19 = read_algebra_file(fixture("ex3_19.alg"));
  CHECK(apply_op(x19, "3", "4", Op::star) == "5");
  CHECK(apply_op(x19, "1", "3", Op::star) == "2");

  auto d3 = make_standard(parse_standard_spec("dihedral(3)"));
  CHECK(apply_op(d3, "1", "2", Op::star) == "0");
  CHECK(apply_op(d3, "0", "1", Op::star) == "2");

  auto x12 = read_algebra_file(fixture("ex3_12.alg"));
  CHECK_THROWS_AS(apply_op(x12, "1", "1", Op::star), PartialityError);
  CHECK(apply_op(x12, "1", "3", Op::star) == "2");
}

TEST_CASE("published tables satisfy their axioms") {
  auto x12 = read_algebra_file(fixture("ex3_12.alg"));
  auto x19 = read_algebra_file(fixture("ex3_19.alg"));
  CHECK(x12.kind() == AlgebraKind::partial_quandle_rel);
  CHECK(check_axioms(x12).ok());
  CHECK(check_axioms(x19).ok());
  CHECK(check_axioms(x19, AlgebraKind::partial_rack_rel).ok());
  CHECK(x12.involutory());
  CHECK(x19.involutory());
  CHECK(x19.rel().pair_count() == 19);
  CHECK(x12.rel().pair_count() == 12);
  // The five-element table is a quandle in the ordinary sense as well.
  CHECK(check_axioms(total_version(x19, AlgebraKind::quandle)).ok());
  // PQ3 on loops.
  for (auto* a : {&x12, &x19})
    for (std::size_t x = 0; x < a->size(); ++x)
      if (a->rel().at(x, x)) CHECK(a->apply(x, x, Op::star) == x);
}

TEST_CASE("the four-element table admits no distributive completion") {
  auto x12 = read_algebra_file(fixture("ex3_12.alg"));
  auto star = x12.table(Op::star);
  auto full = BinaryRelation::full(x12.elements());
  std::vector<std::pair<int, int>> holes;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (star[x][y] < 0) holes.emplace_back(x, y);
  REQUIRE(holes.size() == 4);
  int distributive = 0;
  for (int code = 0; code < 256; ++code) {
    auto t = star;
    for (int h = 0; h < 4; ++h) t[holes[h].first][holes[h].second] = (code >> (2 * h)) & 3;
    PartialAlgebra a(x12.elements(), t, t, full, AlgebraKind::rack);
    bool q3 = true;
    for (const auto& v : check_axioms(a).violations)
      if (v.axiom == "Q3") q3 = false;
    if (q3) ++distributive;
  }
  CHECK(distributive == 0);
}

TEST_CASE("standard constructions") {
  auto d3 = make_standard(parse_standard_spec("dihedral(3)"));
  auto report = check_axioms(d3);
  CHECK(report.ok());

  auto c4 = make_standard(parse_standard_spec("core(4)"));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) CHECK(c4.apply(a, b, Op::star) == (2 * b + 8 - a) % 4);
  CHECK(check_axioms(c4).ok());

  auto g = make_standard(parse_standard_spec("gset(5,2)"));
  CHECK(g.kind() == AlgebraKind::rack);
  for (std::size_t x = 0; x < 5; ++x)
    for (std::size_t y = 0; y < 5; ++y) {
      CHECK(g.apply(x, y, Op::star) == (x + 2) % 5);
      CHECK(g.apply(x, y, Op::bar) == (x + 3) % 5);
    }
  CHECK(check_axioms(g).ok());
  CHECK_FALSE(check_axioms(g, AlgebraKind::quandle).ok());

  auto conj = make_standard(parse_standard_spec("conj(4,3)"));
  CHECK(check_axioms(conj).ok());

  for (int n = 1; n <= 7; ++n) {
    CHECK(check_axioms(make_standard({StandardSpec::Family::dihedral, n, 1})).ok());
    CHECK(check_axioms(make_standard({StandardSpec::Family::gset_rack, n, 3})).ok());
  }
  CHECK_THROWS_AS(make_standard({StandardSpec::Family::dihedral, 0, 1}), ArgumentError);
  CHECK_THROWS_AS(parse_standard_spec("nonsense(3)"), ArgumentError);
}

TEST_CASE("trivial operation with full relation is a quandle") {
  std::vector<std::string> names{"p", "q", "r"};
  PartialAlgebra::Table t{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  PartialAlgebra a(names, t, t, BinaryRelation::full(names), AlgebraKind::quandle);
  CHECK(check_axioms(a).ok());
}

TEST_CASE("axiom violations are reported, not thrown") {
  std::vector<std::string> names{"p", "q"};
  PartialAlgebra::Table t{{1, 1}, {0, 0}};
  PartialAlgebra a(names, t, t, BinaryRelation::full(names), AlgebraKind::quandle);
  auto r = check_axioms(a);
  CHECK_FALSE(r.ok());
  bool q1 = false;
  for (const auto& v : r.violations) q1 = q1 || v.axiom == "Q1";
  CHECK(q1);
  CHECK(r.describe(a).find("Q1 (p)") != std::string::npos);
}

TEST_CASE("right-distributivity variants agree") {
  std::mt19937 rng(21);
  int holds = 0, fails = 0;
  for (int i = 0; i < 1000; ++i) {
    auto a = testing_support::random_pq124(rng, 3 + i % 4);
    auto v = distributivity_variants(a);
    CHECK(v[0] == v[1]);
    CHECK(v[0] == v[2]);
    CHECK(v[0] == v[3]);
    (v[0] ? holds : fails)++;
  }
  CHECK(holds >= 20);
  CHECK(fails >= 20);
  for (const char* f : {"ex3_12.alg", "ex3_19.alg"}) {
    auto v = distributivity_variants(read_algebra_file(fixture(f)));
    CHECK(v == std::array<bool, 4>{true, true, true, true});
  }
}

TEST_CASE(".alg round trip and errors") {
  for (const char* f : {"ex3_12.alg", "ex3_19.alg", "dihedral3.alg"}) {
    auto a = read_algebra_file(fixture(f));
    auto b = parse_algebra(format_algebra(a));
    CHECK(b.elements() == a.elements());
    CHECK(b.table(Op::star) == a.table(Op::star));
    CHECK(b.table(Op::bar) == a.table(Op::bar));
    CHECK(b.rel() == a.rel());
    CHECK(b.kind() == a.kind());
  }
  auto d = read_algebra_file(fixture("dihedral3.alg"));
  CHECK(d.kind() == AlgebraKind::quandle);
  CHECK(d.rel().pair_count() == 9);

  CHECK_THROWS_AS(parse_algebra("a b\n%\na\nb a\n"), ParseError);
  CHECK_THROWS_AS(parse_algebra("a b\n%\na z\nb a\n"), ParseError);
  // Column `a` is not injective, so bar* cannot be derived.
  CHECK_THROWS_AS(parse_algebra("a b\n%\na a\na b\n"), ParseError);
  auto three = parse_algebra("a b\n%\na b\nb a\n%\nrel:\n1 0\n0 1\n");
  CHECK(three.kind() == AlgebraKind::partial_quandle_rel);
  CHECK_FALSE(three.rel().at(0, 1));
}
