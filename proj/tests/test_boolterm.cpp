#include <doctest.h>

#include "relknot/boolterm.hpp"
#include "relknot/errors.hpp"
#include "support.hpp"

using namespace relknot;
using testing_support::fixture;
using testing_support::random_relation;
using testing_support::random_term;
using testing_support::TermShape;

namespace {

using K = BoolTerm::Kind;

// Rewrites one randomly chosen subterm with a Boolean identity. The result is
// equivalent but usually structurally different.
BoolTerm rewrite(std::mt19937& rng, const BoolTerm& t, const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> coin(0, 3);
  if ((t.kind() == K::meet || t.kind() == K::join || t.kind() == K::negation) && coin(rng) == 0) {
    const BoolTerm& l = t.left();
    BoolTerm l2 = rewrite(rng, l, vars);
    if (t.kind() == K::negation) return BoolTerm::negate(l2);
    BoolTerm r2 = rewrite(rng, t.right(), vars);
    return t.kind() == K::meet ? BoolTerm::meet(l2, r2) : BoolTerm::join(l2, r2);
  }
  auto x = random_term(rng, vars, 1);
  switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0:  // double negation
      return BoolTerm::negate(BoolTerm::negate(t));
    case 1:  // absorption
      return BoolTerm::join(t, BoolTerm::meet(t, x));
    case 2:  // split on x
      return BoolTerm::join(BoolTerm::meet(t, x), BoolTerm::meet(t, BoolTerm::negate(x)));
    case 3:  // De Morgan
      if (t.kind() == K::meet)
        return BoolTerm::negate(
            BoolTerm::join(BoolTerm::negate(t.left()), BoolTerm::negate(t.right())));
      return BoolTerm::meet(t, BoolTerm::join(x, BoolTerm::negate(x)));
    case 4:  // commute
      if (t.kind() == K::meet) return BoolTerm::meet(t.right(), t.left());
      if (t.kind() == K::join) return BoolTerm::join(t.right(), t.left());
      return BoolTerm::meet(t, t);
    default:  // distribute
      if (t.kind() == K::meet && t.right().kind() == K::join)
        return BoolTerm::join(BoolTerm::meet(t.left(), t.right().left()),
                              BoolTerm::meet(t.left(), t.right().right()));
      return BoolTerm::join(t, BoolTerm::meet(x, BoolTerm::negate(x)));
  }
}

std::vector<std::string> elements_of(const BinaryRelation& r) { return r.elements(); }

}  // namespace

TEST_CASE("parse_term examples") {
  auto p = parse_term("(a|b)&c");
  REQUIRE(p.kind() == K::meet);
  CHECK(p.left().kind() == K::join);
  CHECK(p.left().left().name() == "a");
  CHECK(p.left().right().name() == "b");
  CHECK(p.right().name() == "c");
  CHECK(parse_term("a").kind() == K::var);
  CHECK_THROWS_AS(parse_term("a&&b"), ParseError);
  try {
    parse_term("a&&b");
  } catch (const ParseError& e) {
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_term(""), ParseError);
  CHECK_THROWS_AS(parse_term("(a|b"), ParseError);
  CHECK(parse_term("!a&b|c").to_string() == "!a&b|c");
  CHECK(parse_term("a&(b&c)").to_string() == "a&(b&c)");
  CHECK(parse_term("!(a|0)").to_string() == "!(a|0)");
}

TEST_CASE("printing round-trips") {
  std::mt19937 rng(5);
  std::vector<std::string> vars{"a", "b", "c_1", "x.2"};
  for (int i = 0; i < 300; ++i) {
    auto t = random_term(rng, vars, 5, TermShape{true, true, true, true});
    CHECK(parse_term(t.to_string()) == t);
  }
}

TEST_CASE("eval_rel on the published table") {
  auto r = read_relation_file(fixture("ex2_5.rel"));
  auto p = parse_term("(a|b)&c");
  CHECK_FALSE(eval_rel(r, p, p));
  CHECK(eval_rel(r, parse_term("b"), parse_term("c")));
  CHECK(eval_rel(r, BoolTerm::one(), BoolTerm::zero()));
  CHECK_FALSE(eval_rel(r, BoolTerm::zero(), BoolTerm::one()));
  CHECK_THROWS_AS(eval_rel(r, parse_term("q"), p), NameError);

  // Hand expansion of the two stages, done directly on the matrix.
  auto R = [&](const char* x, const char* y) { return r.relate(x, y); };
  auto gen_p = [&](const char* g) { return (R(g, "a") || R(g, "b")) && R(g, "c"); };
  bool expected = (gen_p("a") || gen_p("b")) && gen_p("c");
  CHECK(eval_rel(r, p, p) == expected);
}

TEST_CASE("eval_sets examples") {
  auto r = read_relation_file(fixture("ex2_5.rel"));
  ElementSet all(3, true);
  CHECK(eval_sets(r, parse_term("a|b"), all, SetSide::lower) == ElementSet{true, true, true});
  CHECK(eval_sets(r, BoolTerm::zero(), all, SetSide::lower) == ElementSet{false, false, false});
  CHECK_THROWS_AS(eval_sets(r, parse_term("a"), ElementSet{true, false, true}, SetSide::upper),
                  ArgumentError);
}

TEST_CASE("set form of a mixed term is the structural combination") {
  std::mt19937 rng(6);
  auto vars = testing_support::names(7, "a");
  for (int i = 0; i < 200; ++i) {
    BinaryRelation r(vars);
    for (std::size_t a = 0; a < 7; ++a)
      for (std::size_t b = 0; b < 7; ++b) r.set(a, b, rng() % 2);
    ElementSet f(7);
    for (std::size_t k = 0; k < 7; ++k) f[k] = rng() % 2;
    auto s = [&](const char* t) { return eval_sets(r, parse_term(t), f, SetSide::lower); };
    auto whole = s("(a1|a3)&a6");
    auto a1 = s("a1"), a3 = s("a3"), a6 = s("a6");
    for (std::size_t y = 0; y < 7; ++y) CHECK(whole[y] == ((a1[y] || a3[y]) && a6[y]));
  }
}

TEST_CASE("set and pointwise evaluation agree") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    std::size_t n = 1 + i % 6;
    auto r = random_relation(rng, n);
    auto vars = elements_of(r);
    auto t = random_term(rng, vars, 4, TermShape{true, true, true, true});
    ElementSet f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = rng() % 3 != 0;
    auto lower = eval_sets(r, t, f, SetSide::lower);
    auto upper = eval_sets(r, t, ElementSet(n, true), SetSide::upper);
    for (std::size_t y = 0; y < n; ++y) {
      auto gy = BoolTerm::var(vars[y]);
      CHECK(lower[y] == (f[y] && eval_rel(r, t, gy)));
      CHECK(upper[y] == eval_rel(r, gy, t));
    }
  }
}

TEST_CASE("lattice_leq examples") {
  CHECK(lattice_leq(parse_term("a&b"), parse_term("a")));
  CHECK(lattice_leq(parse_term("a"), parse_term("a|b")));
  CHECK_FALSE(lattice_leq(parse_term("a"), parse_term("b")));
  CHECK(lattice_leq(parse_term("b&(a1|a2|a3)"), parse_term("b")));
  CHECK_FALSE(lattice_leq(parse_term("a|c"), parse_term("a")));
  CHECK_THROWS_AS(lattice_leq(parse_term("!a"), parse_term("a")), ArgumentError);

  std::vector<BoolTerm> many;
  for (int i = 0; i < 25; ++i) many.push_back(BoolTerm::var("v" + std::to_string(i)));
  CHECK_THROWS_AS(lattice_leq(BoolTerm::join_all(many), many[0]), CapacityError);
}

TEST_CASE("extension is invariant under Boolean rewriting") {
  std::mt19937 rng(8);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    std::size_t n = 1 + i % 5;
    auto r = random_relation(rng, n);
    auto vars = elements_of(r);
    auto p = random_term(rng, vars, 3, TermShape{true, true, true, true});
    auto q = random_term(rng, vars, 3, TermShape{true, true, true, true});
    auto p2 = rewrite(rng, rewrite(rng, p, vars), vars);
    REQUIRE(equivalent(p, p2));
    CHECK(eval_rel(r, q, p) == eval_rel(r, q, p2));
    CHECK(eval_rel(r, p, q) == eval_rel(r, p2, q));
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("lattice order implies dominance in the extended relation") {
  std::mt19937 rng(9);
  TermShape lattice{false, false, true, true};
  int checked = 0;
  for (int i = 0; checked < 200; ++i) {
    std::size_t n = 2 + i % 5;
    auto r = random_relation(rng, n);
    auto vars = elements_of(r);
    auto p = random_term(rng, vars, 3, lattice);
    BoolTerm q = i % 2 ? BoolTerm::join(p, random_term(rng, vars, 2, lattice))
                       : random_term(rng, vars, 2, lattice);
    if (!lattice_leq(p, q)) continue;
    ++checked;
    for (int k = 0; k < 10; ++k) {
      auto c = random_term(rng, vars, 3, lattice);
      if (eval_rel(r, p, c)) CHECK(eval_rel(r, q, c));
      if (eval_rel(r, c, p)) CHECK(eval_rel(r, c, q));
    }
  }
}

TEST_CASE("reflexivity, transitivity and symmetry carry over to term classes") {
  std::mt19937 rng(10);
  TermShape joins{false, false, false, true};
  TermShape meets{false, false, true, false};
  for (int i = 0; i < 250; ++i) {
    std::size_t n = 1 + i % 6;
    auto vars = testing_support::names(n);

    // (i) reflexive generators
    auto refl = random_relation(rng, n);
    for (std::size_t k = 0; k < n; ++k) refl.set(k, k);
    auto j = random_term(rng, vars, 3, joins);
    CHECK(eval_rel(refl, j, j));
    auto na = BoolTerm::negate(BoolTerm::var(vars[i % n]));
    CHECK(eval_rel(refl, na, na));

    // (ii) transitive base: random preorder-ish relation closed transitively
    auto tr = random_relation(rng, n, 0.4);
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (tr.at(a, m) && tr.at(m, b)) tr.set(a, b);
    REQUIRE(tr.is_transitive());
    auto p = random_term(rng, vars, 2, meets);
    auto q = random_term(rng, vars, 2, meets);
    auto s = random_term(rng, vars, 2, meets);
    if (eval_rel(tr, p, q) && eval_rel(tr, q, s)) CHECK(eval_rel(tr, p, s));

    // (iii) and (iv) symmetric base
    auto sym = closure(random_relation(rng, n, 0.4), ClosureKind::symmetric);
    auto g = BoolTerm::var(vars[rng() % n]);
    auto any = random_term(rng, vars, 3, TermShape{true, true, true, true});
    CHECK(eval_rel(sym, g, any) == eval_rel(sym, any, g));
    auto m1 = random_term(rng, vars, 2, meets), m2 = random_term(rng, vars, 2, meets);
    CHECK(eval_rel(sym, m1, m2) == eval_rel(sym, m2, m1));
    auto j1 = random_term(rng, vars, 2, joins), j2 = random_term(rng, vars, 2, joins);
    CHECK(eval_rel(sym, j1, j2) == eval_rel(sym, j2, j1));
  }
}

TEST_CASE("extension is isotone in the base relation on lattice terms") {
  std::mt19937 rng(12);
  TermShape lattice{false, false, true, true};
  for (int i = 0; i < 300; ++i) {
    std::size_t n = 1 + i % 6;
    auto r1 = random_relation(rng, n, 0.35);
    auto r2 = r1;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (rng() % 3 == 0) r2.set(a, b);
    auto vars = elements_of(r1);
    auto p = random_term(rng, vars, 3, lattice), q = random_term(rng, vars, 3, lattice);
    if (eval_rel(r1, p, q)) CHECK(eval_rel(r2, p, q));
  }
}

TEST_CASE("constants behave the same over every fixture relation") {
  for (const char* f : {"ex2_5.rel", "ex2_12_r1.rel", "ex2_12_r2.rel", "ex2_12_r3.rel",
                        "ex2_12_r4.rel", "one_reflexive.rel"}) {
    auto r = read_relation_file(fixture(f));
    CHECK(eval_rel(r, BoolTerm::one(), BoolTerm::zero()));
    CHECK_FALSE(eval_rel(r, BoolTerm::zero(), BoolTerm::one()));
  }
}
