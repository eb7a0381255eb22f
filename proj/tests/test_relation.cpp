#include <doctest.h>

#include "relknot/errors.hpp"
#include "relknot/relation.hpp"
#include "support.hpp"

using namespace relknot;
using testing_support::fixture;
using testing_support::random_relation;

namespace {

// Least superset with a property closed under intersection: intersect every
// superset that has it. Exhaustive, so only for tiny element counts.
BinaryRelation closure_oracle(const BinaryRelation& r, bool (BinaryRelation::*a)() const,
                              bool (BinaryRelation::*b)() const) {
  const std::size_t n = r.size(), cells = n * n;
  BinaryRelation meet = BinaryRelation::full(r.elements());
  for (std::size_t mask = 0; mask < (std::size_t{1} << cells); ++mask) {
    BinaryRelation s(r.elements());
    for (std::size_t k = 0; k < cells; ++k) s.set(k / n, k % n, (mask >> k) & 1);
    if (!s.includes(r) || !(s.*a)() || !(s.*b)()) continue;
    for (std::size_t k = 0; k < cells; ++k)
      if (!s.at(k / n, k % n)) meet.set(k / n, k % n, false);
  }
  return meet;
}

}  // namespace

TEST_CASE("relate reads the published table") {
  auto r = read_relation_file(fixture("ex2_5.rel"));
  CHECK(r.relate("a", "b"));
  CHECK_FALSE(r.relate("a", "a"));
  CHECK(r.relate("c", "c"));
  CHECK_THROWS_AS(r.relate("a", "zz"), NameError);

  BinaryRelation single({"x"});
  CHECK_FALSE(single.relate("x", "x"));
}

TEST_CASE("dominance examples") {
  auto r = read_relation_file(fixture("ex2_5.rel"));
  auto p = dominance(r);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(p.dominates(i, i));
  CHECK_FALSE(p.dominates(r.index_of("a"), r.index_of("b")));

  // x and y with identical rows and columns collapse.
  BinaryRelation twin({"x", "y", "z"}, {{1, 1, 0}, {1, 1, 0}, {0, 0, 1}});
  auto q = dominance(twin);
  CHECK(q.classes.size() == 2);
  CHECK(q.equivalent(0, 1));
  CHECK(q.quotient.elements() == std::vector<std::string>{"x", "z"});
}

TEST_CASE("closure examples") {
  BinaryRelation r({"a", "b"});
  r.set(0, 1);
  auto s = closure(r, ClosureKind::symmetric);
  CHECK(s.at(1, 0));
  CHECK(s.pair_count() == 2);

  auto st = closure(s, ClosureKind::semi_transitive);
  CHECK(st == s);

  auto ex = read_relation_file(fixture("ex2_5.rel"));
  auto c = closure(ex, ClosureKind::st);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(c.at(i, j));
  CHECK(c.relate("c", "c"));
  CHECK_FALSE(c.relate("a", "a"));
  CHECK_FALSE(c.relate("b", "b"));
  CHECK(c.pair_count() == 7);
}

TEST_CASE("monotone map examples") {
  std::mt19937 rng(11);
  auto r = random_relation(rng, 4);
  CHECK(is_monotone(ElementMap::identity(4), r, r).monotone);

  BinaryRelation loop({"t"}, {{1}});
  BinaryRelation no_loop({"t"}, {{0}});
  ElementMap to_t{{0, 0, 0, 0}};
  CHECK(is_monotone(to_t, r, loop).monotone);
  r.set(1, 2);
  auto bad = is_monotone(to_t, r, no_loop);
  CHECK_FALSE(bad.monotone);
  REQUIRE(bad.witness.has_value());
  CHECK(r.at(bad.witness->first, bad.witness->second));
}

TEST_CASE("dominance is a preorder with a sound quotient") {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + trial % 8;
    auto r = random_relation(rng, n, trial % 3 == 0 ? 0.8 : 0.5);
    auto p = dominance(r);
    CHECK(p.dominance.is_reflexive());
    CHECK(p.dominance.is_transitive());
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        CHECK(p.equivalent(a, b) == (p.dominates(a, b) && p.dominates(b, a)));
        for (std::size_t a2 = 0; a2 < n; ++a2)
          for (std::size_t b2 = 0; b2 < n; ++b2)
            if (p.equivalent(a, a2) && p.equivalent(b, b2)) CHECK(r.at(a, b) == r.at(a2, b2));
        CHECK(p.quotient.at(p.class_of[a], p.class_of[b]) == r.at(a, b));
      }
  }
}

TEST_CASE("closures are least supersets") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 3;
    if (trial >= 50) n = 4;
    auto r = random_relation(rng, n, 0.3);
    auto sym = closure(r, ClosureKind::symmetric);
    auto semi = closure(r, ClosureKind::semi_transitive);
    auto st = closure(r, ClosureKind::st);
    using BR = BinaryRelation;
    CHECK(sym == closure_oracle(r, &BR::is_symmetric, &BR::is_symmetric));
    CHECK(semi == closure_oracle(r, &BR::is_semi_transitive, &BR::is_semi_transitive));
    CHECK(st == closure_oracle(r, &BR::is_symmetric, &BR::is_semi_transitive));
  }
}

TEST_CASE("st closure is independent of rule order") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto r = random_relation(rng, 1 + trial % 7, 0.25);
    auto a = closure_st(r, true);
    auto b = closure_st(r, false);
    CHECK(a == b);
    CHECK(a.includes(r));
    CHECK(a.is_symmetric());
    CHECK(a.is_semi_transitive());
  }
}

TEST_CASE("composition of monotone maps is monotone") {
  std::mt19937 rng(4);
  int composed = 0;
  for (int trial = 0; trial < 50000 && composed < 200; ++trial) {
    auto r1 = random_relation(rng, 4, 0.3);
    auto r2 = random_relation(rng, 3, 0.7);
    auto r3 = random_relation(rng, 3, 0.7);
    std::uniform_int_distribution<std::size_t> d(0, 2);
    ElementMap f{{d(rng), d(rng), d(rng), d(rng)}};
    ElementMap g{{d(rng), d(rng), d(rng)}};
    if (!is_monotone(f, r1, r2) || !is_monotone(g, r2, r3)) continue;
    ++composed;
    CHECK(is_monotone(f.then(g), r1, r3).monotone);
  }
  CHECK(composed == 200);
}

TEST_CASE(".rel parsing") {
  auto r = parse_relation("# c\nx y\n1 0\n\n0 1\n");
  CHECK(r.relate("x", "x"));
  CHECK(parse_relation(format_relation(r)) == r);
  CHECK_THROWS_AS(parse_relation("x y\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_relation("x y\n1 0\n0 2\n"), ParseError);
  CHECK_THROWS_AS(parse_relation("x x\n1 0\n0 1\n"), ParseError);
  try {
    parse_relation("x y\n1 0\n0 1 1\n");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}
