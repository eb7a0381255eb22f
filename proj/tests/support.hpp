#pragma once

// Shared helpers for the test binaries: fixture paths and seeded generators.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "relknot/boolterm.hpp"
#include "relknot/relation.hpp"

namespace testing_support {

inline std::string fixture(const std::string& name) {
  return std::string(RELKNOT_FIXTURES) + "/" + name;
}

inline std::vector<std::string> names(std::size_t n, const std::string& stem = "e") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

inline relknot::BinaryRelation random_relation(std::mt19937& rng, std::size_t n,
                                               double density = 0.5) {
  std::bernoulli_distribution bit(density);
  relknot::BinaryRelation r(names(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.set(i, j, bit(rng));
  return r;
}

struct TermShape {
  bool negation = true;
  bool constants = false;
  bool meet = true;
  bool join = true;
};

inline relknot::BoolTerm random_term(std::mt19937& rng, const std::vector<std::string>& vars,
                                     int depth, TermShape shape = {}) {
  using relknot::BoolTerm;
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<std::size_t> var(0, vars.size() - 1);
  int k = pick(rng);
  if (depth <= 0 || k < 3) {
    if (shape.constants && k == 0) return BoolTerm::zero();
    if (shape.constants && k == 1) return BoolTerm::one();
    return BoolTerm::var(vars[var(rng)]);
  }
  if (shape.negation && k == 3) return BoolTerm::negate(random_term(rng, vars, depth - 1, shape));
  bool use_meet = shape.meet && (!shape.join || k % 2 == 0);
  auto a = random_term(rng, vars, depth - 1, shape);
  auto b = random_term(rng, vars, depth - 1, shape);
  return use_meet ? BoolTerm::meet(a, b) : BoolTerm::join(a, b);
}

}  // namespace testing_support

#include "relknot/algebra.hpp"

namespace testing_support {

// Random structure satisfying PQ1, PQ2 and PQ4: each column of * permutes every
// dominance class of related elements, bar* is the inverse permutation. Right
// distributivity may or may not hold. Unlicensed entries are left undefined.
inline relknot::PartialAlgebra random_pq124(std::mt19937& rng, std::size_t n,
                                            double density = 0.6) {
  using relknot::PartialAlgebra;
  // Elements share rows and columns through a random type map, so dominance
  // classes are often larger than one element.
  std::uniform_int_distribution<std::size_t> type(0, (n + 1) / 2 - 1);
  std::vector<std::size_t> t(n);
  for (auto& v : t) v = type(rng);
  auto shape = random_relation(rng, n, density);
  relknot::BinaryRelation rel(names(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) rel.set(a, b, shape.at(t[a], t[b]));
  auto dom = relknot::dominance(rel);
  PartialAlgebra::Table star(n, std::vector<int>(n, PartialAlgebra::kUndefined));
  auto bar = star;
  for (std::size_t y = 0; y < n; ++y)
    for (const auto& cls : dom.classes) {
      if (!rel.at(cls.front(), y)) continue;
      auto perm = cls;
      if (rng() % 3 != 0) std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t k = 0; k < cls.size(); ++k) {
        star[cls[k]][y] = static_cast<int>(perm[k]);
        bar[perm[k]][y] = static_cast<int>(cls[k]);
      }
    }
  return PartialAlgebra(rel.elements(), star, bar, rel,
                        relknot::AlgebraKind::partial_rack_rel);
}

// Random partial rack: retries random_pq124 until PQ5 holds.
inline relknot::PartialAlgebra random_partial_rack(std::mt19937& rng, std::size_t n,
                                                   double density = 0.6) {
  for (;;) {
    auto a = random_pq124(rng, n, density);
    if (relknot::check_axioms(a).ok()) return a;
  }
}

}  // namespace testing_support
