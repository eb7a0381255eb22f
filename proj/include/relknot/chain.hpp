#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relknot/algebra.hpp"
#include "relknot/relation.hpp"
#include "relknot/snf.hpp"

namespace relknot {

using Tuple = std::vector<std::uint32_t>;

/// Missing left-to-right related pairs: n(n-1)/2 minus |{i<j : w_i R w_j}|.
std::size_t defect(const BinaryRelation& r, const Tuple& w);

/// True when two consecutive entries coincide.
bool is_degenerate(const Tuple& w);

enum class Theory { rel_defect, rack, quandle, partial_rack, partial_quandle, general_defect };

std::string to_string(Theory t);
/// Accepts rel, rack, quandle, prack, pquandle, gendefect and the enum names.
Theory parse_theory(std::string_view s);

/// Lexicographically sorted tuples of one degree.
struct TupleBasis {
  int degree = 0;
  std::vector<Tuple> tuples;
  /// Admission rule in words, e.g. "defect <= 1, nondegenerate".
  std::string criterion;

  std::size_t size() const { return tuples.size(); }
  std::optional<std::size_t> find(const Tuple& t) const;
};

/// Element of C_n: tuple -> nonzero coefficient.
struct Chain {
  int degree = 0;
  std::map<Tuple, BigInt> terms;

  void add(const Tuple& t, const BigInt& c);
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const Chain& a, const Chain& b) {
    return a.degree == b.degree && a.terms == b.terms;
  }
  Chain operator-(const Chain& o) const;
  Chain operator+(const Chain& o) const;
};

/// Parses "-(5,4) - (3,5) + 2(1,3)" (or "0" together with an explicit degree)
/// against element names. ParseError on bad syntax, NameError on unknown names,
/// ArgumentError on mixed tuple lengths.
Chain parse_chain(std::string_view text, const std::vector<std::string>& elements,
                  std::optional<int> degree = std::nullopt);
std::string format_chain(const Chain& c, const std::vector<std::string>& elements);

struct AbelianGroup {
  std::size_t free_rank = 0;
  /// Factors > 1, each dividing the next.
  std::vector<BigInt> invariant_factors;
  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

/// "Z^r + Z/d1 + ..." with "0" for the trivial group.
std::string to_string(const AbelianGroup& g);

struct BoundaryCertificate {
  bool is_boundary = false;
  std::optional<Chain> witness;
  /// Least m >= 1 with m*c a boundary; 0 encodes infinity.
  BigInt order;
};

class ChainComplex {
 public:
  /// Defect-k complex of a relation with the deletion-only boundary.
  static ChainComplex for_relation(const BinaryRelation& r, int k, int max_degree);
  /// Rack-type complexes; `k` is only used by general_defect. Throws AxiomError
  /// when the boundary would leave the basis, when a needed product is
  /// undefined, when the general-defect conditions fail, or when the
  /// boundary of a boundary is nonzero. ArgumentError for rel_defect.
  static ChainComplex for_algebra(const PartialAlgebra& a, Theory theory, int max_degree,
                                  int k = 0);

  Theory theory() const { return theory_; }
  int max_degree() const { return max_degree_; }
  int defect_bound() const { return defect_bound_; }
  const std::vector<std::string>& elements() const { return elements_; }
  bool is_quotient() const { return quotient_; }

  /// Degree 0..max_degree.
  const TupleBasis& basis(int n) const;
  /// Matrix of boundary_n : C_n -> C_{n-1}, for n in 1..max_degree.
  const SparseMatrix& boundary_matrix(int n) const;

  /// Image of a tuple under the projection onto the basis: nullopt for
  /// degenerate tuples in a quotient complex; ArgumentError if outside.
  std::optional<std::size_t> locate(const Tuple& t) const;
  /// Drops degenerate terms in quotient complexes; ArgumentError if a term
  /// lies outside the chain group.
  Chain project(const Chain& c) const;

  /// Invariant factors of boundary_n (cached, thread-safe).
  const SmithFactors& factors(int n) const;

 private:
  ChainComplex() = default;
  void check_square_zero() const;

  Theory theory_ = Theory::rel_defect;
  int max_degree_ = 0;
  int defect_bound_ = 0;
  bool quotient_ = false;
  std::vector<std::string> elements_;
  std::shared_ptr<const BinaryRelation> rel_;  // null when tuples are unrestricted
  std::vector<TupleBasis> bases_;
  std::vector<SparseMatrix> boundaries_;  // index n; entries 0 unused
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// Matrix-vector product; ArgumentError for degree 0 or out-of-range degree.
Chain boundary(const ChainComplex& c, const Chain& x);

/// H_n for 0 <= n < max_degree (ArgumentError otherwise).
AbelianGroup homology(const ChainComplex& c, int n);
/// H_lo .. H_hi, computing boundary factors of different degrees in parallel.
std::vector<AbelianGroup> homology_range(const ChainComplex& c, int lo, int hi);

/// Solves boundary_{n+1} x = c over the integers. ArgumentError if c is not a
/// cycle or degree n+1 is not stored; CapacityError if the dense solve would
/// exceed the size budget.
BoundaryCertificate express_as_boundary(const ChainComplex& c, const Chain& x);
BigInt order_in_homology(const ChainComplex& c, const Chain& x);

}  // namespace relknot
