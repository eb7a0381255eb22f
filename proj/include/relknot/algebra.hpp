#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relknot/relation.hpp"

namespace relknot {

enum class AlgebraKind { rack, quandle, partial_rack_rel, partial_quandle_rel };

std::string to_string(AlgebraKind k);
AlgebraKind parse_algebra_kind(std::string_view s);

enum class Op { star, bar };

/// Finite set with partial operations `*` and `bar*` and a relation. Table
/// entries are element indices or kUndefined.
class PartialAlgebra {
 public:
  static constexpr int kUndefined = -1;
  using Table = std::vector<std::vector<int>>;

  PartialAlgebra() = default;
  /// Throws ArgumentError when shapes disagree or entries are out of range.
  PartialAlgebra(std::vector<std::string> elements, Table star, Table bar, BinaryRelation rel,
                 AlgebraKind kind);

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& name(std::size_t i) const { return elements_.at(i); }
  std::size_t index_of(std::string_view name) const { return rel_.index_of(name); }

  const BinaryRelation& rel() const { return rel_; }
  AlgebraKind kind() const { return kind_; }
  const Table& table(Op op) const { return op == Op::star ? star_ : bar_; }

  bool defined(std::size_t x, std::size_t y, Op op) const { return table(op)[x][y] >= 0; }
  /// Table lookup by index; PartialityError when undefined.
  std::size_t apply(std::size_t x, std::size_t y, Op op) const;
  std::optional<std::size_t> try_apply(std::size_t x, std::size_t y, Op op) const;

  /// `*` and `bar*` agree on every related pair.
  bool involutory() const;

  PartialAlgebra with_kind(AlgebraKind k) const;

 private:
  std::vector<std::string> elements_;
  Table star_;
  Table bar_;
  BinaryRelation rel_;
  AlgebraKind kind_ = AlgebraKind::quandle;
};

/// Named lookup; PartialityError naming the pair and operation if undefined.
std::string apply_op(const PartialAlgebra& a, std::string_view x, std::string_view y, Op which);

struct AxiomViolation {
  std::string axiom;                  // e.g. "PQ4", "Q3", "totality"
  std::vector<std::size_t> elements;  // the offending instance
  std::string detail;
};

struct AxiomReport {
  AlgebraKind kind;
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
  /// One line per violation, elements written by name.
  std::string describe(const PartialAlgebra& a) const;
};

/// Exhaustive check of the axiom set belonging to `kind` (the algebra's own
/// claim when omitted). quandle: Q1-Q3; rack: Q2-Q3 (both also demand total
/// tables); partial_quandle_rel: PQ1-PQ5; partial_rack_rel: PQ1, PQ2, PQ4, PQ5.
AxiomReport check_axioms(const PartialAlgebra& a);
AxiomReport check_axioms(const PartialAlgebra& a, AlgebraKind kind);

/// Conditions for arbitrary-defect homology of a total operation: x ~ x*y
/// for all x, y, and right distributivity of `*` on all triples.
AxiomReport check_defect_operation(const PartialAlgebra& a);

/// The four right-distributivity variants mixing `*` and `bar*`, each
/// evaluated over all triples with xRy, xRz, yRz. An undefined product makes
/// the variant fail.
std::array<bool, 4> distributivity_variants(const PartialAlgebra& a);

struct StandardSpec {
  enum class Family { dihedral, core, conj, gset_rack } family;
  int n = 0;
  /// Exponent for conj, generator for gset_rack.
  int k = 1;
};

/// Parses "dihedral(n)", "core(n)", "conj(n,k)", "gset(n,g)".
StandardSpec parse_standard_spec(std::string_view s);

/// Total algebra on {0..n-1} (cyclic group written additively) with the full
/// relation. ArgumentError for n < 1.
PartialAlgebra make_standard(const StandardSpec& spec);

/// `.alg` text. Blocks are separated by lines holding `%`:
///   1. optional `kind: <kind>` line, then the element names;
///   2. the star table, one row per element, `-` for undefined;
///   3. optional bar table (synthesized from star when absent);
///   4. optional relation matrix (full when absent).
/// A block may start with a `star:`, `bar:` or `rel:` line to label it, which
/// allows giving a relation without a bar table. Without a relation block the
/// default kind is quandle, otherwise partial_quandle_rel.
PartialAlgebra parse_algebra(std::string_view text);
PartialAlgebra read_algebra_file(const std::string& path);
std::string format_algebra(const PartialAlgebra& a);

/// Bar table solving (x*y) bar y = x on licensed pairs; ArgumentError if
/// some column of `star` is not injective on {x | x R y}.
PartialAlgebra::Table synthesize_bar(const PartialAlgebra::Table& star, const BinaryRelation& rel);

}  // namespace relknot
