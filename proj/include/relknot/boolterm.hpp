#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "relknot/relation.hpp"

namespace relknot {

/// Immutable Boolean term over variable names. Copies share structure.
class BoolTerm {
 public:
  enum class Kind { var, zero, one, meet, join, negation };

  /// Defaults to the constant 0.
  BoolTerm();

  static BoolTerm var(std::string name);
  static BoolTerm zero();
  static BoolTerm one();
  static BoolTerm meet(BoolTerm a, BoolTerm b);
  static BoolTerm join(BoolTerm a, BoolTerm b);
  static BoolTerm negate(BoolTerm a);
  /// Left-nested meet/join of a nonempty list.
  static BoolTerm meet_all(const std::vector<BoolTerm>& ts);
  static BoolTerm join_all(const std::vector<BoolTerm>& ts);

  Kind kind() const;
  /// Variable name; empty for other kinds.
  const std::string& name() const;
  /// Operands: `left` for negation, `left`/`right` for meet and join.
  const BoolTerm& left() const;
  const BoolTerm& right() const;

  /// Distinct variables, sorted.
  std::vector<std::string> variables() const;
  /// True when built from variables, constants, meets and joins only.
  bool is_lattice() const;
  bool has_constants() const;

  /// Evaluates with `value(name)` supplying each variable's bit.
  bool evaluate(const std::function<bool(const std::string&)>& value) const;

  /// Replaces variables by terms; variables absent from `map` stay.
  BoolTerm substitute(const std::map<std::string, BoolTerm>& map) const;

  /// Minimal-parenthesis rendering in the parse grammar.
  std::string to_string() const;

  /// Structural equality.
  friend bool operator==(const BoolTerm& a, const BoolTerm& b);

 private:
  struct Node;
  explicit BoolTerm(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

/// Grammar: t ::= name | 0 | 1 | ( t ) | !t | t & t | t | t, with `!` binding
/// tightest, then `&`, then `|`; binary operators associate to the left.
/// Names are runs of letters, digits, `_`, `.`, `'` and `:` that are not a bare
/// `0` or `1`. Errors are ParseError with a 1-based column.
BoolTerm parse_term(std::string_view text);

/// Maximum number of distinct variables for truth-table based decisions.
inline constexpr std::size_t kMaxTruthTableVars = 24;

/// Extension of `r` to terms: first `a R p` for every generator `a` by
/// evaluating p at the row of `a`, then `q R p` by evaluating q at those bits.
/// Unknown variables raise NameError.
bool eval_rel(const BinaryRelation& r, const BoolTerm& q, const BoolTerm& p);

/// Element subsets as membership masks over `r.elements()`.
using ElementSet = std::vector<bool>;

enum class SetSide { lower, upper };

/// lower: {y in F | t R y}; upper: {y | y R t}, which needs F to be every
/// element (ArgumentError otherwise). Computed by unions, intersections and
/// complements relative to F.
ElementSet eval_sets(const BinaryRelation& r, const BoolTerm& t, const ElementSet& f,
                     SetSide side);

/// Truth table of `t` over `vars` (bit k of the row index is vars[k]).
/// CapacityError beyond kMaxTruthTableVars variables.
std::vector<bool> truth_table(const BoolTerm& t, const std::vector<std::string>& vars);

/// Boolean equivalence by truth tables.
bool equivalent(const BoolTerm& p, const BoolTerm& q);

/// p <= q in the free distributive lattice. Lattice terms denote monotone
/// Boolean functions and the free distributive lattice embeds faithfully in
/// them, so the order is pointwise comparison of truth tables. ArgumentError
/// when either term contains a negation.
bool lattice_leq(const BoolTerm& p, const BoolTerm& q);

}  // namespace relknot
