#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace relknot {

/// A finite binary relation on an ordered list of distinct element names.
///
/// Any bit pattern is a valid relation: no reflexivity, symmetry or
/// transitivity is assumed. Iteration order is always declaration order.
class BinaryRelation {
 public:
  BinaryRelation() = default;

  /// The empty relation on `elements`. Throws ArgumentError on duplicates.
  explicit BinaryRelation(std::vector<std::string> elements);

  /// `rows[i][j]` nonzero iff element i relates to element j.
  BinaryRelation(std::vector<std::string> elements, const std::vector<std::vector<int>>& rows);

  static BinaryRelation full(std::vector<std::string> elements);

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& name(std::size_t i) const { return elements_.at(i); }

  /// Index of `name`; throws NameError when absent.
  std::size_t index_of(std::string_view name) const;
  std::optional<std::size_t> find(std::string_view name) const;

  bool at(std::size_t i, std::size_t j) const { return bits_[i * elements_.size() + j] != 0; }
  void set(std::size_t i, std::size_t j, bool value = true) {
    bits_[i * elements_.size() + j] = value ? 1 : 0;
  }

  /// Bit for the named pair; throws NameError for unknown names.
  bool relate(std::string_view x, std::string_view y) const;

  std::size_t pair_count() const;

  /// True iff every pair of `other` is also in this relation. Both must share
  /// the same element list.
  bool includes(const BinaryRelation& other) const;

  bool is_reflexive() const;
  bool is_symmetric() const;
  bool is_transitive() const;
  /// Transitivity restricted to triples of pairwise-distinct elements.
  bool is_semi_transitive() const;

  /// The relation restricted to (and reindexed by) `keep`, in that order.
  BinaryRelation restricted(const std::vector<std::size_t>& keep) const;

  friend bool operator==(const BinaryRelation& a, const BinaryRelation& b) {
    return a.elements_ == b.elements_ && a.bits_ == b.bits_;
  }

 private:
  std::vector<std::string> elements_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<char> bits_;
};

/// Dominance preorder of a relation together with its equivalence classes and
/// the induced relation on the classes.
struct Preorder {
  BinaryRelation base;
  /// dominance.at(a, b) iff a dominates b: every outgoing edge of a is an
  /// outgoing edge of b and every incoming edge of a is an incoming edge of b.
  BinaryRelation dominance;
  /// Classes of mutually dominating elements, each listed in declaration
  /// order; classes ordered by their first member.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  /// Induced relation on classes, each class named by its lexicographically
  /// least member.
  BinaryRelation quotient;

  bool dominates(std::size_t a, std::size_t b) const { return dominance.at(a, b); }
  bool equivalent(std::size_t a, std::size_t b) const { return class_of[a] == class_of[b]; }
};

Preorder dominance(const BinaryRelation& r);

enum class ClosureKind { symmetric, semi_transitive, st };

/// Least superset of `r` with the requested property.
BinaryRelation closure(const BinaryRelation& r, ClosureKind kind);

/// Least symmetric and semi-transitive superset, alternating the two rules in
/// the given order until nothing changes.
BinaryRelation closure_st(const BinaryRelation& r, bool symmetric_first);

/// Total map between element lists, stored by index.
struct ElementMap {
  std::vector<std::size_t> image;

  static ElementMap identity(std::size_t n);
  /// Builds the map from name pairs; every source element must be mapped.
  static ElementMap from_names(const BinaryRelation& source, const BinaryRelation& target,
                               const std::vector<std::pair<std::string, std::string>>& pairs);

  ElementMap then(const ElementMap& next) const;
};

struct MonotoneCheck {
  bool monotone = true;
  /// First related source pair (declaration order) whose images are unrelated.
  std::optional<std::pair<std::size_t, std::size_t>> witness;

  explicit operator bool() const { return monotone; }
};

MonotoneCheck is_monotone(const ElementMap& f, const BinaryRelation& source,
                          const BinaryRelation& target);

/// `.rel` text: a line of names, then one row of 0/1 per element; lines whose
/// first non-blank character is `#` are comments.
BinaryRelation parse_relation(std::string_view text);
BinaryRelation read_relation_file(const std::string& path);
std::string format_relation(const BinaryRelation& r);

/// Reads a whole file into a string; throws ArgumentError if unreadable.
std::string read_text_file(const std::string& path);

}  // namespace relknot
