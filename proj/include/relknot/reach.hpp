#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relknot/moves.hpp"

namespace relknot {

/// Propositional formula over atoms a1..an.
class Wff {
 public:
  enum class Kind { atom, truth, falsity, conj, disj, neg };

  static Wff atom(std::size_t index);  // 1-based
  static Wff truth();
  static Wff falsity();
  static Wff conj(Wff a, Wff b);
  static Wff disj(Wff a, Wff b);
  static Wff neg(Wff a);
  /// Conjunction of a1..an (truth when n = 0).
  static Wff all_of(std::size_t n);

  Kind kind() const { return kind_; }
  /// Largest atom index used.
  std::size_t arity() const;
  std::string to_string() const;

  friend bool eval_wff(const Wff& w, const std::vector<bool>& assignment);

 private:
  Kind kind_ = Kind::truth;
  std::size_t index_ = 0;
  std::shared_ptr<const Wff> a_, b_;
};

/// ArgumentError when the assignment is shorter than the formula's arity.
bool eval_wff(const Wff& w, const std::vector<bool>& assignment);

enum class TheoryKind { always, parity, value_monotone, arc_c1, component_rel };

/// A named permission predicate. value_monotone compares crossing counts.
struct ConditionalTheory {
  TheoryKind kind = TheoryKind::always;
  bool strict = false;

  /// "always" (alias "unconditional"), "parity", "value_monotone[:weak|:strict][,crossing_count]",
  /// "arc_C1", "component_rel"; ArgumentError otherwise.
  static ConditionalTheory parse(const std::string& spec);
  std::string name() const;
};

struct Verdict {
  std::vector<bool> atoms;
  Wff formula;
  bool licensed = false;
};

/// Builds the target of `m` when the predicate needs it and evaluates atoms
/// and formula. ArgumentError when the theory does not fit the mode.
Verdict evaluate(const ConditionalTheory& t, const LabeledDiagram& from, const Move& m);
bool licensed(const ConditionalTheory& t, const LabeledDiagram& from, const Move& m);
/// Candidates of `d` that the theory licenses.
std::vector<Move> licensed_moves(const ConditionalTheory& t, const LabeledDiagram& d);

struct Bounds {
  std::size_t max_crossings = 0;
  std::size_t max_states = 20000;
  std::size_t max_depth = 50;
};

/// Source crossings + 2, 20000 states (or RELKNOT_MAX_STATES), depth 50.
Bounds default_bounds(const LabeledDiagram& source);

struct MoveGraph {
  struct Edge {
    std::size_t from = 0, to = 0;
    Move move;
  };
  std::vector<LabeledDiagram> nodes;  // node 0 is the source
  std::vector<std::string> keys;
  std::vector<std::size_t> depth;
  std::vector<Edge> edges;
  Bounds bounds;
  /// Licensed moves dropped because their target exceeds max_crossings.
  std::size_t beyond_crossings = 0;
  /// True when the state or depth bound cut the search.
  bool truncated = false;

  std::optional<std::size_t> find(const std::string& key) const;
  /// Nodes reachable from `n` (out) or reaching it (in), sorted, including n.
  std::vector<std::size_t> out_set(std::size_t n) const;
  std::vector<std::size_t> in_set(std::size_t n) const;
  std::string status() const { return truncated ? "truncated" : "exhausted"; }
};

/// Breadth-first closure of licensed moves. Nodes are numbered in discovery
/// order and deduplicated by canonical_key.
MoveGraph explore(const ConditionalTheory& t, const LabeledDiagram& source, const Bounds& b);

struct ReachResult {
  bool found = false;
  std::vector<Move> path;
  std::size_t states = 0;
  bool truncated = false;
};

/// Yes with a shortest move path, or no within bounds.
ReachResult reachable(const ConditionalTheory& t, const LabeledDiagram& from,
                      const LabeledDiagram& to, const Bounds& b);

struct Condensation {
  std::vector<std::size_t> class_of;         // node -> class
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // deduplicated, no loops
  std::vector<bool> terminal;                // no outgoing class edge
};

/// Strongly connected components, numbered in order of their least node.
Condensation condense(const MoveGraph& g);

/// Graphviz digraph of the move graph.
std::string to_dot(const MoveGraph& g);

}  // namespace relknot
