#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "relknot/boolterm.hpp"
#include "relknot/diagram.hpp"

namespace relknot {

enum class MoveType { r1_plus, r1_minus, r2_plus, r2_minus, r3 };

std::string to_string(MoveType t);

/// One elementary move at a site of a specific source diagram. Site integers
/// index that diagram's vertices, edges and faces:
///   R1+  {edge, side, first pass under (1) or over (0)}
///   R1-  {crossing}
///   R2+  {over edge, over side, under edge, under side, order}; order is -1
///        for two distinct edges, otherwise both positions lie on one edge side
///        and order 0 pushes the later part over the earlier one, 1 the reverse
///   R2-  {crossing, crossing, face}
///   R3   {face}
struct Move {
  MoveType type = MoveType::r1_plus;
  std::vector<int> site;
  /// Arc that moves (c) and the arcs it passes over (a_i), by name.
  std::string moving;
  std::vector<std::string> passed;
  /// Reductions merge arcs; each pair (x, y) asks x R y in arc mode.
  std::vector<std::pair<std::string, std::string>> merges;
  std::string description;

  friend bool operator==(const Move& a, const Move& b) {
    return a.type == b.type && a.site == b.site;
  }
};

/// Label template over placeholder variables, with its entropy witness.
struct LabelTemplate {
  BoolTerm term;
  std::string witness;
};

/// Slots and placeholders of the default scheme:
///   R1+.piece (a), R1-.merged (x, y), R2+.outer (a), R2+.middle (a, c),
///   R2+.over (c), R2-.merged (u1, m, u2), R2-.over (c),
///   R3.interior (b, a1, a2, a3) with b the bottom strand's interior arc.
struct MoveScheme {
  std::string name;
  std::map<std::string, LabelTemplate> templates;

  /// ArgumentError for an unknown slot.
  const LabelTemplate& at(const std::string& slot) const;

  static MoveScheme default_scheme();
  /// Registered schemes by name ("default"); ArgumentError otherwise.
  static MoveScheme named(const std::string& name);
};

struct EntropyReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks lattice_leq(t, witness) for every template.
EntropyReport check_entropy_decreasing(const MoveScheme& scheme);

enum class Condition { unconditional, arc_c1, component_rel };

std::string to_string(Condition c);
Condition parse_condition(const std::string& s);

/// Every structurally applicable move, in a deterministic order.
std::vector<Move> candidate_moves(const LabeledDiagram& d);

/// Permission predicate: a_i R c for each passed arc plus merge pairs (arc_c1),
/// comp(a_i) R comp(c) (component_rel), or always (unconditional).
/// ArgumentError when the condition does not fit the diagram's mode.
bool permitted(const LabeledDiagram& d, const Move& m, Condition c);

std::vector<Move> enumerate_moves(const LabeledDiagram& d, Condition c);

/// Label carried by a post-move arc, with the pre-move arc dominating it.
struct ArcLabel {
  std::string arc;
  BoolTerm term;
  std::string witness;
};

struct MoveResult {
  LabeledDiagram diagram;
  std::vector<ArcLabel> labels;  // in the new diagram's arc order
};

/// PreconditionError unless `m` is one of candidate_moves(d).
MoveResult apply_move_traced(const LabeledDiagram& d, const Move& m, const MoveScheme& scheme);
LabeledDiagram apply_move(const LabeledDiagram& d, const Move& m,
                          const MoveScheme& scheme = MoveScheme::default_scheme());

/// Unchecked variants for a move taken verbatim from candidate_moves(d).
MoveResult apply_candidate_traced(const LabeledDiagram& d, const Move& m, const MoveScheme& scheme);
LabeledDiagram apply_candidate(const LabeledDiagram& d, const Move& m,
                               const MoveScheme& scheme = MoveScheme::default_scheme());

/// Change in crossing count made by a move of this type.
int crossing_delta(MoveType t);

}  // namespace relknot
