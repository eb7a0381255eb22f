#pragma once

// Random diagrams built by unconditional move walks from the fixtures.

#include <random>
#include <string>
#include <vector>

#include "relknot/moves.hpp"
#include "support.hpp"

namespace testing_support {

inline const std::vector<std::string>& seed_diagrams() {
  static const std::vector<std::string> files = {"unknot.pd", "kink.pd", "hopf.pd",
                                                 "trefoil.pd", "two_loops.pd", "r3.pd"};
  return files;
}

inline relknot::LabeledDiagram load_diagram(const std::string& name) {
  return relknot::read_diagram_file(fixture(name));
}

/// Arc-mode copy carrying the given relation bits on the diagram's arcs.
inline relknot::LabeledDiagram with_arc_relation(relknot::LabeledDiagram d,
                                                 const relknot::BinaryRelation& bits) {
  relknot::BinaryRelation r(d.diagram.arc_names());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) r.set(i, j, bits.at(i, j));
  d.mode = relknot::Mode::arc_relation;
  d.rel = r;
  return d;
}

inline relknot::Move pick(std::mt19937& rng, const std::vector<relknot::Move>& ms) {
  return ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng)];
}

/// Up to `steps` random unconditional moves from a random seed fixture,
/// staying at or below `max_crossings`. The relation is full on arcs.
inline relknot::LabeledDiagram random_diagram(std::mt19937& rng, std::size_t max_crossings = 6,
                                              int steps = 4) {
  const auto& files = seed_diagrams();
  auto d = load_diagram(files[std::uniform_int_distribution<std::size_t>(0, files.size() - 1)(rng)]);
  d = with_arc_relation(d, relknot::BinaryRelation::full(d.diagram.arc_names()));
  int n = std::uniform_int_distribution<int>(0, steps)(rng);
  for (int i = 0; i < n; ++i) {
    std::vector<relknot::Move> ok;
    for (auto& m : relknot::candidate_moves(d)) {
      int delta = m.type == relknot::MoveType::r1_plus ? 1 : m.type == relknot::MoveType::r2_plus ? 2 : 0;
      if (d.diagram.crossing_count() + delta <= max_crossings) ok.push_back(m);
    }
    if (ok.empty()) break;
    d = relknot::apply_move(d, pick(rng, ok));
  }
  return d;
}

}  // namespace testing_support
