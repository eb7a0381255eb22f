#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relknot/algebra.hpp"
#include "relknot/chain.hpp"
#include "relknot/diagram.hpp"

namespace relknot {

enum class ColoringType { I, II };

std::string to_string(ColoringType t);
/// "I", "II", "1", "2"; ArgumentError otherwise.
ColoringType parse_coloring_type(std::string_view s);

/// Element index per arc, in the diagram's arc order.
struct Coloring {
  std::vector<std::size_t> color;
  ColoringType type = ColoringType::II;
};

/// Rules, with f the coloring and R the algebra relation:
///   every related arc pair (a, b) of the induced arc relation has f(a) R f(b);
///   good positive crossing: f(under_out) = f(under_in) * f(over);
///   good negative crossing: f(under_in) = f(under_out) * f(over);
///   bad crossing, type II only: f(under_in) = f(under_out).
/// Checks the relation and component mode but not the algebra axioms.
bool is_coloring(const LabeledDiagram& d, const PartialAlgebra& a,
                 const std::vector<std::size_t>& color, ColoringType type);

/// All colorings in lexicographic order of the color vectors, with arcs
/// ordered by component and then by arc order. ArgumentError unless the
/// diagram is labeled on components; AxiomError when the algebra fails the
/// partial quandle with relation axioms.
std::vector<Coloring> enumerate_colorings(const LabeledDiagram& d, const PartialAlgebra& a,
                                          ColoringType type);
std::size_t count_colorings(const LabeledDiagram& d, const PartialAlgebra& a, ColoringType type);

/// Lines `arc = element`; every arc exactly once. The type is the caller's.
Coloring parse_coloring(std::string_view text, const LabeledDiagram& d, const PartialAlgebra& a,
                        ColoringType type = ColoringType::II);
std::string format_coloring(const Coloring& c, const LabeledDiagram& d, const PartialAlgebra& a);

/// Per component, in component order: the sum of sign * (x, y) over good
/// crossings whose under-arcs lie on it, x the under color on the side the
/// over-arc's normal points away from and y the over color, projected into
/// `cx` (degree 2). ArgumentError unless `c` is a valid type II coloring; the
/// result is checked to be a cycle.
std::vector<std::pair<std::string, Chain>> cycle_from_coloring(const LabeledDiagram& d,
                                                               const PartialAlgebra& a,
                                                               const Coloring& c,
                                                               const ChainComplex& cx);

enum class Indication { consistent, obstructed };

std::string to_string(Indication i);

/// Obstructed iff the coloring counts differ. ArgumentError unless both
/// diagrams are labeled on the same components with the same relation.
Indication coloring_indicator(const LabeledDiagram& d1, const LabeledDiagram& d2,
                              const PartialAlgebra& a, ColoringType type);

}  // namespace relknot
