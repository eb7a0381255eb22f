#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relknot/relation.hpp"

namespace relknot {

/// Oriented link diagram stored as a combinatorial map on the sphere.
///
/// Crossings have four ports in counterclockwise order: port 0 is the incoming
/// under-strand and port 2 the outgoing one. A positive crossing has its
/// over-strand entering at port 3 and leaving at port 1; a negative one enters
/// at 1 and leaves at 3. A crossing-free component is a two-port point whose
/// single edge runs from port 1 back to port 0.
///
/// Names live on edges: every edge carries the name of its arc and of its
/// component, and the derived arcs and components check that these agree.
class Diagram {
 public:
  struct Vertex {
    bool crossing = true;
    int sign = 1;
    std::array<int, 4> edge{-1, -1, -1, -1};
    std::string id;

    int degree() const { return crossing ? 4 : 2; }
  };
  struct Edge {
    int tail = -1, tail_port = -1;
    int head = -1, head_port = -1;
    std::string arc;
    std::string component;
  };
  struct Arc {
    std::string name;
    std::vector<int> edges;  // strand order
    std::size_t component = 0;
  };
  struct Component {
    std::string name;
    std::vector<int> edges;  // strand order, starting at the least edge index
  };
  /// Side 0 is the left of an edge's direction, 1 the right.
  struct Side {
    int edge = 0;
    int side = 0;
    friend bool operator==(const Side&, const Side&) = default;
  };
  struct Face {
    std::vector<Side> sides;  // boundary walk with the face on the left
    std::size_t piece = 0;
  };

  Diagram() = default;
  /// Validates pairing, orientation, names and planarity, then derives arcs,
  /// components and faces. ParseError on any inconsistency.
  static Diagram from_parts(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Component>& components() const { return components_; }
  const std::vector<Face>& faces() const { return faces_; }

  std::size_t crossing_count() const { return crossing_count_; }
  std::size_t free_loop_count() const { return vertices_.size() - crossing_count_; }
  /// Connected pieces of the shadow; each free loop is its own piece.
  std::size_t piece_count() const { return piece_count_; }
  std::size_t piece_of_vertex(std::size_t v) const { return piece_of_vertex_[v]; }

  std::size_t arc_of_edge(std::size_t e) const { return arc_of_edge_[e]; }
  std::size_t component_of_edge(std::size_t e) const { return component_of_edge_[e]; }
  /// Face to the given side of an edge.
  std::size_t face_of(std::size_t e, int side) const { return face_of_side_[2 * e + side]; }

  std::optional<std::size_t> find_arc(std::string_view name) const;
  std::optional<std::size_t> find_component(std::string_view name) const;
  std::vector<std::string> arc_names() const;
  std::vector<std::string> component_names() const;

  /// Crossing vertex indices in storage order.
  std::vector<std::size_t> crossings() const;

  static int over_in_port(int sign) { return sign > 0 ? 3 : 1; }
  static int over_out_port(int sign) { return sign > 0 ? 1 : 3; }

  std::size_t under_in_arc(std::size_t v) const;
  std::size_t under_out_arc(std::size_t v) const;
  std::size_t over_arc(std::size_t v) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Arc> arcs_;
  std::vector<Component> components_;
  std::vector<Face> faces_;
  std::size_t crossing_count_ = 0;
  std::size_t piece_count_ = 0;
  std::vector<std::size_t> piece_of_vertex_;
  std::vector<std::size_t> arc_of_edge_;
  std::vector<std::size_t> component_of_edge_;
  std::vector<std::size_t> face_of_side_;
};

enum class Mode { arc_relation, component_relation };

std::string to_string(Mode m);

struct LabeledDiagram {
  Diagram diagram;
  Mode mode = Mode::arc_relation;
  /// On arc names (arc mode) or component names (component mode); the element
  /// order is free but the name set must match exactly.
  BinaryRelation rel;

  /// Throws NameError when the relation's elements do not match the names.
  void validate() const;
  /// The relation itself in arc mode, the block expansion in component mode.
  /// Elements follow the diagram's arc order.
  BinaryRelation arc_relation() const;
};

/// `.pd` text. Edge tokens are `arc` or `arc/k`; arc names are the part
/// before `/`. Headers `components:` (names, or `Name:arc` bindings) and
/// `loops:` (a count or names) precede the crossing lines; an optional `%`
/// section starts with `on: arcs` or `on: components` followed by a `.rel`
/// block. Without it the diagram carries the full arc relation.
LabeledDiagram parse_diagram(std::string_view text);
LabeledDiagram read_diagram_file(const std::string& path);
std::string format_diagram(const LabeledDiagram& d);

/// Block expansion of a relation on component names.
BinaryRelation induce_arc_relation(const Diagram& d, const BinaryRelation& components);

enum class CrossingClass { good, bad };

/// Per crossing (in `crossings()` order): good iff under-component R
/// over-component.
std::vector<CrossingClass> classify_crossings(const Diagram& d,
                                              const BinaryRelation& components);

/// Canonical key of the shadow, orientation and signs, independent of vertex,
/// edge and arc numbering. Equal keys mean isomorphic oriented diagrams on the
/// sphere.
std::string shadow_key(const Diagram& d);
/// Shadow key plus the relation bits in canonical arc order (arc mode) or the
/// component names and relation (component mode).
std::string canonical_key(const LabeledDiagram& d);

}  // namespace relknot
