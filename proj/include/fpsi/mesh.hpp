#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fpsi/types.hpp"

namespace fpsi {

enum class RegionTag { Fluid, Porous };

/// Labels for external boundary parts and the fluid/porous interface.
enum class BoundaryLabel {
  GammaF,          // fluid no-slip wall
  GammaPDirichlet, // porous pressure boundary, p = 0 (natural in mixed form)
  GammaPNeumann,   // porous no-flow boundary, u.n = 0
  Interface,       // fluid/porous interface
  InletF,          // fluid traction boundary driven by an inlet pressure
  OutletP          // porous pressure boundary driven by an outlet pressure
};

const char* label_name(BoundaryLabel label);
std::optional<BoundaryLabel> label_from_name(const std::string& name);

struct BoundaryEdge {
  int a = -1, b = -1; // node indices, oriented with the owning triangle (CCW)
  BoundaryLabel label = BoundaryLabel::GammaF;
};

struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
};

/// Retained for structured grids so nested-mesh point location stays index
/// arithmetic instead of a search structure.
struct StructuredInfo {
  Rect rect;
  int nx = 0, ny = 0;
};

struct SubMesh {
  RegionTag region = RegionTag::Fluid;
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles; // CCW
  std::vector<BoundaryEdge> boundary_edges;
  std::optional<StructuredInfo> structured;

  // Connectivity derived by finalize_mesh().
  std::vector<std::array<int, 2>> edges;    // unique undirected edges, a < b
  std::vector<std::array<int, 3>> tri_edges; // per-triangle global edge ids
  std::vector<std::array<int, 2>> edge_tris; // adjacent triangles, -1 on boundary
  std::vector<int> bedge_tri;                // owning triangle per boundary edge
  std::vector<int> bedge_edge;               // global edge id per boundary edge

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  double triangle_area(int t) const;
  double area() const;
  double diameter() const; // bounding-box diagonal
};

/// Per-side labels used by build_structured_mesh.
struct SideLabels {
  BoundaryLabel left, right, bottom, top;
};

SideLabels default_side_labels(RegionTag region);

/// Uniform nx-by-ny grid of rect, each cell split by the lower-left to
/// upper-right diagonal. Nodes are ordered lexicographically (x fastest);
/// triangles cell-major with the lower triangle first.
SubMesh build_structured_mesh(const Rect& rect, int nx, int ny, RegionTag region,
                              const SideLabels& sides);
SubMesh build_structured_mesh(const Rect& rect, int nx, int ny, RegionTag region);

/// Builds derived connectivity and checks all mesh invariants:
/// positive triangle areas, boundary edges owned by exactly one triangle,
/// and boundary edges covering exactly the topological boundary.
void finalize_mesh(SubMesh& mesh);

/// Parses the line-oriented ASCII mesh format. Errors carry the 1-based
/// line number of the offending record.
SubMesh import_mesh(const std::string& text);

/// Canonical writer for the ASCII format; import_mesh(export_mesh(m))
/// reproduces m and the text round-trips byte-for-byte.
std::string export_mesh(const SubMesh& mesh);

/// One straight piece of the interface common refinement. Each segment lies
/// inside exactly one fluid boundary edge and one porous boundary edge.
struct InterfaceSegment {
  Vec2 p0, p1;
  double length = 0;
  int fluid_bedge = -1, porous_bedge = -1;
  int fluid_tri = -1, porous_tri = -1;
  int porous_edge = -1; // global edge id in the porous mesh
  int lam_dof = -1;     // multiplier dof of the owning porous interface edge
  Vec2 n_f, n_p, t_f;   // unit normals/tangent, n_p = -n_f, n_f . t_f = 0
};

struct InterfaceGeometry {
  std::vector<InterfaceSegment> segments;
  std::vector<int> lam_edges; // multiplier dof -> porous global edge id
  double length = 0;

  int n_lam() const { return static_cast<int>(lam_edges.size()); }
};

/// Pairs the Interface-labeled edges of both meshes into a common refinement.
/// Matching interfaces (edge-for-edge coincidence) may be any shape;
/// non-matching interfaces must lie on a straight line. tol is relative to
/// the interface length.
InterfaceGeometry pair_interface(const SubMesh& fluid, const SubMesh& porous,
                                 double tol = 1e-10);

} // namespace fpsi
