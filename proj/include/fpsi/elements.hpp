#pragma once

#include <array>
#include <set>
#include <vector>

#include "fpsi/mesh.hpp"
#include "fpsi/types.hpp"

namespace fpsi {

enum class SpaceKind {
  VectorP1Bubble, // Stokes velocity (MINI)
  ScalarP1,       // Stokes pressure
  RT0,            // Darcy velocity
  ScalarP0,       // Darcy pressure
  VectorP1,       // displacement
  InterfaceP0     // interface multiplier
};

struct Space {
  SpaceKind kind{};
  const SubMesh* mesh = nullptr;
  int dof_count = 0;
};

Space make_space(SpaceKind kind, const SubMesh& mesh,
                 const InterfaceGeometry* gamma = nullptr);

/// Triangle quadrature in barycentric coordinates; weights sum to the
/// reference-triangle area 1/2 and scale by 2*|T| on physical triangles.
struct QuadratureRule {
  MatX points; // n x 3 barycentric coordinates
  VecX weights;
  int degree = 0;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Positive-weight interior-point rule exact at least to `degree` on
/// triangles, degree in 1..6.
QuadratureRule quadrature_rule(int degree);

/// Gauss rule on [0,1] for interface segments (3 points, degree 5).
struct SegmentRule {
  VecX points;
  VecX weights; // sum to 1
  int size() const { return static_cast<int>(weights.size()); }
};
SegmentRule segment_rule();

/// Affine geometry of one triangle: physical vertices, area, constant
/// barycentric gradients, and barycentric <-> physical maps.
struct TriGeom {
  Vec2 v[3];
  double area = 0;
  Vec2 grad_lambda[3];

  Vec2 point(const Eigen::RowVector3d& bary) const {
    return bary[0] * v[0] + bary[1] * v[1] + bary[2] * v[2];
  }
  Eigen::RowVector3d barycentric(const Vec2& x) const;
};

TriGeom tri_geom(const SubMesh& mesh, int t);

/// P1 nodal values at a barycentric point (the coordinates themselves);
/// gradients are TriGeom::grad_lambda.
inline Eigen::RowVector3d eval_p1(const Eigen::RowVector3d& bary) { return bary; }

/// Cubic bubble normalized to 1 at the barycenter.
double eval_bubble(const Eigen::RowVector3d& bary);
Vec2 eval_bubble_grad(const Eigen::RowVector3d& bary, const TriGeom& geom);

/// RT0 basis on one triangle with flux-normalized dofs: basis k belongs to
/// the edge opposite vertex k and has unit integral flux through it with
/// respect to the mesh-global edge normal. Divergence is sign/area.
struct Rt0Basis {
  Vec2 value[3];
  double div[3];
};
Rt0Basis eval_rt0(const SubMesh& mesh, int t, const std::array<double, 3>& signs,
                  const Vec2& x);

/// Which boundary labels carry essential constraints for each field.
struct EssentialRules {
  std::set<BoundaryLabel> velocity_clamped{BoundaryLabel::GammaF};
  std::set<BoundaryLabel> flux_clamped{BoundaryLabel::GammaPNeumann};
  std::set<BoundaryLabel> displacement_clamped{BoundaryLabel::GammaPDirichlet,
                                               BoundaryLabel::GammaPNeumann,
                                               BoundaryLabel::OutletP};
};

struct DofMap {
  Space space;
  std::vector<std::vector<int>> cell_dofs; // per triangle (per segment for InterfaceP0)
  std::vector<std::array<double, 3>> rt0_signs; // RT0 only: per-triangle edge signs
  std::vector<char> essential;   // per global dof
  VecX essential_values;
  std::vector<int> to_free; // global dof -> free index, -1 if essential
  int n_free = 0;

  int n_dofs() const { return space.dof_count; }
};

DofMap build_dofmap(const Space& space, const EssentialRules& rules,
                    const InterfaceGeometry* gamma = nullptr);

} // namespace fpsi
