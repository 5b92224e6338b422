#include "fpsi/elements.hpp"

#include <cmath>
#include <stdexcept>

namespace fpsi {

Space make_space(SpaceKind kind, const SubMesh& mesh, const InterfaceGeometry* gamma) {
  Space space{kind, &mesh, 0};
  switch (kind) {
    case SpaceKind::VectorP1Bubble:
      space.dof_count = 2 * (mesh.n_nodes() + mesh.n_triangles());
      break;
    case SpaceKind::ScalarP1:
      space.dof_count = mesh.n_nodes();
      break;
    case SpaceKind::RT0:
      space.dof_count = mesh.n_edges();
      break;
    case SpaceKind::ScalarP0:
      space.dof_count = mesh.n_triangles();
      break;
    case SpaceKind::VectorP1:
      space.dof_count = 2 * mesh.n_nodes();
      break;
    case SpaceKind::InterfaceP0:
      if (!gamma)
        throw std::invalid_argument("make_space: InterfaceP0 needs interface geometry");
      space.dof_count = gamma->n_lam();
      break;
  }
  return space;
}

namespace {

void add_point(std::vector<std::array<double, 4>>& rows, double l1, double l2, double l3,
               double w) {
  rows.push_back({l1, l2, l3, w});
}

// Symmetric orbit (a,a,1-2a) with all 3 permutations.
void add_orbit3(std::vector<std::array<double, 4>>& rows, double a, double w) {
  double b = 1.0 - 2.0 * a;
  add_point(rows, b, a, a, w);
  add_point(rows, a, b, a, w);
  add_point(rows, a, a, b, w);
}

// Orbit (a,b,1-a-b) with all 6 permutations.
void add_orbit6(std::vector<std::array<double, 4>>& rows, double a, double b, double w) {
  double c = 1.0 - a - b;
  add_point(rows, a, b, c, w);
  add_point(rows, a, c, b, w);
  add_point(rows, b, a, c, w);
  add_point(rows, b, c, a, w);
  add_point(rows, c, a, b, w);
  add_point(rows, c, b, a, w);
}

QuadratureRule make_rule(const std::vector<std::array<double, 4>>& rows, int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.resize(rows.size(), 3);
  rule.weights.resize(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    rule.points(i, 0) = rows[i][0];
    rule.points(i, 1) = rows[i][1];
    rule.points(i, 2) = rows[i][2];
    rule.weights[i] = 0.5 * rows[i][3]; // normalize to reference-triangle area
  }
  return rule;
}

double factorial(int n) {
  double out = 1;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

// Exact reference-triangle integral of l1^a l2^b l3^c.
double monomial_integral(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

void verify_rule(const QuadratureRule& rule) {
  for (int q = 0; q < rule.size(); ++q)
    if (!(rule.weights[q] > 0))
      throw std::logic_error("quadrature_rule: nonpositive weight");
  if (std::abs(rule.weights.sum() - 0.5) > 1e-13)
    throw std::logic_error("quadrature_rule: weights do not sum to 1/2");
  for (int a = 0; a <= rule.degree; ++a)
    for (int b = 0; a + b <= rule.degree; ++b) {
      int c = rule.degree - a - b;
      double acc = 0;
      for (int q = 0; q < rule.size(); ++q)
        acc += rule.weights[q] * std::pow(rule.points(q, 0), a) *
               std::pow(rule.points(q, 1), b) * std::pow(rule.points(q, 2), c);
      if (std::abs(acc - monomial_integral(a, b, c)) > 1e-13)
        throw std::logic_error("quadrature_rule: exactness check failed");
    }
}

} // namespace

QuadratureRule quadrature_rule(int degree) {
  if (degree < 1 || degree > 6)
    throw std::invalid_argument("quadrature_rule: degree must be in 1..6");

  std::vector<std::array<double, 4>> rows;
  switch (degree) {
    case 1:
      add_point(rows, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0);
      break;
    case 2:
      add_orbit3(rows, 1.0 / 6, 1.0 / 3);
      break;
    case 3:
    case 4:
      // 6-point degree-4 rule, positive interior points.
      add_orbit3(rows, 0.445948490915965, 0.223381589678011);
      add_orbit3(rows, 0.091576213509771, 0.109951743655322);
      break;
    case 5: {
      const double s = std::sqrt(15.0);
      add_point(rows, 1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40);
      add_orbit3(rows, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
      add_orbit3(rows, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
      break;
    }
    case 6:
      add_orbit3(rows, 0.063089014491502, 0.050844906370207);
      add_orbit3(rows, 0.249286745170910, 0.116786275726379);
      add_orbit6(rows, 0.310352451033785, 0.053145049844816, 0.082851075618374);
      break;
  }

  QuadratureRule rule = make_rule(rows, degree == 3 ? 4 : degree);
  rule.degree = degree == 3 ? 4 : degree;
  verify_rule(rule);
  rule.degree = degree; // report at least the requested exactness
  return rule;
}

SegmentRule segment_rule() {
  SegmentRule rule;
  const double s = std::sqrt(0.6);
  rule.points.resize(3);
  rule.weights.resize(3);
  rule.points << 0.5 * (1 - s), 0.5, 0.5 * (1 + s);
  rule.weights << 5.0 / 18, 8.0 / 18, 5.0 / 18;
  return rule;
}

TriGeom tri_geom(const SubMesh& mesh, int t) {
  TriGeom g;
  const auto& tri = mesh.triangles[t];
  for (int k = 0; k < 3; ++k) g.v[k] = mesh.nodes[tri[k]];
  Vec2 e1 = g.v[1] - g.v[0], e2 = g.v[2] - g.v[0];
  double det = e1.x() * e2.y() - e1.y() * e2.x();
  g.area = 0.5 * det;
  // grad lambda_k = (opposite edge rotated) / (2 area)
  g.grad_lambda[0] = Vec2(g.v[1].y() - g.v[2].y(), g.v[2].x() - g.v[1].x()) / det;
  g.grad_lambda[1] = Vec2(g.v[2].y() - g.v[0].y(), g.v[0].x() - g.v[2].x()) / det;
  g.grad_lambda[2] = Vec2(g.v[0].y() - g.v[1].y(), g.v[1].x() - g.v[0].x()) / det;
  return g;
}

Eigen::RowVector3d TriGeom::barycentric(const Vec2& x) const {
  Eigen::RowVector3d bary;
  for (int k = 0; k < 3; ++k)
    bary[k] = 1.0 + grad_lambda[k].dot(x - v[k]);
  // grad form: lambda_k(x) = lambda_k(v_k) + grad.(x - v_k) with lambda_k(v_k)=1
  return bary;
}

double eval_bubble(const Eigen::RowVector3d& bary) {
  return 27.0 * bary[0] * bary[1] * bary[2];
}

Vec2 eval_bubble_grad(const Eigen::RowVector3d& bary, const TriGeom& geom) {
  return 27.0 * (bary[1] * bary[2] * geom.grad_lambda[0] +
                 bary[0] * bary[2] * geom.grad_lambda[1] +
                 bary[0] * bary[1] * geom.grad_lambda[2]);
}

Rt0Basis eval_rt0(const SubMesh& mesh, int t, const std::array<double, 3>& signs,
                  const Vec2& x) {
  Rt0Basis basis;
  const auto& tri = mesh.triangles[t];
  const double area = mesh.triangle_area(t);
  // Local edge k runs from vertex k to vertex k+1; the opposite vertex is k+2.
  for (int k = 0; k < 3; ++k) {
    const Vec2& opp = mesh.nodes[tri[(k + 2) % 3]];
    basis.value[k] = signs[k] * (x - opp) / (2.0 * area);
    basis.div[k] = signs[k] / area;
  }
  return basis;
}

namespace {

std::vector<char> nodes_on_labels(const SubMesh& mesh,
                                  const std::set<BoundaryLabel>& labels) {
  std::vector<char> mask(mesh.n_nodes(), 0);
  for (const auto& be : mesh.boundary_edges)
    if (labels.count(be.label)) {
      mask[be.a] = 1;
      mask[be.b] = 1;
    }
  return mask;
}

} // namespace

DofMap build_dofmap(const Space& space, const EssentialRules& rules,
                    const InterfaceGeometry* gamma) {
  DofMap map;
  map.space = space;
  const SubMesh& mesh = *space.mesh;
  map.essential.assign(space.dof_count, 0);
  map.essential_values = VecX::Zero(space.dof_count);

  switch (space.kind) {
    case SpaceKind::VectorP1Bubble: {
      const int nn = mesh.n_nodes();
      map.cell_dofs.resize(mesh.n_triangles());
      for (int t = 0; t < mesh.n_triangles(); ++t) {
        auto& dofs = map.cell_dofs[t];
        dofs.reserve(8);
        for (int k = 0; k < 3; ++k) {
          dofs.push_back(2 * mesh.triangles[t][k]);
          dofs.push_back(2 * mesh.triangles[t][k] + 1);
        }
        dofs.push_back(2 * (nn + t));
        dofs.push_back(2 * (nn + t) + 1);
      }
      auto clamped = nodes_on_labels(mesh, rules.velocity_clamped);
      for (int v = 0; v < nn; ++v)
        if (clamped[v]) map.essential[2 * v] = map.essential[2 * v + 1] = 1;
      break;
    }
    case SpaceKind::ScalarP1: {
      map.cell_dofs.resize(mesh.n_triangles());
      for (int t = 0; t < mesh.n_triangles(); ++t)
        map.cell_dofs[t] = {mesh.triangles[t][0], mesh.triangles[t][1],
                            mesh.triangles[t][2]};
      break;
    }
    case SpaceKind::RT0: {
      map.cell_dofs.resize(mesh.n_triangles());
      map.rt0_signs.resize(mesh.n_triangles());
      for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        auto& dofs = map.cell_dofs[t];
        dofs.resize(3);
        for (int k = 0; k < 3; ++k) {
          int e = mesh.tri_edges[t][k];
          dofs[k] = e;
          // Global edge normal is the right-hand normal of (a->b), a<b.
          // Local edge k runs tri[k]->tri[k+1]; same direction means the
          // global normal is outward for this triangle.
          map.rt0_signs[t][k] = (tri[k] == mesh.edges[e][0]) ? 1.0 : -1.0;
        }
      }
      for (size_t b = 0; b < mesh.boundary_edges.size(); ++b)
        if (rules.flux_clamped.count(mesh.boundary_edges[b].label))
          map.essential[mesh.bedge_edge[b]] = 1;
      break;
    }
    case SpaceKind::ScalarP0: {
      map.cell_dofs.resize(mesh.n_triangles());
      for (int t = 0; t < mesh.n_triangles(); ++t) map.cell_dofs[t] = {t};
      break;
    }
    case SpaceKind::VectorP1: {
      map.cell_dofs.resize(mesh.n_triangles());
      for (int t = 0; t < mesh.n_triangles(); ++t) {
        auto& dofs = map.cell_dofs[t];
        dofs.reserve(6);
        for (int k = 0; k < 3; ++k) {
          dofs.push_back(2 * mesh.triangles[t][k]);
          dofs.push_back(2 * mesh.triangles[t][k] + 1);
        }
      }
      auto clamped = nodes_on_labels(mesh, rules.displacement_clamped);
      for (int v = 0; v < mesh.n_nodes(); ++v)
        if (clamped[v]) map.essential[2 * v] = map.essential[2 * v + 1] = 1;
      break;
    }
    case SpaceKind::InterfaceP0: {
      if (!gamma)
        throw std::invalid_argument("build_dofmap: InterfaceP0 needs interface geometry");
      map.cell_dofs.resize(gamma->segments.size());
      for (size_t s = 0; s < gamma->segments.size(); ++s)
        map.cell_dofs[s] = {gamma->segments[s].lam_dof};
      break;
    }
  }

  map.to_free.assign(space.dof_count, -1);
  map.n_free = 0;
  for (int d = 0; d < space.dof_count; ++d)
    if (!map.essential[d]) map.to_free[d] = map.n_free++;
  return map;
}

} // namespace fpsi
