#include "fpsi/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fpsi {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // namespace

const char* label_name(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::GammaF: return "GAMMA_F";
    case BoundaryLabel::GammaPDirichlet: return "GAMMA_P_D";
    case BoundaryLabel::GammaPNeumann: return "GAMMA_P_N";
    case BoundaryLabel::Interface: return "INTERFACE";
    case BoundaryLabel::InletF: return "INLET_F";
    case BoundaryLabel::OutletP: return "OUTLET_P";
  }
  return "?";
}

std::optional<BoundaryLabel> label_from_name(const std::string& name) {
  if (name == "GAMMA_F") return BoundaryLabel::GammaF;
  if (name == "GAMMA_P_D") return BoundaryLabel::GammaPDirichlet;
  if (name == "GAMMA_P_N") return BoundaryLabel::GammaPNeumann;
  if (name == "INTERFACE") return BoundaryLabel::Interface;
  if (name == "INLET_F") return BoundaryLabel::InletF;
  if (name == "OUTLET_P") return BoundaryLabel::OutletP;
  return std::nullopt;
}

double SubMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

double SubMesh::area() const {
  double sum = 0;
  for (int t = 0; t < n_triangles(); ++t) sum += triangle_area(t);
  return sum;
}

double SubMesh::diameter() const {
  Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  Vec2 hi = -lo;
  for (const auto& p : nodes) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

SideLabels default_side_labels(RegionTag region) {
  if (region == RegionTag::Fluid)
    return {BoundaryLabel::GammaF, BoundaryLabel::GammaF, BoundaryLabel::GammaF,
            BoundaryLabel::GammaF};
  return {BoundaryLabel::GammaPNeumann, BoundaryLabel::GammaPNeumann,
          BoundaryLabel::GammaPNeumann, BoundaryLabel::GammaPNeumann};
}

SubMesh build_structured_mesh(const Rect& rect, int nx, int ny, RegionTag region,
                              const SideLabels& sides) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_structured_mesh: cell counts must be >= 1");
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0))
    throw std::invalid_argument("build_structured_mesh: empty rectangle");

  SubMesh mesh;
  mesh.region = region;
  mesh.structured = StructuredInfo{rect, nx, ny};

  const double hx = (rect.x1 - rect.x0) / nx;
  const double hy = (rect.y1 - rect.y0) / ny;
  mesh.nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.nodes.emplace_back(rect.x0 + i * hx, rect.y0 + j * hy);

  auto node = [&](int i, int j) { return j * (nx + 1) + i; };

  mesh.triangles.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // diagonal from (i,j) to (i+1,j+1)
      mesh.triangles.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1)});
      mesh.triangles.push_back({node(i, j), node(i + 1, j + 1), node(i, j + 1)});
    }

  for (int i = 0; i < nx; ++i)
    mesh.boundary_edges.push_back({node(i, 0), node(i + 1, 0), sides.bottom});
  for (int j = 0; j < ny; ++j)
    mesh.boundary_edges.push_back({node(nx, j), node(nx, j + 1), sides.right});
  for (int i = nx; i > 0; --i)
    mesh.boundary_edges.push_back({node(i, ny), node(i - 1, ny), sides.top});
  for (int j = ny; j > 0; --j)
    mesh.boundary_edges.push_back({node(0, j), node(0, j - 1), sides.left});

  finalize_mesh(mesh);
  return mesh;
}

SubMesh build_structured_mesh(const Rect& rect, int nx, int ny, RegionTag region) {
  return build_structured_mesh(rect, nx, ny, region, default_side_labels(region));
}

void finalize_mesh(SubMesh& mesh) {
  const int n_nodes = mesh.n_nodes();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int v = mesh.triangles[t][k];
      if (v < 0 || v >= n_nodes)
        throw std::runtime_error("mesh: triangle " + std::to_string(t) +
                                 " references node " + std::to_string(v) +
                                 " out of range");
    }
    if (!(mesh.triangle_area(t) > 0))
      throw std::runtime_error("mesh: negative area triangle " + std::to_string(t));
  }

  // Unique undirected edges and triangle adjacency.
  std::map<std::array<int, 2>, int> edge_index;
  mesh.edges.clear();
  mesh.tri_edges.assign(mesh.n_triangles(), {-1, -1, -1});
  mesh.edge_tris.clear();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto it = edge_index.find(key);
      int e;
      if (it == edge_index.end()) {
        e = static_cast<int>(mesh.edges.size());
        edge_index.emplace(key, e);
        mesh.edges.push_back(key);
        mesh.edge_tris.push_back({t, -1});
      } else {
        e = it->second;
        if (mesh.edge_tris[e][1] != -1)
          throw std::runtime_error("mesh: edge shared by more than two triangles");
        mesh.edge_tris[e][1] = t;
      }
      mesh.tri_edges[t][k] = e;
    }
  }

  // Boundary edges: each one must be an edge of exactly one triangle.
  mesh.bedge_tri.assign(mesh.boundary_edges.size(), -1);
  mesh.bedge_edge.assign(mesh.boundary_edges.size(), -1);
  std::set<int> seen;
  for (size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
    auto& be = mesh.boundary_edges[k];
    std::array<int, 2> key{std::min(be.a, be.b), std::max(be.a, be.b)};
    auto it = edge_index.find(key);
    if (it == edge_index.end())
      throw std::runtime_error("mesh: dangling boundary edge (" + std::to_string(be.a) +
                               "," + std::to_string(be.b) + ") not part of any triangle");
    int e = it->second;
    if (mesh.edge_tris[e][1] != -1)
      throw std::runtime_error("mesh: boundary edge (" + std::to_string(be.a) + "," +
                               std::to_string(be.b) + ") is interior");
    if (!seen.insert(e).second)
      throw std::runtime_error("mesh: duplicate boundary edge (" + std::to_string(be.a) +
                               "," + std::to_string(be.b) + ")");
    int t = mesh.edge_tris[e][0];
    mesh.bedge_tri[k] = t;
    mesh.bedge_edge[k] = e;
    // Normalize to the triangle's CCW orientation.
    const auto& tri = mesh.triangles[t];
    for (int kk = 0; kk < 3; ++kk) {
      int a = tri[kk], b = tri[(kk + 1) % 3];
      if (std::min(a, b) == key[0] && std::max(a, b) == key[1]) {
        be.a = a;
        be.b = b;
        break;
      }
    }
  }

  // The boundary edges must cover the topological boundary exactly.
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edge_tris[e][1] == -1 && !seen.count(e))
      throw std::runtime_error("mesh: topological boundary edge (" +
                               std::to_string(mesh.edges[e][0]) + "," +
                               std::to_string(mesh.edges[e][1]) +
                               ") missing from boundary list");
}

namespace {

struct LineReader {
  std::istringstream in;
  int line_no = 0;
  explicit LineReader(const std::string& text) : in(text) {}

  std::string next(const char* what) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return line;
    }
    throw std::runtime_error("mesh parse: line " + std::to_string(line_no + 1) +
                             ": unexpected end of file, expected " + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("mesh parse: line " + std::to_string(line_no) + ": " + msg);
  }
};

} // namespace

SubMesh import_mesh(const std::string& text) {
  LineReader reader(text);

  if (reader.next("header") != "fpsi-mesh 1")
    reader.fail("expected header 'fpsi-mesh 1'");

  std::istringstream head(reader.next("counts"));
  std::string region_str;
  long n_nodes = -1, n_tris = -1, n_bedges = -1;
  if (!(head >> region_str >> n_nodes >> n_tris >> n_bedges))
    reader.fail("expected '<region> <n_nodes> <n_tris> <n_bedges>'");
  if (region_str != "fluid" && region_str != "porous")
    reader.fail("unknown region tag '" + region_str + "'");
  if (n_nodes < 3 || n_tris < 1 || n_bedges < 3)
    reader.fail("malformed counts");

  SubMesh mesh;
  mesh.region = region_str == "fluid" ? RegionTag::Fluid : RegionTag::Porous;

  mesh.nodes.reserve(n_nodes);
  for (long i = 0; i < n_nodes; ++i) {
    std::istringstream ls(reader.next("node coordinates"));
    double x, y;
    if (!(ls >> x >> y)) reader.fail("expected 'x y'");
    mesh.nodes.emplace_back(x, y);
  }

  mesh.triangles.reserve(n_tris);
  for (long t = 0; t < n_tris; ++t) {
    std::istringstream ls(reader.next("triangle"));
    long i, j, k;
    if (!(ls >> i >> j >> k)) reader.fail("expected 'i j k'");
    if (i < 0 || j < 0 || k < 0 || i >= n_nodes || j >= n_nodes || k >= n_nodes)
      reader.fail("triangle node index out of range");
    if (!(signed_area(mesh.nodes[i], mesh.nodes[j], mesh.nodes[k]) > 0))
      reader.fail("negative area triangle");
    mesh.triangles.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
  }

  mesh.boundary_edges.reserve(n_bedges);
  for (long e = 0; e < n_bedges; ++e) {
    std::istringstream ls(reader.next("boundary edge"));
    long i, j;
    std::string label_str;
    if (!(ls >> i >> j >> label_str)) reader.fail("expected 'i j LABEL'");
    if (i < 0 || j < 0 || i >= n_nodes || j >= n_nodes)
      reader.fail("boundary edge node index out of range");
    auto label = label_from_name(label_str);
    if (!label) reader.fail("unknown boundary label '" + label_str + "'");
    mesh.boundary_edges.push_back({static_cast<int>(i), static_cast<int>(j), *label});
  }

  try {
    finalize_mesh(mesh);
  } catch (const std::runtime_error& err) {
    throw std::runtime_error("mesh parse: " + std::string(err.what()));
  }
  return mesh;
}

std::string export_mesh(const SubMesh& mesh) {
  std::string out = "fpsi-mesh 1\n";
  out += mesh.region == RegionTag::Fluid ? "fluid" : "porous";
  out += ' ' + std::to_string(mesh.n_nodes()) + ' ' + std::to_string(mesh.n_triangles()) +
         ' ' + std::to_string(mesh.boundary_edges.size()) + '\n';
  for (const auto& p : mesh.nodes)
    out += format_double(p.x()) + ' ' + format_double(p.y()) + '\n';
  for (const auto& tri : mesh.triangles)
    out += std::to_string(tri[0]) + ' ' + std::to_string(tri[1]) + ' ' +
           std::to_string(tri[2]) + '\n';
  for (const auto& be : mesh.boundary_edges)
    out += std::to_string(be.a) + ' ' + std::to_string(be.b) + ' ' + label_name(be.label) +
           '\n';
  return out;
}

namespace {

Vec2 outward_normal(const SubMesh& mesh, size_t bedge) {
  const auto& be = mesh.boundary_edges[bedge];
  Vec2 d = (mesh.nodes[be.b] - mesh.nodes[be.a]).normalized();
  return Vec2(d.y(), -d.x()); // CCW edge direction: right-hand normal points outward
}

std::vector<int> interface_bedges(const SubMesh& mesh) {
  std::vector<int> out;
  for (size_t k = 0; k < mesh.boundary_edges.size(); ++k)
    if (mesh.boundary_edges[k].label == BoundaryLabel::Interface)
      out.push_back(static_cast<int>(k));
  return out;
}

} // namespace

InterfaceGeometry pair_interface(const SubMesh& fluid, const SubMesh& porous, double tol) {
  auto f_edges = interface_bedges(fluid);
  auto p_edges = interface_bedges(porous);
  if (f_edges.empty() || p_edges.empty())
    throw std::runtime_error("pair_interface: both meshes need Interface-labeled edges");

  double total_len = 0;
  for (int k : p_edges) {
    const auto& be = porous.boundary_edges[k];
    total_len += (porous.nodes[be.b] - porous.nodes[be.a]).norm();
  }
  const double eps = tol * total_len;

  InterfaceGeometry geom;

  auto near = [&](const Vec2& a, const Vec2& b) { return (a - b).norm() <= eps; };

  // Matching case first: every fluid edge coincides with some porous edge.
  bool matching = f_edges.size() == p_edges.size();
  std::vector<int> match(f_edges.size(), -1);
  if (matching) {
    for (size_t i = 0; i < f_edges.size() && matching; ++i) {
      const auto& fb = fluid.boundary_edges[f_edges[i]];
      Vec2 fa = fluid.nodes[fb.a], fbp = fluid.nodes[fb.b];
      matching = false;
      for (size_t j = 0; j < p_edges.size(); ++j) {
        const auto& pb = porous.boundary_edges[p_edges[j]];
        Vec2 pa = porous.nodes[pb.a], pbp = porous.nodes[pb.b];
        if ((near(fa, pa) && near(fbp, pbp)) || (near(fa, pbp) && near(fbp, pa))) {
          match[i] = static_cast<int>(j);
          matching = true;
          break;
        }
      }
    }
  }

  // Canonical multiplier ordering: porous interface edges sorted along the
  // interface (by midpoint, lexicographically), independent of file order.
  std::vector<size_t> p_order(p_edges.size());
  for (size_t j = 0; j < p_edges.size(); ++j) p_order[j] = j;
  auto p_mid = [&](size_t j) {
    const auto& pb = porous.boundary_edges[p_edges[j]];
    return Vec2(0.5 * (porous.nodes[pb.a] + porous.nodes[pb.b]));
  };
  std::sort(p_order.begin(), p_order.end(), [&](size_t a, size_t b) {
    Vec2 ma = p_mid(a), mb = p_mid(b);
    if (std::abs(ma.x() - mb.x()) > eps) return ma.x() < mb.x();
    return ma.y() < mb.y();
  });
  std::vector<int> lam_of_pedge(p_edges.size(), -1);
  geom.lam_edges.resize(p_edges.size());
  for (size_t rank = 0; rank < p_order.size(); ++rank) {
    lam_of_pedge[p_order[rank]] = static_cast<int>(rank);
    geom.lam_edges[rank] = porous.bedge_edge[p_edges[p_order[rank]]];
  }

  auto make_segment = [&](const Vec2& a, const Vec2& b, int fi, int pj) {
    InterfaceSegment seg;
    seg.p0 = a;
    seg.p1 = b;
    seg.length = (b - a).norm();
    seg.fluid_bedge = f_edges[fi];
    seg.porous_bedge = p_edges[pj];
    seg.fluid_tri = fluid.bedge_tri[seg.fluid_bedge];
    seg.porous_tri = porous.bedge_tri[seg.porous_bedge];
    seg.porous_edge = porous.bedge_edge[seg.porous_bedge];
    seg.lam_dof = lam_of_pedge[pj];
    seg.n_p = outward_normal(porous, seg.porous_bedge);
    seg.n_f = -seg.n_p;
    seg.t_f = Vec2(-seg.n_f.y(), seg.n_f.x());
    Vec2 nf_check = outward_normal(fluid, seg.fluid_bedge);
    if ((nf_check - seg.n_f).norm() > 1e-8)
      throw std::runtime_error("pair_interface: inconsistent interface normals");
    return seg;
  };

  if (matching) {
    for (size_t i = 0; i < f_edges.size(); ++i) {
      const auto& pb = porous.boundary_edges[p_edges[match[i]]];
      geom.segments.push_back(
          make_segment(porous.nodes[pb.a], porous.nodes[pb.b], static_cast<int>(i), match[i]));
    }
  } else {
    // Non-matching grids: supported for straight interfaces only.
    Vec2 origin = porous.nodes[porous.boundary_edges[p_edges[0]].a];
    Vec2 far = origin;
    double best = -1;
    std::vector<Vec2> pts;
    for (int k : f_edges) {
      pts.push_back(fluid.nodes[fluid.boundary_edges[k].a]);
      pts.push_back(fluid.nodes[fluid.boundary_edges[k].b]);
    }
    for (int k : p_edges) {
      pts.push_back(porous.nodes[porous.boundary_edges[k].a]);
      pts.push_back(porous.nodes[porous.boundary_edges[k].b]);
    }
    for (const auto& p : pts)
      for (const auto& q : pts)
        if ((p - q).norm() > best) {
          best = (p - q).norm();
          origin = p;
          far = q;
        }
    Vec2 dir = (far - origin).normalized();
    for (const auto& p : pts) {
      double off = std::abs((p - origin).dot(Vec2(-dir.y(), dir.x())));
      if (off > eps)
        throw std::runtime_error(
            "pair_interface: non-matching interface is not a straight line "
            "(offset " + std::to_string(off) + ")");
    }

    auto param = [&](const Vec2& p) { return (p - origin).dot(dir); };
    struct Interval { double s0, s1; int idx; };
    auto intervals = [&](const SubMesh& mesh, const std::vector<int>& bedges) {
      std::vector<Interval> out;
      for (size_t i = 0; i < bedges.size(); ++i) {
        const auto& be = mesh.boundary_edges[bedges[i]];
        double s0 = param(mesh.nodes[be.a]), s1 = param(mesh.nodes[be.b]);
        out.push_back({std::min(s0, s1), std::max(s0, s1), static_cast<int>(i)});
      }
      return out;
    };
    auto f_iv = intervals(fluid, f_edges);
    auto p_iv = intervals(porous, p_edges);

    std::vector<double> cuts;
    for (const auto& iv : f_iv) { cuts.push_back(iv.s0); cuts.push_back(iv.s1); }
    for (const auto& iv : p_iv) { cuts.push_back(iv.s0); cuts.push_back(iv.s1); }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> uniq;
    for (double s : cuts)
      if (uniq.empty() || s - uniq.back() > eps) uniq.push_back(s);

    auto span = [&](const std::vector<Interval>& iv) {
      double lo = iv[0].s0, hi = iv[0].s1;
      for (const auto& i : iv) { lo = std::min(lo, i.s0); hi = std::max(hi, i.s1); }
      return std::pair<double, double>(lo, hi);
    };
    auto [flo, fhi] = span(f_iv);
    auto [plo, phi] = span(p_iv);
    if (std::abs(flo - plo) > eps || std::abs(fhi - phi) > eps)
      throw std::runtime_error("pair_interface: interface extents differ between meshes");

    auto owner = [&](const std::vector<Interval>& iv, double s) {
      for (const auto& i : iv)
        if (s > i.s0 - eps && s < i.s1 + eps && s > i.s0 && s < i.s1) return i.idx;
      for (const auto& i : iv)
        if (s >= i.s0 - eps && s <= i.s1 + eps) return i.idx;
      return -1;
    };

    for (size_t k = 0; k + 1 < uniq.size(); ++k) {
      double s0 = uniq[k], s1 = uniq[k + 1];
      double mid = 0.5 * (s0 + s1);
      int fi = owner(f_iv, mid), pj = owner(p_iv, mid);
      if (fi < 0 || pj < 0)
        throw std::runtime_error("pair_interface: interface coverage gap between meshes");
      geom.segments.push_back(
          make_segment(origin + s0 * dir, origin + s1 * dir, fi, pj));
    }
  }

  for (const auto& seg : geom.segments) geom.length += seg.length;
  return geom;
}

} // namespace fpsi
