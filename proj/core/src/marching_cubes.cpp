#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <vector>

#include "csdc/surface.hpp"

namespace csdc {

namespace {

// Cube-grid contouring with a 6-tetrahedra decomposition per cell.  Each
// tetrahedron contributes 0, 1 or 2 triangles; edge intersections are linear
// interpolations, deduplicated through an edge-key map so the mesh is
// watertight and the output deterministic.
struct MeshBuilder {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> faces;
  std::map<std::array<long long, 2>, int> edge_vertex;

  int edge_point(long long ka, long long kb, const std::array<double, 3>& pa,
                 const std::array<double, 3>& pb, double va, double vb) {
    std::array<long long, 2> key = ka < kb ? std::array<long long, 2>{ka, kb}
                                           : std::array<long long, 2>{kb, ka};
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    double t = va / (va - vb);
    if (!(t >= 0.0 && t <= 1.0)) t = 0.5;
    std::array<double, 3> p = {pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]),
                               pa[2] + t * (pb[2] - pa[2])};
    int id = int(vertices.size());
    vertices.push_back(p);
    edge_vertex.emplace(key, id);
    return id;
  }
};

constexpr int kTets[6][4] = {{0, 5, 1, 6}, {0, 1, 2, 6}, {0, 2, 3, 6},
                             {0, 3, 7, 6}, {0, 7, 4, 6}, {0, 4, 5, 6}};

}  // namespace

void export_poly_obj(const TrivariatePoly& poly, const std::array<double, 3>& lo,
                     const std::array<double, 3>& hi, int resolution, std::ostream& os) {
  if (resolution < 2) throw UnsupportedFormat("mesh resolution must be >= 2");
  const int n = resolution;
  auto coord = [&](int d, int i) { return lo[d] + (hi[d] - lo[d]) * double(i) / double(n - 1); };

  // sample grid
  std::vector<double> grid(std::size_t(n) * n * n);
  auto gidx = [&](int i, int j, int k) { return (std::size_t(i) * n + j) * n + k; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        grid[gidx(i, j, k)] = poly.eval(coord(0, i), coord(1, j), coord(2, k));

  MeshBuilder mb;
  const int corner_off[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j + 1 < n; ++j)
      for (int k = 0; k + 1 < n; ++k) {
        double val[8];
        std::array<double, 3> pos[8];
        long long key[8];
        for (int c = 0; c < 8; ++c) {
          int ci = i + corner_off[c][0], cj = j + corner_off[c][1], ck = k + corner_off[c][2];
          val[c] = grid[gidx(ci, cj, ck)];
          pos[c] = {coord(0, ci), coord(1, cj), coord(2, ck)};
          key[c] = (static_cast<long long>(ci) * n + cj) * n + ck;
        }
        for (const auto& tet : kTets) {
          int vid[4] = {tet[0], tet[1], tet[2], tet[3]};
          bool neg[4];
          int nneg = 0;
          for (int t = 0; t < 4; ++t) {
            neg[t] = val[vid[t]] < 0.0;
            nneg += neg[t];
          }
          if (nneg == 0 || nneg == 4) continue;
          // collect crossing edges of the tetrahedron
          int pts[4];
          int np = 0;
          const int tedge[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
          for (const auto& e : tedge) {
            int a = vid[e[0]], b = vid[e[1]];
            if ((val[a] < 0.0) == (val[b] < 0.0)) continue;
            pts[np++] = mb.edge_point(key[a], key[b], pos[a], pos[b], val[a], val[b]);
          }
          if (np == 3) {
            mb.faces.push_back({pts[0], pts[1], pts[2]});
          } else if (np == 4) {
            // quad: order follows the edge enumeration; split on a diagonal
            mb.faces.push_back({pts[0], pts[1], pts[2]});
            mb.faces.push_back({pts[1], pts[3], pts[2]});
          }
        }
      }

  char buf[128];
  for (const auto& v : mb.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    os << buf;
  }
  for (const auto& f : mb.faces) {
    std::snprintf(buf, sizeof buf, "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
    os << buf;
  }
}

}  // namespace csdc
