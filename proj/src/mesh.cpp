#include "ifem/mesh.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace ifem {

double SubdomainMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const auto& p0 = nodes[tri[0]];
  const auto& p1 = nodes[tri[1]];
  const auto& p2 = nodes[tri[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

std::array<double, 2> SubdomainMesh::triangle_centroid(int t) const {
  const auto& tri = triangles[t];
  const auto& p0 = nodes[tri[0]];
  const auto& p1 = nodes[tri[1]];
  const auto& p2 = nodes[tri[2]];
  return {(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0};
}

SubdomainMesh build_subdomain_mesh(int n, Side side) {
  if (n < 2) {
    throw std::invalid_argument("build_subdomain_mesh: n must be >= 2");
  }

  SubdomainMesh mesh;
  mesh.subdivisions = n;
  mesh.side = side;
  mesh.origin_x = (side == Side::omega1) ? 0.0 : 1.0;
  mesh.origin_y = 0.0;

  const double h = 1.0 / n;
  const int interface_column = (side == Side::omega1) ? n : 0;

  mesh.nodes.reserve((n + 1) * (n + 1) + n * n);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      double x = mesh.origin_x + i * h;
      if (i == interface_column) {
        x = 1.0;  // exact abscissa, nodes match across Gamma
      }
      mesh.nodes.push_back({x, mesh.origin_y + j * h});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.nodes.push_back({mesh.origin_x + (i + 0.5) * h, mesh.origin_y + (j + 0.5) * h});
    }
  }

  // Both diagonals in every cell: four triangles meeting at the centre,
  // ordered south, east, north, west.
  mesh.triangles.reserve(4 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = mesh.node_index(i, j);
      const int lr = mesh.node_index(i + 1, j);
      const int ul = mesh.node_index(i, j + 1);
      const int ur = mesh.node_index(i + 1, j + 1);
      const int c = mesh.center_index(i, j);
      mesh.triangles.push_back({ll, lr, c});
      mesh.triangles.push_back({lr, ur, c});
      mesh.triangles.push_back({ur, ul, c});
      mesh.triangles.push_back({ul, ll, c});
    }
  }

  for (int j = 0; j <= n; ++j) {
    mesh.interface_nodes.push_back(mesh.node_index(interface_column, j));
  }

  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const bool boundary = (i == 0 || i == n || j == 0 || j == n);
      if (!boundary) continue;
      const bool on_open_interface = (i == interface_column) && (j != 0) && (j != n);
      if (!on_open_interface) {
        mesh.dirichlet_nodes.push_back(mesh.node_index(i, j));
      }
    }
  }
  std::sort(mesh.dirichlet_nodes.begin(), mesh.dirichlet_nodes.end());

  return mesh;
}

std::vector<InterfaceEdge> interface_edge_list(const SubdomainMesh& mesh) {
  const int n = mesh.subdivisions;
  std::vector<InterfaceEdge> edges;
  edges.reserve(n);
  if (mesh.side == Side::omega1) {
    // Right column: the east triangle of cell (n-1, j) carries edge
    // (n,j)-(n,j+1).
    for (int j = 0; j < n; ++j) {
      const int tri = 4 * (j * n + (n - 1)) + 1;
      edges.push_back({mesh.node_index(n, j), mesh.node_index(n, j + 1), tri});
    }
  } else {
    // Left column: the west triangle of cell (0, j) carries edge
    // (0,j)-(0,j+1).
    for (int j = 0; j < n; ++j) {
      const int tri = 4 * (j * n) + 3;
      edges.push_back({mesh.node_index(0, j), mesh.node_index(0, j + 1), tri});
    }
  }
  return edges;
}

void write_mesh_csv(const SubdomainMesh& mesh, std::ostream& out) {
  std::vector<char> cls(mesh.node_count(), 0);  // 0 interior, 1 dirichlet, 2 interface
  for (int idx : mesh.interface_nodes) cls[idx] = 2;
  for (int idx : mesh.dirichlet_nodes) cls[idx] = 1;
  out << "node_id,x,y,class\n";
  for (int i = 0; i < mesh.node_count(); ++i) {
    const char* name = cls[i] == 0 ? "interior" : (cls[i] == 1 ? "dirichlet" : "interface");
    out << i << ',' << mesh.nodes[i][0] << ',' << mesh.nodes[i][1] << ',' << name << '\n';
  }
}

}  // namespace ifem
