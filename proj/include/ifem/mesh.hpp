#pragma once

#include <array>
#include <iosfwd>
#include <vector>

namespace ifem {

enum class Side { omega1, omega2 };

/// Structured P1 triangulation of one unit square (criss-cross pattern).
///
/// Grid nodes lie on an (n+1)x(n+1) lattice, index j*(n+1)+i for grid
/// position (i, j); one extra node sits at the centre of each of the n*n
/// cells, appended after the grid nodes. Every cell is split by both
/// diagonals into four counter-clockwise triangles of area h^2/4 meeting at
/// the cell centre. The interface column (x = 1) is stored with an exact
/// 1.0 abscissa so the two subdomain meshes match node-for-node on Gamma
/// without tolerances; cell centres never lie on Gamma or on the outer
/// boundary.
///
/// Interface corner nodes (y = 0 and y = 1) appear both in dirichlet_nodes
/// and interface_nodes: exterior Dirichlet data takes precedence there, so
/// the schemes treat them as constrained.
struct SubdomainMesh {
  int subdivisions = 0;
  Side side = Side::omega1;
  double origin_x = 0.0;
  double origin_y = 0.0;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> dirichlet_nodes;   // sorted; boundary minus open interface
  std::vector<int> interface_nodes;   // x = 1 column, ordered by increasing y

  double h() const { return 1.0 / subdivisions; }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int node_index(int i, int j) const { return j * (subdivisions + 1) + i; }
  int center_index(int ci, int cj) const {
    const int grid = (subdivisions + 1) * (subdivisions + 1);
    return grid + cj * subdivisions + ci;
  }

  double triangle_area(int t) const;
  std::array<double, 2> triangle_centroid(int t) const;
};

SubdomainMesh build_subdomain_mesh(int n, Side side);

/// One interface edge (length h) with its unique adjacent triangle inside
/// the owning subdomain. Node a has the lower y-coordinate.
struct InterfaceEdge {
  int a = 0;
  int b = 0;
  int triangle = 0;
};

std::vector<InterfaceEdge> interface_edge_list(const SubdomainMesh& mesh);

/// CSV dump: node_id,x,y,class with class in {interior, dirichlet, interface}.
void write_mesh_csv(const SubdomainMesh& mesh, std::ostream& out);

}  // namespace ifem
