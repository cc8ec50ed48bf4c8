#include "ifem/fem.hpp"

#include <cmath>

namespace ifem {

std::array<std::array<double, 2>, 3> basis_gradients(const SubdomainMesh& mesh, int triangle) {
  const auto& tri = mesh.triangles[triangle];
  const auto& p0 = mesh.nodes[tri[0]];
  const auto& p1 = mesh.nodes[tri[1]];
  const auto& p2 = mesh.nodes[tri[2]];
  const double two_area = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  // grad phi_i = perpendicular of the opposite edge / (2 |tau|)
  return {{{(p1[1] - p2[1]) / two_area, (p2[0] - p1[0]) / two_area},
           {(p2[1] - p0[1]) / two_area, (p0[0] - p2[0]) / two_area},
           {(p0[1] - p1[1]) / two_area, (p1[0] - p0[0]) / two_area}}};
}

CsrMatrix assemble_mass(const SubdomainMesh& mesh, double rho) {
  std::vector<Triplet> entries;
  entries.reserve(mesh.triangle_count() * 9);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double scale = rho * mesh.triangle_area(t) / 12.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        entries.push_back({tri[a], tri[b], scale * (a == b ? 2.0 : 1.0)});
      }
    }
  }
  return CsrMatrix::from_triplets(mesh.node_count(), mesh.node_count(), std::move(entries));
}

std::vector<double> assemble_lumped_mass(const SubdomainMesh& mesh, double rho) {
  // Vertex quadrature gives weight_i = rho * sum area(tau)/3 over incident
  // triangles, which coincides with the consistent-mass row sums. Computing
  // the weights as those row sums keeps the identity bit-exact.
  return assemble_mass(mesh, rho).row_sums();
}

CsrMatrix assemble_stiffness(const SubdomainMesh& mesh, const CoefficientField& coeff) {
  std::vector<Triplet> entries;
  entries.reserve(mesh.triangle_count() * 9);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto centroid = mesh.triangle_centroid(t);
    const double beta = coeff.beta(centroid[0], centroid[1]);
    if (!(beta > 0.0)) {
      throw InvalidCoefficient("assemble_stiffness: non-positive beta at element centroid");
    }
    const auto grads = basis_gradients(mesh, t);
    const auto& tri = mesh.triangles[t];
    const double scale = beta * mesh.triangle_area(t);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        entries.push_back(
            {tri[a], tri[b], scale * (grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1])});
      }
    }
  }
  return CsrMatrix::from_triplets(mesh.node_count(), mesh.node_count(), std::move(entries));
}

std::vector<double> assemble_load(const SubdomainMesh& mesh, const TimeScalarFn& f, double t) {
  std::vector<double> load(mesh.node_count(), 0.0);
  for (int tr = 0; tr < mesh.triangle_count(); ++tr) {
    const auto& tri = mesh.triangles[tr];
    const auto& p0 = mesh.nodes[tri[0]];
    const auto& p1 = mesh.nodes[tri[1]];
    const auto& p2 = mesh.nodes[tri[2]];
    // Midpoint m_ab is opposite vertex c; phi_a = phi_b = 1/2 there.
    const std::array<std::array<double, 2>, 3> mid = {{
        {0.5 * (p1[0] + p2[0]), 0.5 * (p1[1] + p2[1])},  // opposite 0
        {0.5 * (p0[0] + p2[0]), 0.5 * (p0[1] + p2[1])},  // opposite 1
        {0.5 * (p0[0] + p1[0]), 0.5 * (p0[1] + p1[1])},  // opposite 2
    }};
    const double w = mesh.triangle_area(tr) / 3.0;
    std::array<double, 3> fv;
    for (int m = 0; m < 3; ++m) fv[m] = f(mid[m][0], mid[m][1], t);
    for (int a = 0; a < 3; ++a) {
      double acc = 0.0;
      for (int m = 0; m < 3; ++m) {
        if (m != a) acc += 0.5 * fv[m];
      }
      load[tri[a]] += w * acc;
    }
  }
  return load;
}

std::array<double, 2> element_gradient(const SubdomainMesh& mesh,
                                       const std::vector<double>& values, int triangle) {
  const auto grads = basis_gradients(mesh, triangle);
  const auto& tri = mesh.triangles[triangle];
  std::array<double, 2> g = {0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    g[0] += values[tri[a]] * grads[a][0];
    g[1] += values[tri[a]] * grads[a][1];
  }
  return g;
}

}  // namespace ifem
