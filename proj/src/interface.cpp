#include "ifem/interface.hpp"

#include <cmath>

namespace ifem {

InterfaceCoupling build_interface_coupling(const SubdomainMesh& mesh1, const SubdomainMesh& mesh2,
                                           double rho1, double rho2) {
  if (mesh1.subdivisions != mesh2.subdivisions) {
    throw InterfaceMismatch("build_interface_coupling: subdivision counts differ");
  }
  const int n = mesh1.subdivisions;

  InterfaceCoupling c;
  c.subdivisions = n;
  c.h = mesh1.h();
  c.nodes1 = mesh1.interface_nodes;
  c.nodes2 = mesh2.interface_nodes;
  for (int k = 0; k <= n; ++k) {
    const auto& p1 = mesh1.nodes[c.nodes1[k]];
    const auto& p2 = mesh2.nodes[c.nodes2[k]];
    if (p1[0] != 1.0 || p2[0] != 1.0 || p1[1] != p2[1]) {
      throw InterfaceMismatch("build_interface_coupling: interface nodes do not match");
    }
  }

  const std::vector<double> lumped1 = assemble_lumped_mass(mesh1, rho1);
  const std::vector<double> lumped2 = assemble_lumped_mass(mesh2, rho2);
  c.inertial_weights_1.resize(n + 1);
  c.inertial_weights_2.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    c.inertial_weights_1[k] = lumped1[c.nodes1[k]];
    c.inertial_weights_2[k] = lumped2[c.nodes2[k]];
  }

  // 1-D P1 mass on Gamma: per edge [[h/3, h/6], [h/6, h/3]].
  c.gamma_diag.assign(n + 1, 0.0);
  for (int e = 0; e < n; ++e) {
    c.gamma_diag[e] += c.h / 3.0;
    c.gamma_diag[e + 1] += c.h / 3.0;
  }
  c.gamma_off = c.h / 6.0;
  return c;
}

std::vector<double> transfer_trace(const NodalField& field, const InterfaceCoupling& coupling,
                                   TraceDirection direction) {
  const Side expected = direction == TraceDirection::one_to_two ? Side::omega1 : Side::omega2;
  if (field.subdomain != expected) {
    throw std::invalid_argument("transfer_trace: field belongs to the wrong subdomain");
  }
  const auto& source =
      direction == TraceDirection::one_to_two ? coupling.nodes1 : coupling.nodes2;
  std::vector<double> trace(source.size());
  for (std::size_t k = 0; k < source.size(); ++k) trace[k] = field.values[source[k]];
  return trace;
}

std::vector<double> interface_flux_vector(const SubdomainMesh& donor_mesh,
                                          const NodalField& donor_field, const ScalarFn& beta,
                                          const InterfaceCoupling& coupling) {
  const int n = coupling.subdivisions;
  const double h = coupling.h;
  const double nx = donor_mesh.side == Side::omega1 ? 1.0 : -1.0;

  std::vector<double> flux(n + 1, 0.0);
  const auto edges = interface_edge_list(donor_mesh);
  const double g = 1.0 / std::sqrt(3.0);  // 2-point Gauss on [-1, 1]

  for (int e = 0; e < n; ++e) {
    const auto grad = element_gradient(donor_mesh, donor_field.values, edges[e].triangle);
    const double normal_grad = nx * grad[0];
    const double y0 = donor_mesh.nodes[edges[e].a][1];
    const double y1 = donor_mesh.nodes[edges[e].b][1];
    for (int q = 0; q < 2; ++q) {
      const double s = q == 0 ? 0.5 * (1.0 - g) : 0.5 * (1.0 + g);  // hat of node b
      const double y = y0 + s * (y1 - y0);
      const double w = 0.5 * h * beta(1.0, y) * normal_grad;
      flux[e] += w * (1.0 - s);
      flux[e + 1] += w * s;
    }
  }
  return flux;
}

std::vector<double> gamma_mass_apply(const InterfaceCoupling& coupling, double alpha,
                                     const std::vector<double>& values) {
  const int n = coupling.subdivisions;
  std::vector<double> out(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double acc = coupling.gamma_diag[k] * values[k];
    if (k > 0) acc += coupling.gamma_off * values[k - 1];
    if (k < n) acc += coupling.gamma_off * values[k + 1];
    out[k] = alpha * acc;
  }
  return out;
}

std::vector<Triplet> gamma_mass_triplets(const InterfaceCoupling& coupling, double alpha,
                                         const std::vector<int>& target_nodes) {
  const int n = coupling.subdivisions;
  std::vector<Triplet> entries;
  entries.reserve(3 * (n + 1));
  for (int k = 0; k <= n; ++k) {
    entries.push_back({target_nodes[k], target_nodes[k], alpha * coupling.gamma_diag[k]});
    if (k < n) {
      entries.push_back({target_nodes[k], target_nodes[k + 1], alpha * coupling.gamma_off});
      entries.push_back({target_nodes[k + 1], target_nodes[k], alpha * coupling.gamma_off});
    }
  }
  return entries;
}

}  // namespace ifem
