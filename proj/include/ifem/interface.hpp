#pragma once

#include <stdexcept>
#include <vector>

#include "ifem/fem.hpp"
#include "ifem/mesh.hpp"

namespace ifem {

class InterfaceMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class TraceDirection { one_to_two, two_to_one };

/// Gamma-coupling data for a conforming pair of subdomain meshes.
///
/// Interface slots are indexed 0..n by increasing y; slot k pairs node
/// nodes1[k] of Omega_1 with nodes2[k] of Omega_2 at equal y. The inertial
/// weights are the diagonal entries of the B operators scaled by rho: per
/// side, the lumped mass carried by the interface node. gamma_mass is the
/// 1-D P1 mass matrix on Gamma, stored tridiagonally.
struct InterfaceCoupling {
  int subdivisions = 0;
  double h = 0.0;
  std::vector<int> nodes1;
  std::vector<int> nodes2;
  std::vector<double> inertial_weights_1;
  std::vector<double> inertial_weights_2;
  std::vector<double> gamma_diag;
  double gamma_off = 0.0;
};

InterfaceCoupling build_interface_coupling(const SubdomainMesh& mesh1, const SubdomainMesh& mesh2,
                                           double rho1, double rho2);

/// Interface values of `field` in slot order (increasing y). The direction
/// names the source side; a mismatched subdomain tag is invalid.
std::vector<double> transfer_trace(const NodalField& field, const InterfaceCoupling& coupling,
                                   TraceDirection direction);

/// Discrete Neumann flux of the donor field through Gamma, tested against
/// the interface hat functions: entry k = sum over donor interface edges of
/// int_e beta (grad u_h . n_donor) xi_k ds, with 2-point Gauss per edge.
std::vector<double> interface_flux_vector(const SubdomainMesh& donor_mesh,
                                          const NodalField& donor_field, const ScalarFn& beta,
                                          const InterfaceCoupling& coupling);

/// alpha * gamma_mass * values.
std::vector<double> gamma_mass_apply(const InterfaceCoupling& coupling, double alpha,
                                     const std::vector<double>& values);

/// alpha * gamma_mass as triplets over the given subdomain node indices
/// (slot k -> target_nodes[k]), for augmenting a subdomain system.
std::vector<Triplet> gamma_mass_triplets(const InterfaceCoupling& coupling, double alpha,
                                         const std::vector<int>& target_nodes);

}  // namespace ifem
