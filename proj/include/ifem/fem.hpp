#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ifem/mesh.hpp"
#include "ifem/sparse.hpp"

namespace ifem {

using ScalarFn = std::function<double(double, double)>;
using TimeScalarFn = std::function<double(double, double, double)>;

/// Coefficient vector of a P1 function on one subdomain.
struct NodalField {
  std::vector<double> values;
  int time_index = 0;
  Side subdomain = Side::omega1;
};

/// Material data for one subdomain: diffusivity beta(x, y) and density rho.
struct CoefficientField {
  ScalarFn beta;
  double rho = 1.0;
};

class InvalidCoefficient : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Consistent P1 mass matrix scaled by rho; element matrices in closed form.
CsrMatrix assemble_mass(const SubdomainMesh& mesh, double rho);

/// Vertex-quadrature (lumped) mass as a diagonal weight vector. Equals the
/// consistent-mass row sums entrywise.
std::vector<double> assemble_lumped_mass(const SubdomainMesh& mesh, double rho);

/// Stiffness with centroid quadrature for beta. Throws InvalidCoefficient
/// when beta is non-positive at any element centroid.
CsrMatrix assemble_stiffness(const SubdomainMesh& mesh, const CoefficientField& coeff);

/// Load vector with the 3-point edge-midpoint rule (exact for quadratics).
std::vector<double> assemble_load(const SubdomainMesh& mesh, const TimeScalarFn& f, double t);

/// Constant gradient of the P1 interpolant on one triangle.
std::array<double, 2> element_gradient(const SubdomainMesh& mesh,
                                       const std::vector<double>& values, int triangle);

/// Gradients of the three local basis functions on one triangle.
std::array<std::array<double, 2>, 3> basis_gradients(const SubdomainMesh& mesh, int triangle);

}  // namespace ifem
