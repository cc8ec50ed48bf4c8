#pragma once

#include <array>
#include <vector>

#include "ifem/fem.hpp"
#include "ifem/mesh.hpp"

namespace ifem {

/// Benchmark problem with exact solution u(x, y, t) = t sin(2 pi x) sin(2 pi y)
/// on both subdomains. The exact trace vanishes on all boundaries including
/// Gamma, and with a shared beta the interface flux jump is identically zero.
struct ManufacturedProblem {
  ScalarFn beta = [](double x, double y) { return 2.0 + x * x + y * y; };
  double rho1 = 1.0;
  double rho2 = 1.0;
  double final_time = 1.0;

  double rho(Side side) const { return side == Side::omega1 ? rho1 : rho2; }
};

double exact_value(double x, double y, double t);
std::array<double, 2> exact_gradient(double x, double y, double t);
double exact_rate(double x, double y, double t);

/// f = rho du/dt - div(beta grad u) for the exact solution, in closed form.
double source_term(Side side, double x, double y, double t, const ManufacturedProblem& problem);

/// beta dx_u(1-, y) - beta dx_u(1+, y); zero for the shared-beta problem.
double check_flux_jump(const ManufacturedProblem& problem, double y, double t);

/// Nodal interpolant of the exact solution at time t.
NodalField interpolate_exact(const SubdomainMesh& mesh, double t);

}  // namespace ifem
