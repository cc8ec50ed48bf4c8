#pragma once

#include <functional>
#include <vector>

#include "ifem/fem.hpp"
#include "ifem/mesh.hpp"
#include "ifem/schemes.hpp"

namespace ifem {

using GradientFn = std::function<std::array<double, 2>(double, double)>;

/// Per-run error summary. Diverged runs carry +infinity in all error slots.
struct ErrorReport {
  SchemeKind kind = SchemeKind::coupled;
  RunStatus status = RunStatus::converged;
  double h = 0.0;
  double dt = 0.0;
  double l2_omega1 = 0.0;
  double l2_omega2 = 0.0;
  double l2_combined = 0.0;
  double h1_omega1 = 0.0;
  double h1_omega2 = 0.0;
  double h1_combined = 0.0;
};

/// L2 norm of (u_h - exact) with a degree-4-exact symmetric triangle rule.
double l2_error(const SubdomainMesh& mesh, const std::vector<double>& values,
                const ScalarFn& exact);

double h1_seminorm_error(const SubdomainMesh& mesh, const std::vector<double>& values,
                         const GradientFn& exact_gradient);

/// log2(e_k / e_{k+1}) between consecutive refinement levels; NaN where a
/// pair touches a non-finite error.
std::vector<double> convergence_rates(const std::vector<double>& errors);

/// Errors of a finished run against the exact solution at its final time.
ErrorReport compute_errors(const SimulationRun& run, const ManufacturedProblem& problem);

}  // namespace ifem
