#include "ifem/analysis.hpp"

#include <cmath>
#include <limits>

#include "ifem/manufactured.hpp"

namespace ifem {

namespace {

// Symmetric 6-point triangle rule, exact for polynomials of degree 4.
struct QuadPoint {
  double l0, l1, l2, weight;
};

const QuadPoint kRule[6] = {
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
};

bool finite_field(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

double l2_error(const SubdomainMesh& mesh, const std::vector<double>& values,
                const ScalarFn& exact) {
  if (!finite_field(values)) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.nodes[tri[0]];
    const auto& p1 = mesh.nodes[tri[1]];
    const auto& p2 = mesh.nodes[tri[2]];
    const double area = mesh.triangle_area(t);
    for (const auto& q : kRule) {
      const double x = q.l0 * p0[0] + q.l1 * p1[0] + q.l2 * p2[0];
      const double y = q.l0 * p0[1] + q.l1 * p1[1] + q.l2 * p2[1];
      const double uh = q.l0 * values[tri[0]] + q.l1 * values[tri[1]] + q.l2 * values[tri[2]];
      const double diff = uh - exact(x, y);
      acc += area * q.weight * diff * diff;
    }
  }
  return std::sqrt(acc);
}

double h1_seminorm_error(const SubdomainMesh& mesh, const std::vector<double>& values,
                         const GradientFn& exact_gradient) {
  if (!finite_field(values)) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.nodes[tri[0]];
    const auto& p1 = mesh.nodes[tri[1]];
    const auto& p2 = mesh.nodes[tri[2]];
    const double area = mesh.triangle_area(t);
    const auto gh = element_gradient(mesh, values, t);
    for (const auto& q : kRule) {
      const double x = q.l0 * p0[0] + q.l1 * p1[0] + q.l2 * p2[0];
      const double y = q.l0 * p0[1] + q.l1 * p1[1] + q.l2 * p2[1];
      const auto ge = exact_gradient(x, y);
      const double dx = gh[0] - ge[0];
      const double dy = gh[1] - ge[1];
      acc += area * q.weight * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(acc);
}

std::vector<double> convergence_rates(const std::vector<double>& errors) {
  std::vector<double> rates;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    if (!std::isfinite(errors[k]) || !std::isfinite(errors[k + 1])) {
      rates.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      rates.push_back(std::log2(errors[k] / errors[k + 1]));
    }
  }
  return rates;
}

ErrorReport compute_errors(const SimulationRun& run, const ManufacturedProblem& problem) {
  ErrorReport report;
  report.kind = run.config.kind;
  report.status = run.status;
  report.h = 1.0 / run.config.subdivisions;
  report.dt = run.config.dt;

  const double inf = std::numeric_limits<double>::infinity();
  if (run.status == RunStatus::diverged) {
    report.l2_omega1 = report.l2_omega2 = report.l2_combined = inf;
    report.h1_omega1 = report.h1_omega2 = report.h1_combined = inf;
    return report;
  }

  const double T = run.final_time;
  const SubdomainMesh mesh1 = build_subdomain_mesh(run.config.subdivisions, Side::omega1);
  const SubdomainMesh mesh2 = build_subdomain_mesh(run.config.subdivisions, Side::omega2);
  const auto exact = [T](double x, double y) { return exact_value(x, y, T); };
  const auto grad = [T](double x, double y) { return exact_gradient(x, y, T); };

  report.l2_omega1 = l2_error(mesh1, run.u1.values, exact);
  report.l2_omega2 = l2_error(mesh2, run.u2.values, exact);
  report.l2_combined = std::hypot(report.l2_omega1, report.l2_omega2);
  report.h1_omega1 = h1_seminorm_error(mesh1, run.u1.values, grad);
  report.h1_omega2 = h1_seminorm_error(mesh2, run.u2.values, grad);
  report.h1_combined = std::hypot(report.h1_omega1, report.h1_omega2);
  return report;
}

}  // namespace ifem
