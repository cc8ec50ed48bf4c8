#include "doctest.h"

#include <cmath>
#include <numeric>

#ifdef IFEM_HAVE_EIGEN
#include <Eigen/Dense>
#endif

#include "ifem/fem.hpp"
#include "ifem/mesh.hpp"

using namespace ifem;

namespace {
const ScalarFn kUnitBeta = [](double, double) { return 1.0; };
const ScalarFn kVariableBeta = [](double x, double y) { return 2.0 + x * x + y * y; };
}  // namespace

TEST_CASE("consistent mass: total, center diagonal, rho scaling") {
  const auto mesh = build_subdomain_mesh(2, Side::omega1);
  const auto m1 = assemble_mass(mesh, 1.0);

  double total = 0.0;
  for (double v : m1.values()) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

  // Grid node (1,1) touches all eight incident triangles of area h^2/4:
  // diagonal entry 8 * (h^2/4) * 2/12 = h^2/3.
  const int center = mesh.node_index(1, 1);
  CHECK(m1.at(center, center) == doctest::Approx(0.25 / 3.0).epsilon(1e-15));

  // A cell centre touches the four triangles of its cell: h^2/6.
  const int cc = mesh.center_index(0, 0);
  CHECK(m1.at(cc, cc) == doctest::Approx(0.25 / 6.0).epsilon(1e-15));

  const auto m3 = assemble_mass(mesh, 3.0);
  for (int k = 0; k < m1.nnz(); ++k) {
    CHECK(m3.values()[k] == doctest::Approx(3.0 * m1.values()[k]).epsilon(1e-15));
  }

  CHECK(m1.max_asymmetry() == 0.0);
}

TEST_CASE("lumped mass equals consistent row sums exactly") {
  for (int n : {2, 3, 5, 8}) {
    const auto mesh = build_subdomain_mesh(n, Side::omega2);
    const auto lumped = assemble_lumped_mass(mesh, 1.0);
    const auto sums = assemble_mass(mesh, 1.0).row_sums();
    for (int i = 0; i < mesh.node_count(); ++i) {
      CHECK(lumped[i] == sums[i]);
    }
    CHECK(std::accumulate(lumped.begin(), lumped.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("lumped mass of interior nodes") {
  const auto mesh = build_subdomain_mesh(2, Side::omega1);
  const auto lumped = assemble_lumped_mass(mesh, 1.0);
  // Grid node: 8 incident triangles -> 2h^2/3; cell centre: 4 -> h^2/3.
  CHECK(lumped[mesh.node_index(1, 1)] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(lumped[mesh.center_index(0, 0)] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("unit stiffness reproduces the rotated 5-point stencil") {
  // On the criss-cross mesh the unit-coefficient stiffness couples each node
  // only to its four diagonal neighbours: a grid node to the surrounding
  // cell centres and a centre to its cell corners, all with weight -1 and
  // diagonal 4; grid-to-grid entries cancel exactly.
  const auto mesh = build_subdomain_mesh(4, Side::omega1);
  const auto k = assemble_stiffness(mesh, {kUnitBeta, 1.0});
  for (int j = 1; j < 4; ++j) {
    for (int i = 1; i < 4; ++i) {
      const int c = mesh.node_index(i, j);
      CHECK(k.at(c, c) == doctest::Approx(4.0).epsilon(1e-13));
      CHECK(k.at(c, mesh.center_index(i - 1, j - 1)) == doctest::Approx(-1.0).epsilon(1e-13));
      CHECK(k.at(c, mesh.center_index(i, j - 1)) == doctest::Approx(-1.0).epsilon(1e-13));
      CHECK(k.at(c, mesh.center_index(i - 1, j)) == doctest::Approx(-1.0).epsilon(1e-13));
      CHECK(k.at(c, mesh.center_index(i, j)) == doctest::Approx(-1.0).epsilon(1e-13));
      CHECK(k.at(c, mesh.node_index(i - 1, j)) == doctest::Approx(0.0).epsilon(1e-13));
      CHECK(k.at(c, mesh.node_index(i + 1, j)) == doctest::Approx(0.0).epsilon(1e-13));
      CHECK(k.at(c, mesh.node_index(i, j - 1)) == doctest::Approx(0.0).epsilon(1e-13));
      CHECK(k.at(c, mesh.node_index(i, j + 1)) == doctest::Approx(0.0).epsilon(1e-13));
    }
  }
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const int cc = mesh.center_index(i, j);
      CHECK(k.at(cc, cc) == doctest::Approx(4.0).epsilon(1e-13));
      CHECK(k.at(cc, mesh.node_index(i, j)) == doctest::Approx(-1.0).epsilon(1e-13));
      CHECK(k.at(cc, mesh.node_index(i + 1, j + 1)) == doctest::Approx(-1.0).epsilon(1e-13));
    }
  }

  const auto sums = k.row_sums();
  for (int j = 1; j < 4; ++j) {
    for (int i = 1; i < 4; ++i) {
      CHECK(std::fabs(sums[mesh.node_index(i, j)]) < 1e-13);
    }
  }
}

TEST_CASE("variable-coefficient stiffness rejects non-positive beta") {
  const auto mesh = build_subdomain_mesh(2, Side::omega1);
  CHECK_THROWS_AS(assemble_stiffness(mesh, {[](double x, double) { return x - 0.4; }, 1.0}),
                  InvalidCoefficient);
}

#ifdef IFEM_HAVE_EIGEN
TEST_CASE("variable-coefficient stiffness is symmetric positive semidefinite") {
  const auto mesh = build_subdomain_mesh(2, Side::omega1);
  const auto k = assemble_stiffness(mesh, {kVariableBeta, 1.0});
  CHECK(k.max_asymmetry() == 0.0);

  const int nn = mesh.node_count();
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(nn, nn);
  for (int r = 0; r < nn; ++r) {
    for (int c = 0; c < nn; ++c) dense(r, c) = k.at(r, c);
  }
  const Eigen::VectorXd eigs = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense).eigenvalues();
  for (int i = 0; i < nn; ++i) CHECK(eigs[i] >= -1e-12);
}
#endif

TEST_CASE("load vector: zero source, constant source, partition of unity") {
  const auto mesh = build_subdomain_mesh(2, Side::omega1);

  const auto zero = assemble_load(mesh, [](double, double, double) { return 0.0; }, 1.0);
  for (double v : zero) CHECK(v == 0.0);

  const auto one = assemble_load(mesh, [](double, double, double) { return 1.0; }, 0.0);
  // Unit source: entry = sum of incident areas / 3 (8 triangles of h^2/4).
  CHECK(one[mesh.node_index(1, 1)] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  const auto fx = assemble_load(mesh, [](double x, double, double) { return x; }, 0.0);
  CHECK(std::accumulate(fx.begin(), fx.end(), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("element gradients are exact for linears") {
  const auto mesh = build_subdomain_mesh(2, Side::omega1);
  std::vector<double> xs(mesh.node_count()), lin(mesh.node_count()),
      constant(mesh.node_count(), 5.0);
  for (int i = 0; i < mesh.node_count(); ++i) {
    xs[i] = mesh.nodes[i][0];
    lin[i] = 2.0 * mesh.nodes[i][0] + 3.0 * mesh.nodes[i][1];
  }
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto gx = element_gradient(mesh, xs, t);
    CHECK(gx[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gx[1] == doctest::Approx(0.0).epsilon(1e-13));

    const auto gc = element_gradient(mesh, constant, t);
    CHECK(std::fabs(gc[0]) < 1e-13);
    CHECK(std::fabs(gc[1]) < 1e-13);

    const auto gl = element_gradient(mesh, lin, t);
    CHECK(gl[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(gl[1] == doctest::Approx(3.0).epsilon(1e-13));
  }
}
