#include "doctest.h"

#include <random>

#include "ifem/fem.hpp"
#include "ifem/mesh.hpp"
#include "ifem/sparse.hpp"

using namespace ifem;

TEST_CASE("triplet assembly deduplicates and sorts") {
  std::vector<Triplet> t = {{1, 0, 2.0}, {0, 1, 1.0}, {1, 0, 3.0}, {0, 0, 1.0}};
  const auto m = CsrMatrix::from_triplets(2, 2, t);
  CHECK(m.nnz() == 3);
  CHECK(m.at(1, 0) == 5.0);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 0.0);
}

TEST_CASE("identity solve returns rhs") {
  std::vector<Triplet> t = {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}};
  const auto m = CsrMatrix::from_triplets(3, 3, t);
  const std::vector<double> b = {3.0, -1.0, 0.5};
  const auto x = solve_spd(m, b, 1e-12);
  for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("cg meets the residual contract on a fem system") {
  const auto mesh = build_subdomain_mesh(4, Side::omega1);
  const auto mass = assemble_mass(mesh, 1.0);
  const auto stiff = assemble_stiffness(mesh, {[](double, double) { return 1.0; }, 1.0});

  std::vector<Triplet> t;
  const double dt = 1.0 / 16.0;
  for (int r = 0; r < mass.rows(); ++r) {
    for (int k = mass.row_offsets()[r]; k < mass.row_offsets()[r + 1]; ++k) {
      t.push_back({r, mass.col_indices()[k], mass.values()[k] / dt});
    }
    for (int k = stiff.row_offsets()[r]; k < stiff.row_offsets()[r + 1]; ++k) {
      t.push_back({r, stiff.col_indices()[k], stiff.values()[k]});
    }
  }
  const auto a = CsrMatrix::from_triplets(mass.rows(), mass.rows(), t);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> b(a.rows());
  for (double& v : b) v = dist(rng);

  const auto x = solve_spd(a, b, 1e-12);
  const auto ax = a.multiply(x);
  double rnorm = 0.0, bnorm = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    rnorm += (ax[i] - b[i]) * (ax[i] - b[i]);
    bnorm += b[i] * b[i];
  }
  CHECK(std::sqrt(rnorm) <= 1e-12 * std::sqrt(bnorm));
}

TEST_CASE("five-point system recovers a known solution") {
  // b = A * ones => solve gives ones.
  const int n = 8;
  std::vector<Triplet> t;
  const int dim = (n - 1) * (n - 1);
  auto idx = [&](int i, int j) { return j * (n - 1) + i; };
  for (int j = 0; j < n - 1; ++j) {
    for (int i = 0; i < n - 1; ++i) {
      t.push_back({idx(i, j), idx(i, j), 4.0});
      if (i > 0) t.push_back({idx(i, j), idx(i - 1, j), -1.0});
      if (i < n - 2) t.push_back({idx(i, j), idx(i + 1, j), -1.0});
      if (j > 0) t.push_back({idx(i, j), idx(i, j - 1), -1.0});
      if (j < n - 2) t.push_back({idx(i, j), idx(i, j + 1), -1.0});
    }
  }
  const auto a = CsrMatrix::from_triplets(dim, dim, t);
  const auto b = a.multiply(std::vector<double>(dim, 1.0));
  const auto x = solve_spd(a, b, 1e-12);
  for (int i = 0; i < dim; ++i) CHECK(x[i] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("constrained system eliminates dirichlet unknowns") {
  // 1-D Laplacian on 5 nodes, ends pinned to 1 and 3; interior solves the
  // linear interpolant.
  std::vector<Triplet> t;
  for (int i = 0; i < 5; ++i) t.push_back({i, i, 2.0});
  for (int i = 0; i < 4; ++i) {
    t.push_back({i, i + 1, -1.0});
    t.push_back({i + 1, i, -1.0});
  }
  std::vector<char> constrained = {1, 0, 0, 0, 1};
  const ConstrainedSystem sys(5, t, constrained);
  CHECK(sys.reduced_matrix().rows() == 3);

  std::vector<double> rhs(5, 0.0);
  std::vector<double> values = {1.0, 0.0, 0.0, 0.0, 3.0};
  const auto x = sys.solve(rhs, values, 1e-13);
  CHECK(x[0] == 1.0);
  CHECK(x[4] == 3.0);
  CHECK(x[1] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(x[2] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(x[3] == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("non-spd input raises solver failure") {
  std::vector<Triplet> t = {{0, 0, -1.0}, {1, 1, -1.0}};
  const auto m = CsrMatrix::from_triplets(2, 2, t);
  CHECK_THROWS_AS(solve_spd(m, {1.0, 1.0}, 1e-12), SolverFailure);
}
