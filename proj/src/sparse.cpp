#include "ifem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace ifem {

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_.assign(1, 0);
  m.row_offsets_.reserve(rows + 1);

  std::size_t k = 0;
  for (int r = 0; r < rows; ++r) {
    while (k < entries.size() && entries[k].row == r) {
      const int c = entries[k].col;
      double v = 0.0;
      while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
        v += entries[k].value;
        ++k;
      }
      m.col_indices_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_offsets_.push_back(static_cast<int>(m.col_indices_.size()));
  }
  return m;
}

double CsrMatrix::at(int row, int col) const {
  const auto begin = col_indices_.begin() + row_offsets_[row];
  const auto end = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[it - col_indices_.begin()];
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      acc += values_[k] * x[col_indices_[k]];
    }
    y[r] = acc;
  }
  return y;
}

std::vector<double> CsrMatrix::row_sums() const {
  std::vector<double> s(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      s[r] += values_[k];
    }
  }
  return s;
}

double CsrMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      worst = std::max(worst, std::fabs(values_[k] - at(col_indices_[k], r)));
    }
  }
  return worst;
}

void CsrMatrix::write_coordinate(std::ostream& out) const {
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      out << r << ' ' << col_indices_[k] << ' ' << values_[k] << '\n';
    }
  }
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<double> solve_spd(const CsrMatrix& system, const std::vector<double>& rhs,
                              double tol, const std::vector<double>* initial_guess) {
  const int n = system.rows();
  std::vector<double> x = initial_guess ? *initial_guess : std::vector<double>(n, 0.0);

  const double bnorm = std::sqrt(dot(rhs, rhs));
  if (bnorm == 0.0) {
    return std::vector<double>(n, 0.0);
  }

  std::vector<double> inv_diag(n, 1.0);
  for (int i = 0; i < n; ++i) {
    const double d = system.at(i, i);
    if (d > 0.0) inv_diag[i] = 1.0 / d;
  }

  std::vector<double> r = system.multiply(x);
  for (int i = 0; i < n; ++i) r[i] = rhs[i] - r[i];

  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  std::vector<double> p = z;

  double rz = dot(r, z);
  double rnorm = std::sqrt(dot(r, r));
  const long max_iters = 20L * n;

  for (long it = 0; it < max_iters && rnorm > tol * bnorm; ++it) {
    const std::vector<double> ap = system.multiply(p);
    const double pap = dot(p, ap);
    if (pap <= 0.0 || !std::isfinite(pap)) {
      throw SolverFailure("solve_spd: matrix is not positive definite", rnorm / bnorm);
    }
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_next;
    rnorm = std::sqrt(dot(r, r));
  }

  if (rnorm > tol * bnorm) {
    throw SolverFailure("solve_spd: iteration cap exceeded", rnorm / bnorm);
  }
  return x;
}

ConstrainedSystem::ConstrainedSystem(int dimension, const std::vector<Triplet>& entries,
                                     const std::vector<char>& constrained)
    : dim_(dimension) {
  std::vector<int> reduced_index(dimension, -1);
  for (int i = 0; i < dimension; ++i) {
    if (constrained[i]) {
      constrained_.push_back(i);
    } else {
      reduced_index[i] = static_cast<int>(free_.size());
      free_.push_back(i);
    }
  }
  std::vector<int> constrained_index(dimension, -1);
  for (std::size_t k = 0; k < constrained_.size(); ++k) {
    constrained_index[constrained_[k]] = static_cast<int>(k);
  }

  std::vector<Triplet> ff, fc;
  for (const Triplet& t : entries) {
    if (constrained[t.row]) continue;
    if (constrained[t.col]) {
      fc.push_back({reduced_index[t.row], constrained_index[t.col], t.value});
    } else {
      ff.push_back({reduced_index[t.row], reduced_index[t.col], t.value});
    }
  }
  const int nf = static_cast<int>(free_.size());
  const int nc = static_cast<int>(constrained_.size());
  aff_ = CsrMatrix::from_triplets(nf, nf, std::move(ff));
  afc_ = CsrMatrix::from_triplets(nf, nc, std::move(fc));
}

std::vector<double> ConstrainedSystem::solve(const std::vector<double>& rhs,
                                             const std::vector<double>& constrained_values,
                                             double tol,
                                             const std::vector<double>* warm_start) const {
  const int nf = static_cast<int>(free_.size());
  std::vector<double> g(constrained_.size());
  for (std::size_t k = 0; k < constrained_.size(); ++k) {
    g[k] = constrained_values[constrained_[k]];
  }

  std::vector<double> b(nf);
  for (int k = 0; k < nf; ++k) b[k] = rhs[free_[k]];
  const std::vector<double> lift = afc_.multiply(g);
  for (int k = 0; k < nf; ++k) b[k] -= lift[k];

  std::vector<double> x0;
  const std::vector<double>* guess = nullptr;
  if (warm_start) {
    x0.resize(nf);
    for (int k = 0; k < nf; ++k) x0[k] = (*warm_start)[free_[k]];
    guess = &x0;
  }

  const std::vector<double> xf = solve_spd(aff_, b, tol, guess);

  std::vector<double> x(dim_, 0.0);
  for (std::size_t k = 0; k < constrained_.size(); ++k) x[constrained_[k]] = g[k];
  for (int k = 0; k < nf; ++k) x[free_[k]] = xf[k];
  return x;
}

}  // namespace ifem
