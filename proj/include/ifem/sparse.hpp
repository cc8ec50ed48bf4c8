#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifem {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

class SolverFailure : public std::runtime_error {
public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), achieved_residual(residual) {}
  double achieved_residual;
};

/// Compressed-row sparse matrix, immutable after construction. Triplets are
/// deduplicated by sorted (row, col) accumulation, so the value layout is
/// deterministic for a given assembly order.
class CsrMatrix {
public:
  CsrMatrix() = default;
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry lookup; zero when the position is not stored.
  double at(int row, int col) const;

  std::vector<double> multiply(const std::vector<double>& x) const;
  std::vector<double> row_sums() const;
  double max_asymmetry() const;

  /// Coordinate-format text dump: `row col value`, 0-based.
  void write_coordinate(std::ostream& out) const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_offsets_ = {0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

/// Conjugate gradient with diagonal scaling. Returns x with
/// ||Ax - b|| / ||b|| <= tol; throws SolverFailure after 20*dimension
/// iterations.
std::vector<double> solve_spd(const CsrMatrix& system, const std::vector<double>& rhs,
                              double tol, const std::vector<double>* initial_guess = nullptr);

/// SPD system with Dirichlet unknowns eliminated. Built once from full-size
/// triplets plus a constrained mask; solves take full-length vectors and
/// return full-length solutions with constrained slots copied from the
/// supplied value vector.
class ConstrainedSystem {
public:
  ConstrainedSystem(int dimension, const std::vector<Triplet>& entries,
                    const std::vector<char>& constrained);

  std::vector<double> solve(const std::vector<double>& rhs,
                            const std::vector<double>& constrained_values, double tol,
                            const std::vector<double>* warm_start = nullptr) const;

  const CsrMatrix& reduced_matrix() const { return aff_; }
  const std::vector<int>& free_nodes() const { return free_; }
  int dimension() const { return dim_; }

private:
  CsrMatrix aff_;  // free-free block
  CsrMatrix afc_;  // free-constrained block, for rhs elimination
  std::vector<int> free_;
  std::vector<int> constrained_;
  int dim_ = 0;
};

}  // namespace ifem
