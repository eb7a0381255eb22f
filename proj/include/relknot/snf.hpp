#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace relknot {

using BigInt = boost::multiprecision::cpp_int;

/// Column-major sparse integer matrix: columns[j] lists (row, value) pairs
/// sorted by row with nonzero values.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> columns;

  SparseMatrix() = default;
  SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

  std::size_t nonzeros() const;
  /// Adds `v` at (r, c), keeping the column sorted; drops entries that cancel.
  void add(std::size_t r, std::size_t c, std::int64_t v);
  std::int64_t at(std::size_t r, std::size_t c) const;
};

/// Dense row-major matrix of big integers.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_sparse(const SparseMatrix& m);
  static DenseMatrix from_rows(const std::vector<std::vector<long long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  DenseMatrix operator*(const DenseMatrix& o) const;
  std::vector<BigInt> operator*(const std::vector<BigInt>& v) const;
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Exact determinant of a square matrix (fraction-free elimination).
  BigInt determinant() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Invariant factors of a matrix: the nonzero diagonal entries d1 | d2 | ...
/// of its Smith form (including ones), so rank = factors.size().
struct SmithFactors {
  std::vector<BigInt> factors;
  std::size_t rank() const { return factors.size(); }
  /// Factors greater than one.
  std::vector<BigInt> torsion() const;
};

/// Sparse elimination: unit pivots are removed first with column operations
/// (Markowitz-style ordering to limit fill-in) on 64-bit entries with overflow
/// detection, restarting on big integers if needed; the remaining core goes
/// through dense elimination.
SmithFactors smith_factors(const SparseMatrix& m);
SmithFactors smith_factors(const DenseMatrix& m);

/// Full Smith form with unimodular U, V such that U * M * V = S.
struct SmithDecomposition {
  DenseMatrix u;
  DenseMatrix s;
  DenseMatrix v;
  std::size_t rank = 0;
  /// Diagonal of S; entries beyond `rank` are zero.
  std::vector<BigInt> diagonal() const;
};

SmithDecomposition smith_decomposition(const DenseMatrix& m);

/// Solution of M x = b over the integers, if any, using a decomposition of M.
struct IntegerSolve {
  bool solvable = false;
  std::vector<BigInt> x;
  /// Least m >= 1 with m*b in the column span; 0 encodes infinity.
  BigInt order;
};

IntegerSolve solve_integer(const SmithDecomposition& d, const std::vector<BigInt>& b);

/// Makes a nonnegative diagonal into a divisibility chain with the same
/// product structure (replacing pairs by gcd and lcm), zeros kept last.
void normalize_divisibility(std::vector<BigInt>& diag);

}  // namespace relknot
