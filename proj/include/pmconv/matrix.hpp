#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pmconv/fp.hpp"

namespace pmconv::exact {

/// Execution policy for the elimination kernels. `Auto` picks the OpenMP
/// kernel once the instance is large enough to amortize thread startup;
/// `Serial` is the reference path the tests compare against.
enum class Exec { Auto, Serial, Parallel };

/// Dense row-major matrix over F_p. Immutable in spirit: operations return
/// fresh matrices and never mutate their inputs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(uint32_t p, size_t rows, size_t cols)
      : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {
    if (!is_prime(p)) throw std::invalid_argument("Matrix: p must be prime");
  }

  static Matrix identity(uint32_t p, size_t n);
  static Matrix zero(uint32_t p, size_t rows, size_t cols) { return Matrix(p, rows, cols); }
  /// Builds from row-major signed integers (reduced mod p).
  static Matrix from_rows(uint32_t p, const std::vector<std::vector<long long>>& rows);

  uint32_t p() const { return p_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  uint32_t at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
  void set(size_t r, size_t c, uint32_t v) { a_[r * cols_ + c] = v % p_; }
  const uint32_t* row(size_t r) const { return a_.data() + r * cols_; }
  uint32_t* row(size_t r) { return a_.data() + r * cols_; }

  bool operator==(const Matrix& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool is_zero() const;

  Matrix mul(const Matrix& rhs) const;
  std::vector<uint32_t> mul_vec(const std::vector<uint32_t>& v) const;
  Matrix add(const Matrix& rhs) const;
  Matrix sub(const Matrix& rhs) const;
  Matrix scaled(uint32_t c) const;
  Matrix transpose() const;
  Matrix kron(const Matrix& rhs) const;

  /// Stacks blocks vertically / horizontally; dimensions must agree.
  static Matrix vstack(const std::vector<Matrix>& blocks, uint32_t p, size_t cols);
  static Matrix hstack(const std::vector<Matrix>& blocks, uint32_t p, size_t rows);

  /// Copies `src` into this matrix with its top-left corner at (r0, c0).
  void place(size_t r0, size_t c0, const Matrix& src);
  Matrix block(size_t r0, size_t c0, size_t nrows, size_t ncols) const;
  Matrix columns(const std::vector<size_t>& idx) const;

 private:
  uint32_t p_{2};
  size_t rows_{0}, cols_{0};
  std::vector<uint32_t> a_;
};

struct RrefResult {
  Matrix m;                    // reduced row echelon form
  std::vector<size_t> pivots;  // pivot column per pivot row
};

RrefResult rref(const Matrix& m, Exec exec = Exec::Auto);

size_t rank(const Matrix& m, Exec exec = Exec::Auto);

/// Columns span ker(m); returns a cols(m) x nullity matrix.
Matrix kernel_basis(const Matrix& m, Exec exec = Exec::Auto);

/// Surjection q from the codomain of m with ker q = im m. q has
/// rows(m) - rank(m) rows and full row rank, and q * m = 0.
Matrix cokernel_projection(const Matrix& m, Exec exec = Exec::Auto);

/// Some x with m x = b, or nullopt when the system is inconsistent.
std::optional<std::vector<uint32_t>> solve(const Matrix& m, const std::vector<uint32_t>& b);

/// Solves m X = B columnwise; nullopt if any column is inconsistent.
std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& b);

/// Left inverse of a full-column-rank matrix (L m = I).
Matrix left_inverse(const Matrix& m);
/// Right inverse of a full-row-rank matrix (m R = I).
Matrix right_inverse(const Matrix& m);

namespace detail {
// Elimination kernels shared by everything above. Both bring `m` to reduced
// row echelon form in place and report pivot columns; the parallel one
// distributes the row updates with OpenMP. Kept separately callable so tests
// and the benchmark can compare them directly.
void eliminate_serial(Matrix& m, std::vector<size_t>& pivots);
void eliminate_parallel(Matrix& m, std::vector<size_t>& pivots);
}  // namespace detail

}  // namespace pmconv::exact
