#include "pmconv/matrix.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmconv::exact {

Matrix Matrix::identity(uint32_t p, size_t n) {
  Matrix m(p, n, n);
  for (size_t i = 0; i < n; ++i) m.set(i, i, 1 % p);
  return m;
}

Matrix Matrix::from_rows(uint32_t p, const std::vector<std::vector<long long>>& rows) {
  size_t r = rows.size();
  size_t c = r ? rows[0].size() : 0;
  Matrix m(p, r, c);
  for (size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("from_rows: ragged rows");
    for (size_t j = 0; j < c; ++j) m.a_[i * c + j] = fp_from_int(rows[i][j], p);
  }
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](uint32_t v) { return v == 0; });
}

Matrix Matrix::mul(const Matrix& rhs) const {
  if (cols_ != rhs.rows_ || p_ != rhs.p_) throw std::invalid_argument("mul: shape/field mismatch");
  Matrix out(p_, rows_, rhs.cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t k = 0; k < cols_; ++k) {
      uint32_t v = a_[i * cols_ + k];
      if (v == 0) continue;
      const uint32_t* rr = rhs.row(k);
      uint32_t* ro = out.row(i);
      for (size_t j = 0; j < rhs.cols_; ++j)
        ro[j] = fp_add(ro[j], fp_mul(v, rr[j], p_), p_);
    }
  }
  return out;
}

std::vector<uint32_t> Matrix::mul_vec(const std::vector<uint32_t>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("mul_vec: size mismatch");
  std::vector<uint32_t> out(rows_, 0);
  for (size_t i = 0; i < rows_; ++i) {
    uint64_t acc = 0;
    const uint32_t* r = row(i);
    for (size_t j = 0; j < cols_; ++j) acc += static_cast<uint64_t>(r[j]) * v[j] % p_;
    out[i] = static_cast<uint32_t>(acc % p_);
  }
  return out;
}

Matrix Matrix::add(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || p_ != rhs.p_)
    throw std::invalid_argument("add: shape/field mismatch");
  Matrix out = *this;
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = fp_add(out.a_[i], rhs.a_[i], p_);
  return out;
}

Matrix Matrix::sub(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || p_ != rhs.p_)
    throw std::invalid_argument("sub: shape/field mismatch");
  Matrix out = *this;
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = fp_sub(out.a_[i], rhs.a_[i], p_);
  return out;
}

Matrix Matrix::scaled(uint32_t c) const {
  Matrix out = *this;
  for (auto& v : out.a_) v = fp_mul(v, c % p_, p_);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(p_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) out.a_[j * rows_ + i] = a_[i * cols_ + j];
  return out;
}

Matrix Matrix::kron(const Matrix& rhs) const {
  if (p_ != rhs.p_) throw std::invalid_argument("kron: field mismatch");
  Matrix out(p_, rows_ * rhs.rows_, cols_ * rhs.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) {
      uint32_t v = a_[i * cols_ + j];
      if (v == 0) continue;
      for (size_t k = 0; k < rhs.rows_; ++k)
        for (size_t l = 0; l < rhs.cols_; ++l)
          out.set(i * rhs.rows_ + k, j * rhs.cols_ + l, fp_mul(v, rhs.at(k, l), p_));
    }
  return out;
}

Matrix Matrix::vstack(const std::vector<Matrix>& blocks, uint32_t p, size_t cols) {
  size_t rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix out(p, rows, cols);
  size_t r0 = 0;
  for (const auto& b : blocks) {
    out.place(r0, 0, b);
    r0 += b.rows();
  }
  return out;
}

Matrix Matrix::hstack(const std::vector<Matrix>& blocks, uint32_t p, size_t rows) {
  size_t cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Matrix out(p, rows, cols);
  size_t c0 = 0;
  for (const auto& b : blocks) {
    out.place(0, c0, b);
    c0 += b.cols();
  }
  return out;
}

void Matrix::place(size_t r0, size_t c0, const Matrix& src) {
  if (r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_)
    throw std::out_of_range("place: block exceeds matrix");
  for (size_t i = 0; i < src.rows_; ++i)
    for (size_t j = 0; j < src.cols_; ++j) a_[(r0 + i) * cols_ + c0 + j] = src.a_[i * src.cols_ + j];
}

Matrix Matrix::block(size_t r0, size_t c0, size_t nrows, size_t ncols) const {
  if (r0 + nrows > rows_ || c0 + ncols > cols_) throw std::out_of_range("block: out of range");
  Matrix out(p_, nrows, ncols);
  for (size_t i = 0; i < nrows; ++i)
    for (size_t j = 0; j < ncols; ++j) out.a_[i * ncols + j] = a_[(r0 + i) * cols_ + c0 + j];
  return out;
}

Matrix Matrix::columns(const std::vector<size_t>& idx) const {
  Matrix out(p_, rows_, idx.size());
  for (size_t j = 0; j < idx.size(); ++j)
    for (size_t i = 0; i < rows_; ++i) out.a_[i * idx.size() + j] = a_[i * cols_ + idx[j]];
  return out;
}

namespace detail {

namespace {

// Row update shared by both kernels: rows[r] -= rows[pivot] * factor,
// starting at column `col0` (everything left of it is already zero).
inline void axpy_row(uint32_t* target, const uint32_t* pivot, uint32_t factor, size_t col0,
                     size_t cols, uint32_t p) {
  for (size_t j = col0; j < cols; ++j)
    target[j] = fp_sub(target[j], fp_mul(factor, pivot[j], p), p);
}

template <bool kParallel>
void eliminate_impl(Matrix& m, std::vector<size_t>& pivots) {
  const uint32_t p = m.p();
  const size_t rows = m.rows(), cols = m.cols();
  pivots.clear();
  size_t lead = 0;
  for (size_t col = 0; col < cols && lead < rows; ++col) {
    size_t pr = lead;
    while (pr < rows && m.at(pr, col) == 0) ++pr;
    if (pr == rows) continue;
    if (pr != lead)
      for (size_t j = col; j < cols; ++j) {
        uint32_t t = m.row(lead)[j];
        m.row(lead)[j] = m.row(pr)[j];
        m.row(pr)[j] = t;
      }
    uint32_t inv = fp_inv(m.at(lead, col), p);
    if (inv != 1)
      for (size_t j = col; j < cols; ++j) m.row(lead)[j] = fp_mul(m.row(lead)[j], inv, p);
    const uint32_t* prow = m.row(lead);
    if constexpr (kParallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (long long r = 0; r < static_cast<long long>(rows); ++r) {
        if (static_cast<size_t>(r) == lead) continue;
        uint32_t f = m.at(static_cast<size_t>(r), col);
        if (f) axpy_row(m.row(static_cast<size_t>(r)), prow, f, col, cols, p);
      }
    } else {
      for (size_t r = 0; r < rows; ++r) {
        if (r == lead) continue;
        uint32_t f = m.at(r, col);
        if (f) axpy_row(m.row(r), prow, f, col, cols, p);
      }
    }
    pivots.push_back(col);
    ++lead;
  }
}

}  // namespace

void eliminate_serial(Matrix& m, std::vector<size_t>& pivots) { eliminate_impl<false>(m, pivots); }
void eliminate_parallel(Matrix& m, std::vector<size_t>& pivots) { eliminate_impl<true>(m, pivots); }

}  // namespace detail

namespace {

constexpr size_t kParallelCutoff = 1u << 16;  // entries; below this threads don't pay off

bool use_parallel(const Matrix& m, Exec exec) {
#ifdef _OPENMP
  if (exec == Exec::Parallel) return true;
  if (exec == Exec::Serial) return false;
  return m.rows() * m.cols() >= kParallelCutoff && omp_get_max_threads() > 1;
#else
  (void)m;
  (void)exec;
  return false;
#endif
}

}  // namespace

RrefResult rref(const Matrix& m, Exec exec) {
  RrefResult out{m, {}};
  if (use_parallel(m, exec))
    detail::eliminate_parallel(out.m, out.pivots);
  else
    detail::eliminate_serial(out.m, out.pivots);
  return out;
}

size_t rank(const Matrix& m, Exec exec) { return rref(m, exec).pivots.size(); }

Matrix kernel_basis(const Matrix& m, Exec exec) {
  RrefResult r = rref(m, exec);
  const size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (size_t c : r.pivots) is_pivot[c] = true;
  std::vector<size_t> free_cols;
  for (size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix out(m.p(), n, free_cols.size());
  for (size_t k = 0; k < free_cols.size(); ++k) {
    size_t fc = free_cols[k];
    out.set(fc, k, 1);
    for (size_t i = 0; i < r.pivots.size(); ++i)
      out.set(r.pivots[i], k, fp_neg(r.m.at(i, fc), m.p()));
  }
  return out;
}

Matrix cokernel_projection(const Matrix& m, Exec exec) {
  return kernel_basis(m.transpose(), exec).transpose();
}

std::optional<std::vector<uint32_t>> solve(const Matrix& m, const std::vector<uint32_t>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs size mismatch");
  Matrix bm(m.p(), m.rows(), 1);
  for (size_t i = 0; i < b.size(); ++i) bm.set(i, 0, b[i]);
  auto x = solve_matrix(m, bm);
  if (!x) return std::nullopt;
  std::vector<uint32_t> out(m.cols());
  for (size_t i = 0; i < out.size(); ++i) out[i] = x->at(i, 0);
  return out;
}

std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& b) {
  if (b.rows() != m.rows() || b.p() != m.p())
    throw std::invalid_argument("solve_matrix: shape/field mismatch");
  Matrix aug = Matrix::hstack({m, b}, m.p(), m.rows());
  RrefResult r = rref(aug);
  Matrix x(m.p(), m.cols(), b.cols());
  for (size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] >= m.cols()) return std::nullopt;  // pivot in rhs block: inconsistent
    for (size_t j = 0; j < b.cols(); ++j) x.set(r.pivots[i], j, r.m.at(i, m.cols() + j));
  }
  return x;
}

Matrix left_inverse(const Matrix& m) {
  // Pick pivot rows of m making a square invertible block, then invert it.
  RrefResult rt = rref(m.transpose());
  if (rt.pivots.size() != m.cols()) throw std::invalid_argument("left_inverse: not full column rank");
  Matrix sq(m.p(), m.cols(), m.cols());
  for (size_t i = 0; i < m.cols(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) sq.set(i, j, m.at(rt.pivots[i], j));
  auto inv = solve_matrix(sq, Matrix::identity(m.p(), m.cols()));
  if (!inv) throw std::logic_error("left_inverse: pivot block not invertible");
  Matrix out(m.p(), m.cols(), m.rows());
  for (size_t i = 0; i < m.cols(); ++i)
    for (size_t k = 0; k < m.cols(); ++k)
      out.set(i, rt.pivots[k], inv->at(i, k));
  return out;
}

Matrix right_inverse(const Matrix& m) { return left_inverse(m.transpose()).transpose(); }

}  // namespace pmconv::exact
