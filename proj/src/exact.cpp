#include "gowerslab/exact.hpp"

#include <stdexcept>
#include <utility>

namespace gowerslab {

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

void IntMatrix::append_row(const IntVector& v) {
  if (rows_ == 0 && cols_ == 0) cols_ = v.size();
  if (v.size() != cols_) throw std::invalid_argument("IntMatrix::append_row: length mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
  ++rows_;
}

namespace {

// In-place Bareiss elimination; returns the rank. Rows [0, rank) end up in
// echelon form and span the original row space.
std::size_t bareiss(IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        BigInt v = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = std::move(v);
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

}  // namespace

std::size_t rank(IntMatrix m) { return bareiss(m); }

IntVector make_primitive(IntVector v) {
  BigInt g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 0 || g == 1) return v;
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return v;
}

std::vector<IntVector> row_space_basis(IntMatrix m) {
  const std::size_t r = bareiss(m);
  std::vector<IntVector> basis;
  basis.reserve(r);
  for (std::size_t i = 0; i < r; ++i) basis.push_back(make_primitive(m.row(i)));
  return basis;
}

std::vector<IntVector> kernel_basis(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  // Reduced row echelon form over Q.
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j);

  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const mpq_class inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;

  std::vector<IntVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<mpq_class> v(cols, 0);
    v[free] = 1;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -a[k][free];
    BigInt lcm = 1;
    for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    IntVector iv(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      mpq_class scaled = v[j] * lcm;
      iv[j] = scaled.get_num();
    }
    iv = make_primitive(std::move(iv));
    for (const auto& x : iv) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : iv) y = -y;
      break;
    }
    basis.push_back(std::move(iv));
  }
  return basis;
}

bool in_span(const std::vector<IntVector>& vectors, const IntVector& v) {
  if (vectors.empty()) {
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  }
  IntMatrix m = IntMatrix::from_rows(vectors, v.size());
  const std::size_t base = rank(m);
  m.append_row(v);
  return rank(std::move(m)) == base;
}

}  // namespace gowerslab
