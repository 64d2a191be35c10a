#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace gowerslab {

using BigInt = mpz_class;
using IntVector = std::vector<BigInt>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// All rows must have length `cols`.
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector row(std::size_t r) const;
  IntMatrix transposed() const;
  void append_row(const IntVector& v);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Rank over Q, by fraction-free (Bareiss) elimination.
std::size_t rank(IntMatrix m);

/// Basis of the row space over Q: the nonzero echelon rows left by Bareiss
/// elimination, each divided by the gcd of its entries.
std::vector<IntVector> row_space_basis(IntMatrix m);

/// Integer basis of {v : m v = 0}, each vector primitive with a positive
/// leading entry.
std::vector<IntVector> kernel_basis(const IntMatrix& m);

/// v lies in the Q-span of `vectors` (all of one length).
bool in_span(const std::vector<IntVector>& vectors, const IntVector& v);

/// Divides out the gcd of the entries; zero vectors are returned unchanged.
IntVector make_primitive(IntVector v);

}  // namespace gowerslab
