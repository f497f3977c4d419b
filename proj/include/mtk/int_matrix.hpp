#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "mtk/integer.hpp"

namespace mtk {

/// Dense matrix of arbitrary-precision integers, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& other) const;
  bool operator==(const IntMatrix& other) const;

  bool is_diagonal() const;
  Integer determinant() const;  // square only (fraction-free Bareiss)

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  /// col[dst] += factor * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void negate_row(std::size_t r);
  void negate_col(std::size_t c);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

struct SmithForm {
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix S;  // rows x cols, diagonal, nonnegative, d_i | d_{i+1}
  IntMatrix V;  // cols x cols, unimodular
};

/// U * A * V == S. Minimal-absolute-value pivoting, exact arithmetic throughout.
SmithForm smith_normal_form(const IntMatrix& a);

/// In-place Smith reduction of `a` with optional trackers: `u` accumulates row
/// operations (must start as identity of size rows), `v` column operations and
/// `v_inverse` their inverse (both start as identity of size cols).
void smith_reduce(IntMatrix& a, IntMatrix* u, IntMatrix* v, IntMatrix* v_inverse);

/// Row echelon form H = U * M with U unimodular. Returns the rank; rows of H at and
/// beyond the rank are zero, so the matching rows of U span the left kernel of M.
struct EchelonForm {
  IntMatrix H;
  IntMatrix U;
  std::vector<std::size_t> pivot_cols;  // one per nonzero row of H
};
EchelonForm echelon_with_transform(const IntMatrix& m);

/// Incremental row-echelon basis of a sublattice of Z^n (no transforms).
class LatticeBasis {
 public:
  explicit LatticeBasis(std::size_t dimension) : dimension_(dimension), rows_(dimension) {}
  /// Lattice known to contain modulus * Z^dimension (modulus > 0). Entries are kept
  /// reduced modulo it, which bounds coefficient growth.
  LatticeBasis(std::size_t dimension, const Integer& modulus);

  std::size_t dimension() const noexcept { return dimension_; }
  /// Adds v to the generating set.
  void insert(std::vector<Integer> v);
  /// Reduces v against the basis; returns the residue (zero iff v is in the lattice).
  std::vector<Integer> reduce(std::vector<Integer> v) const;
  bool contains(const std::vector<Integer>& v) const;
  /// Nonzero basis rows in pivot order.
  std::vector<std::vector<Integer>> basis() const;

 private:
  void reduce_tail(std::vector<Integer>& v, std::size_t from) const;

  std::size_t dimension_;
  Integer modulus_;  // zero when unknown
  std::vector<std::optional<std::vector<Integer>>> rows_;  // indexed by pivot column
};

/// Solves c * Y == x modulo a coordinate lattice: Y is k generator rows of length m and
/// `moduli[j]` is the modulus of coordinate j (0 means exact).
class LatticeSolver {
 public:
  LatticeSolver(const std::vector<std::vector<Integer>>& generators, const std::vector<Integer>& moduli);

  std::optional<std::vector<Integer>> solve(const std::vector<Integer>& x) const;

 private:
  std::size_t generator_count_;
  std::size_t dimension_;
  EchelonForm echelon_;
};

Integer extended_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y);

}  // namespace mtk
