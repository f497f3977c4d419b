#include "mtk/int_matrix.hpp"

#include <algorithm>
#include <sstream>

#include "mtk/errors.hpp"

namespace mtk {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorCode::SizeMismatch, "ragged matrix literal");
    for (long v : row) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (cols_ != other.rows_) throw Error(ErrorCode::SizeMismatch, "matrix product dimension mismatch");
  IntMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

bool IntMatrix::operator==(const IntMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

Integer IntMatrix::determinant() const {
  if (rows_ != cols_) throw Error(ErrorCode::SizeMismatch, "determinant of non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  IntMatrix m = *this;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t j = 0; j < cols_; ++j)
    if ((*this)(src, j) != 0) (*this)(dst, j) += factor * (*this)(src, j);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t i = 0; i < rows_; ++i)
    if ((*this)(i, src) != 0) (*this)(i, dst) += factor * (*this)(i, src);
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
}

void IntMatrix::negate_col(std::size_t c) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
}

std::string IntMatrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << (*this)(i, j).get_str();
    out << ']';
  }
  out << ']';
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

// Tracker-aware elementary operations.
struct SmithOps {
  IntMatrix& a;
  IntMatrix* u;
  IntMatrix* v;
  IntMatrix* v_inverse;

  void swap_rows(std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    if (u) u->swap_rows(i, j);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    if (v) v->swap_cols(i, j);
    if (v_inverse) v_inverse->swap_rows(i, j);
  }
  void add_row(std::size_t dst, std::size_t src, const Integer& f) {
    a.add_row_multiple(dst, src, f);
    if (u) u->add_row_multiple(dst, src, f);
  }
  void add_col(std::size_t dst, std::size_t src, const Integer& f) {
    a.add_col_multiple(dst, src, f);
    if (v) v->add_col_multiple(dst, src, f);
    if (v_inverse) v_inverse->add_row_multiple(src, dst, -f);
  }
  void negate_row(std::size_t i) {
    a.negate_row(i);
    if (u) u->negate_row(i);
  }
};

Integer tdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

void smith_reduce(IntMatrix& a, IntMatrix* u, IntMatrix* v, IntMatrix* v_inverse) {
  SmithOps ops{a, u, v, v_inverse};
  const std::size_t rows = a.rows(), cols = a.cols();
  const std::size_t diag = std::min(rows, cols);
  for (std::size_t t = 0; t < diag; ++t) {
    // Minimal nonzero |entry| in the trailing block becomes the pivot.
    std::size_t pi = rows, pj = cols;
    Integer best;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        const Integer& x = a(i, j);
        if (x == 0) continue;
        if (pi == rows || abs(x) < best) {
          best = abs(x);
          pi = i;
          pj = j;
        }
      }
    if (pi == rows) break;
    ops.swap_rows(t, pi);
    ops.swap_cols(t, pj);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = tdiv(a(i, t), a(t, t));
        ops.add_row(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = tdiv(a(t, j), a(t, t));
        ops.add_col(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) {
        // Move the smallest remainder in row/column t onto the diagonal.
        std::size_t bi = t, bj = t;
        Integer b = abs(a(t, t));
        for (std::size_t i = t + 1; i < rows; ++i)
          if (a(i, t) != 0 && abs(a(i, t)) < b) {
            b = abs(a(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(t, j) != 0 && abs(a(t, j)) < b) {
            b = abs(a(t, j));
            bi = t;
            bj = j;
          }
        ops.swap_rows(t, bi);
        ops.swap_cols(t, bj);
        continue;
      }
      // Divisibility chain: a non-multiple in the trailing block is pulled into row t.
      bool fixed = false;
      for (std::size_t i = t + 1; i < rows && !fixed; ++i)
        for (std::size_t j = t + 1; j < cols && !fixed; ++j)
          if (a(i, j) != 0 && !mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            ops.add_row(t, i, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (a(t, t) < 0) ops.negate_row(t);
  }
}

SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm f{IntMatrix::identity(a.rows()), a, IntMatrix::identity(a.cols())};
  smith_reduce(f.S, &f.U, &f.V, nullptr);
  return f;
}

EchelonForm echelon_with_transform(const IntMatrix& m) {
  EchelonForm e{m, IntMatrix::identity(m.rows()), {}};
  IntMatrix& h = e.H;
  IntMatrix& u = e.U;
  std::size_t row = 0;
  for (std::size_t col = 0; col < h.cols() && row < h.rows(); ++col) {
    while (true) {
      std::size_t best = h.rows();
      for (std::size_t i = row; i < h.rows(); ++i)
        if (h(i, col) != 0 && (best == h.rows() || abs(h(i, col)) < abs(h(best, col)))) best = i;
      if (best == h.rows()) break;
      h.swap_rows(row, best);
      u.swap_rows(row, best);
      bool clean = true;
      for (std::size_t i = row + 1; i < h.rows(); ++i) {
        if (h(i, col) == 0) continue;
        Integer q = tdiv(h(i, col), h(row, col));
        h.add_row_multiple(i, row, -q);
        u.add_row_multiple(i, row, -q);
        if (h(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (h(row, col) == 0) continue;
    if (h(row, col) < 0) {
      h.negate_row(row);
      u.negate_row(row);
    }
    e.pivot_cols.push_back(col);
    ++row;
  }
  return e;
}

Integer extended_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
  Integer g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::size_t> leading(const std::vector<Integer>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  return std::nullopt;
}

void axpy(std::vector<Integer>& y, const Integer& a, const std::vector<Integer>& x, std::size_t from) {
  for (std::size_t i = from; i < y.size(); ++i)
    if (x[i] != 0) y[i] += a * x[i];
}

}  // namespace

LatticeBasis::LatticeBasis(std::size_t dimension, const Integer& modulus)
    : dimension_(dimension), modulus_(modulus), rows_(dimension) {
  if (modulus <= 0) throw Error(ErrorCode::InvalidArgument, "lattice modulus must be positive");
  for (std::size_t j = 0; j < dimension_; ++j) {
    std::vector<Integer> row(dimension_);
    row[j] = modulus;
    rows_[j] = std::move(row);
  }
}

void LatticeBasis::reduce_tail(std::vector<Integer>& v, std::size_t from) const {
  if (modulus_ == 0) return;
  for (std::size_t i = from; i < dimension_; ++i)
    if (v[i] != 0) v[i] = mod_floor(v[i], modulus_);
}

void LatticeBasis::insert(std::vector<Integer> v) {
  if (v.size() != dimension_) throw Error(ErrorCode::SizeMismatch, "lattice vector has wrong dimension");
  reduce_tail(v, 0);
  while (auto lead = leading(v)) {
    const std::size_t p = *lead;
    auto& slot = rows_[p];
    if (!slot) {
      if (v[p] < 0)
        for (auto& x : v) x = -x;
      slot = std::move(v);
      return;
    }
    std::vector<Integer>& b = *slot;
    if (mpz_divisible_p(v[p].get_mpz_t(), b[p].get_mpz_t())) {
      Integer q = v[p] / b[p];
      axpy(v, -q, b, p);
      reduce_tail(v, p);
      continue;
    }
    // Replace b by the gcd combination and v by the complementary one (unimodular 2x2 step).
    Integer x, y;
    Integer g = extended_gcd(b[p], v[p], x, y);
    Integer bp = b[p] / g, vp = v[p] / g;
    std::vector<Integer> nb(dimension_), nv(dimension_);
    for (std::size_t i = p; i < dimension_; ++i) {
      nb[i] = x * b[i] + y * v[i];
      nv[i] = vp * b[i] - bp * v[i];
    }
    if (nb[p] < 0)
      for (auto& t : nb) t = -t;
    reduce_tail(nb, p + 1);
    reduce_tail(nv, p);
    b = std::move(nb);
    v = std::move(nv);
  }
}

std::vector<Integer> LatticeBasis::reduce(std::vector<Integer> v) const {
  if (v.size() != dimension_) throw Error(ErrorCode::SizeMismatch, "lattice vector has wrong dimension");
  for (std::size_t p = 0; p < dimension_; ++p) {
    if (v[p] == 0 || !rows_[p]) continue;
    const std::vector<Integer>& b = *rows_[p];
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), v[p].get_mpz_t(), b[p].get_mpz_t());
    axpy(v, -q, b, p);
  }
  return v;
}

bool LatticeBasis::contains(const std::vector<Integer>& v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
}

std::vector<std::vector<Integer>> LatticeBasis::basis() const {
  std::vector<std::vector<Integer>> out;
  for (const auto& r : rows_)
    if (r) out.push_back(*r);
  return out;
}

LatticeSolver::LatticeSolver(const std::vector<std::vector<Integer>>& generators, const std::vector<Integer>& moduli)
    : generator_count_(generators.size()), dimension_(moduli.size()) {
  std::size_t torsion = 0;
  for (const auto& d : moduli)
    if (d != 0) ++torsion;
  IntMatrix m(generator_count_ + torsion, dimension_);
  for (std::size_t i = 0; i < generator_count_; ++i) {
    if (generators[i].size() != dimension_) throw Error(ErrorCode::SizeMismatch, "generator has wrong dimension");
    for (std::size_t j = 0; j < dimension_; ++j) m(i, j) = generators[i][j];
  }
  std::size_t r = generator_count_;
  for (std::size_t j = 0; j < dimension_; ++j)
    if (moduli[j] != 0) m(r++, j) = moduli[j];
  echelon_ = echelon_with_transform(m);
}

std::optional<std::vector<Integer>> LatticeSolver::solve(const std::vector<Integer>& x) const {
  if (x.size() != dimension_) throw Error(ErrorCode::SizeMismatch, "target has wrong dimension");
  std::vector<Integer> residual = x;
  const IntMatrix& h = echelon_.H;
  std::vector<Integer> z(h.rows());
  for (std::size_t i = 0; i < echelon_.pivot_cols.size(); ++i) {
    const std::size_t c = echelon_.pivot_cols[i];
    if (residual[c] == 0) continue;
    if (!mpz_divisible_p(residual[c].get_mpz_t(), h(i, c).get_mpz_t())) return std::nullopt;
    z[i] = residual[c] / h(i, c);
    for (std::size_t j = c; j < dimension_; ++j)
      if (h(i, j) != 0) residual[j] -= z[i] * h(i, j);
  }
  for (const auto& r : residual)
    if (r != 0) return std::nullopt;
  std::vector<Integer> c(generator_count_);
  const IntMatrix& u = echelon_.U;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] == 0) continue;
    for (std::size_t j = 0; j < generator_count_; ++j)
      if (u(i, j) != 0) c[j] += z[i] * u(i, j);
  }
  return c;
}

}  // namespace mtk
