#pragma once

// Independent brute-force oracles. Nothing here calls the elimination code under test:
// group structures come from element-order statistics, determinants from cofactor-free
// rational elimination, units from exhaustive search.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "mtk/int_matrix.hpp"
#include "mtk/ring.hpp"

namespace oracle {

inline std::vector<std::int64_t> prime_factors(std::int64_t m) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      out.push_back(p);
      while (m % p == 0) m /= p;
    }
  if (m > 1) out.push_back(m);
  return out;
}

// Invariant factors of a finite abelian group of the given order, from the function
// count_killed(e) = #{x : e*x = 0}. |G[p^k]| / |G[p^(k-1)]| = p^(number of cyclic
// p-factors of exponent >= k).
inline std::vector<std::int64_t> invariant_factors_from_torsion_counts(
    std::int64_t order, const std::function<std::int64_t(std::int64_t)>& count_killed) {
  std::vector<std::vector<std::int64_t>> exponents_by_prime;  // prime powers, descending
  for (auto p : prime_factors(order)) {
    std::int64_t pp = p, prev = 1;
    std::vector<int> at_least;  // at_least[k-1] = number of cyclic factors of exponent >= k
    while (true) {
      std::int64_t c = count_killed(pp);
      if (c == prev) break;
      int r = 0;
      for (std::int64_t q = c / prev; q > 1; q /= p) ++r;
      at_least.push_back(r);
      prev = c;
      pp *= p;
    }
    std::vector<std::int64_t> powers;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
      int exactly = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
      std::int64_t value = 1;
      for (std::size_t i = 0; i <= k; ++i) value *= p;
      for (int i = 0; i < exactly; ++i) powers.push_back(value);
    }
    std::sort(powers.rbegin(), powers.rend());
    exponents_by_prime.push_back(powers);
  }
  // Largest invariant factor multiplies the largest power of every prime, and so on.
  std::size_t count = 0;
  for (const auto& v : exponents_by_prime) count = std::max(count, v.size());
  std::vector<std::int64_t> factors(count, 1);
  for (const auto& v : exponents_by_prime)
    for (std::size_t i = 0; i < v.size(); ++i) factors[i] *= v[i];
  std::reverse(factors.begin(), factors.end());
  return factors;
}

// Units by exhaustive search for an inverse.
inline std::vector<std::size_t> brute_units(const mtk::Ring& ring) {
  std::vector<std::size_t> out;
  std::size_t one = ring.index_of(ring.one());
  for (std::size_t x = 0; x < ring.size(); ++x)
    for (std::size_t y = 0; y < ring.size(); ++y)
      if (ring.mul_index(x, y) == one) {
        out.push_back(x);
        break;
      }
  return out;
}

// Unit group structure from multiplicative orders.
inline std::vector<std::int64_t> brute_unit_group(const mtk::Ring& ring) {
  auto units = brute_units(ring);
  std::size_t one = ring.index_of(ring.one());
  std::vector<std::int64_t> order(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    std::size_t x = units[i];
    std::int64_t k = 1;
    while (x != one) {
      x = ring.mul_index(x, units[i]);
      ++k;
    }
    order[i] = k;
  }
  auto killed = [&](std::int64_t e) {
    return static_cast<std::int64_t>(std::count_if(order.begin(), order.end(), [&](std::int64_t o) { return e % o == 0; }));
  };
  return invariant_factors_from_torsion_counts(static_cast<std::int64_t>(units.size()), killed);
}

// Additive structure of R / (g) for an element g, with (g) = g*R found by enumeration.
inline std::vector<std::int64_t> brute_quotient_by_principal_ideal(const mtk::Ring& ring, const mtk::RingElement& g) {
  std::vector<char> in_ideal(ring.size(), 0);
  std::size_t gi = ring.index_of(g);
  for (std::size_t x = 0; x < ring.size(); ++x) in_ideal[ring.mul_index(gi, x)] = 1;
  std::int64_t ideal_size = std::count(in_ideal.begin(), in_ideal.end(), 1);
  std::int64_t order = static_cast<std::int64_t>(ring.size()) / ideal_size;
  // #{cosets x + I : e*x in I} = #{x : e*x in I} / |I|
  auto killed = [&](std::int64_t e) {
    std::int64_t c = 0;
    for (std::size_t x = 0; x < ring.size(); ++x)
      if (in_ideal[ring.index_of(ring.scale(e, ring.element(x)))]) ++c;
    return c / ideal_size;
  };
  return invariant_factors_from_torsion_counts(order, killed);
}

// Residue field sizes of a semi-local test ring. Z/m splits by CRT; any other ring must be
// local (non-units closed under addition), with residue field of size |R| / |non-units|.
inline std::vector<std::int64_t> residue_field_sizes(const mtk::Ring& ring) {
  if (ring.spec().kind() == mtk::RingSpec::Kind::ZMod) return prime_factors(ring.spec().modulus());
  auto units = brute_units(ring);
  std::vector<char> unit(ring.size(), 0);
  for (auto u : units) unit[u] = 1;
  std::vector<std::size_t> non_units;
  for (std::size_t x = 0; x < ring.size(); ++x)
    if (!unit[x]) non_units.push_back(x);
  for (auto a : non_units)
    for (auto b : non_units)
      if (unit[ring.add_index(a, b)]) return {};  // not local; caller treats as unsupported
  return {static_cast<std::int64_t>(ring.size() / non_units.size())};
}

// Determinant by exact rational elimination.
inline mpz_class determinant(const mtk::IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      mpq_class f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det.get_num();
}

inline mtk::IntMatrix multiply(const mtk::IntMatrix& a, const mtk::IntMatrix& b) {
  mtk::IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline bool diagonal_with_divisibility(const mtk::IntMatrix& s) {
  const std::size_t d = std::min(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (i != j && s(i, j) != 0) return false;
  for (std::size_t i = 0; i < d; ++i) {
    if (s(i, i) < 0) return false;
    if (i + 1 < d) {
      if (s(i, i) == 0 && s(i + 1, i + 1) != 0) return false;
      if (s(i, i) != 0 && s(i + 1, i + 1) % s(i, i) != 0) return false;
    }
  }
  return true;
}

inline mtk::IntMatrix random_matrix(std::mt19937_64& rng, std::size_t max_dim, long max_entry) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_int_distribution<long> entry(-max_entry, max_entry);
  mtk::IntMatrix m(dim(rng), dim(rng));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
  return m;
}

inline std::vector<std::int64_t> to_int64(const std::vector<mpz_class>& v) {
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

}  // namespace oracle
