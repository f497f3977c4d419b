#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "mtk/errors.hpp"

namespace mtk {

using Integer = mpz_class;

// Overflow-checked 64-bit arithmetic. Every path that stores coefficients
// in machine words goes through these; an overflow is an error, never a wrap.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "int64 addition overflow");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "int64 subtraction overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "int64 multiplication overflow");
  return r;
}

/// Least nonnegative residue; m > 0.
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline bool fits_int64(const Integer& x) { return x.fits_slong_p(); }

inline std::int64_t to_int64(const Integer& x) {
  if (!x.fits_slong_p()) throw Error(ErrorCode::Overflow, "integer does not fit in int64");
  return x.get_si();
}

inline Integer to_integer(std::int64_t x) { return Integer(static_cast<long>(x)); }

/// Nonnegative residue of x modulo m (m > 0).
inline Integer mod_floor(const Integer& x, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace mtk
