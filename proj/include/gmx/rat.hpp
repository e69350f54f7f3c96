#ifndef GMX_RAT_HPP_
#define GMX_RAT_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gmx {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "num", "num/den" or a decimal literal like "-1.25".
Rat parse_rat(const std::string& text);

/// Renders in lowest terms, "num/den" or plain integer.
std::string rat_to_string(const Rat& q);

inline int sign(const Rat& q) { return sgn(q); }
inline int sign(const Int& n) { return sgn(n); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

/// Number of bits of |n|, with bits(0) = 1.
inline std::uint64_t bit_length(const Int& n) {
  if (n == 0) return 1;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

/// max(bits(|num|), bits(den)) of the canonical form.
inline std::uint64_t bitsize(const Rat& q) {
  return std::max(bit_length(Int(q.get_num())), bit_length(Int(q.get_den())));
}

inline Int pow_int(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline Int pow2(unsigned long exp) { return pow_int(Int(2), exp); }

/// Euclidean quotient, total: a = q*b + r with 0 <= r < |b|; returns 0 when
/// the divisor is 0.
inline Int euclidean_div(const Int& a, const Int& b) {
  if (b == 0) return 0;
  Int q;
  if (b > 0)
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  else
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }

}  // namespace gmx

#endif  // GMX_RAT_HPP_
