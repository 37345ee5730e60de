#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sepmix {

// Exact arithmetic used by the oracle paths. Rationals are kept
// canonicalized at all times.
using BigInt = mpz_class;
using BigRat = mpq_class;

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct size_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline BigRat make_rat(long num, long den) {
  if (den == 0) throw validation_error("rational with zero denominator");
  BigRat q(num, den);
  q.canonicalize();
  return q;
}

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw validation_error("rational with zero denominator");
  BigRat q(num, den);
  q.canonicalize();
  return q;
}

inline BigRat rat_pow(const BigRat& base, unsigned long e) {
  BigRat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;  // already canonical: gcd(num,den)=1 is preserved by powers
}

inline BigInt int_pow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  if (k > n) return BigInt(0);
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline double to_double(const BigRat& q) { return q.get_d(); }

inline std::string rat_string(const BigRat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace sepmix
