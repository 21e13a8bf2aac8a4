#pragma once

#include <gmpxx.h>

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace localrep {

using Integer = mpz_class;
using Rational = mpq_class;

namespace nt {

// v_p(0) is +infinity; callers must branch on zero before asking.
class InfiniteValuationError : public std::domain_error {
 public:
  InfiniteValuationError() : std::domain_error("valuation of 0 is infinite") {}
};

// Factorization ran out of budget. The remaining composite cofactor is kept
// so callers can report exactly what was left unfactored.
class IncompleteFactorizationError : public std::runtime_error {
 public:
  explicit IncompleteFactorizationError(Integer cofactor)
      : std::runtime_error("incomplete factorization, unfactored cofactor " +
                           cofactor.get_str()),
        cofactor_(std::move(cofactor)) {}
  const Integer& cofactor() const { return cofactor_; }

 private:
  Integer cofactor_;
};

struct PrimeFactorization {
  int sign = 1;  // +1 or -1
  std::vector<std::pair<Integer, unsigned long>> factors;  // strictly increasing primes

  // sign * prod p^e
  Integer value() const;
};

struct FactorOptions {
  unsigned long trial_limit = 1'000'000;
  // Budget for the Pollard rho stage. Default comes from the environment
  // variable LOCALREP_FACTOR_TIMEOUT_MS (milliseconds), else 30s.
  std::chrono::milliseconds rho_budget;

  FactorOptions();
};

// Deterministic for n < 3.317e24 (Miller-Rabin with the first 13 prime
// witnesses); probabilistic beyond that.
bool is_prime(const Integer& n);

// Largest k with p^k | n.  Requires n != 0 and p prime.
unsigned long vp(const Integer& n, const Integer& p);

// v_p(num) - v_p(den) on the reduced fraction.  Requires q != 0.
long vp_rational(const Rational& q, const Integer& p);

// Complete factorization of n != 0 with deterministic ordering.
PrimeFactorization factor(const Integer& n, const FactorOptions& opts = {});

// Legendre symbol (a/p) for odd prime p; 0 when p | a.  p = 2 is rejected,
// use square classes there instead.
int legendre(const Integer& a, const Integer& p);

// Canonical representative of x in Q_p^x / (Q_p^x)^2.
//
// For odd p the unit part is classified by its Legendre symbol; for p = 2 by
// its residue mod 8 (the standard structure of Z_2^x / squares).
struct SquareClass {
  Integer p;
  int val_parity = 0;  // v_p(x) mod 2
  int unit_tag = 1;    // odd p: +1 square / -1 nonsquare; p = 2: 1, 3, 5 or 7

  bool operator==(const SquareClass& o) const {
    return p == o.p && val_parity == o.val_parity && unit_tag == o.unit_tag;
  }
  bool is_trivial() const {
    return val_parity == 0 && unit_tag == (p == 2 ? 1 : +1);
  }
  // Group law of Q_p^x / squares.
  SquareClass operator*(const SquareClass& o) const;
};

SquareClass square_class(const Rational& x, const Integer& p);
SquareClass square_class(const Integer& x, const Integer& p);

// True iff the quadratic character (x, .) attached to the class has
// conductor 0: odd p needs even valuation; p = 2 additionally needs the
// unit to be 1 or 5 mod 8.
bool is_unramified_quadratic(const SquareClass& cls);

}  // namespace nt
}  // namespace localrep
