#include "localrep/numtheory.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace localrep::nt {

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    const unsigned long limit = 1'000'000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// Witness set valid below 3,317,044,064,679,887,385,961,981.
bool miller_rabin_deterministic(const Integer& n) {
  static const int witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  Integer d = n - 1;
  unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
  for (int w : witnesses) {
    if (n == w) return true;
    Integer x;
    Integer base = w;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) continue;
    bool found = false;
    for (unsigned long i = 0; i + 1 < r; ++i) {
      mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
      if (x == n - 1) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Brent's cycle variant of Pollard rho.  Returns a nontrivial factor of odd
// composite n, or 0 when the budget expires.
Integer brent_rho(const Integer& n, Clock::time_point deadline) {
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(2718281828ul);
  for (unsigned long attempt = 0;; ++attempt) {
    if (Clock::now() > deadline) return 0;
    Integer y = rng.get_z_range(n - 3) + 2;
    Integer c = rng.get_z_range(n - 2) + 1;
    Integer m = 128, g = 1, q = 1, x, ys;
    unsigned long r = 1;
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
      Integer k = 0;
      while (k < r && g == 1) {
        if (Clock::now() > deadline) return 0;
        ys = y;
        Integer steps = std::min(Integer(m), Integer(r - k));
        for (Integer i = 0; i < steps; ++i) {
          y = (y * y + c) % n;
          q = q * (x - y) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      // backtrack one step at a time
      do {
        ys = (ys * ys + c) % n;
        Integer diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
    // cycle degenerated, retry with fresh parameters
  }
}

void factor_recurse(const Integer& n, std::map<Integer, unsigned long>& out,
                    Clock::time_point deadline) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  Integer d = brent_rho(n, deadline);
  if (d == 0) throw IncompleteFactorizationError(n);
  factor_recurse(d, out, deadline);
  factor_recurse(n / d, out, deadline);
}

}  // namespace

FactorOptions::FactorOptions() : rho_budget(30'000) {
  if (const char* env = std::getenv("LOCALREP_FACTOR_TIMEOUT_MS")) {
    char* end = nullptr;
    long ms = std::strtol(env, &end, 10);
    if (end != env && ms > 0) rho_budget = std::chrono::milliseconds(ms);
  }
}

Integer PrimeFactorization::value() const {
  Integer v = sign;
  for (const auto& [p, e] : factors) {
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    v *= pe;
  }
  return v;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (mpz_even_p(n.get_mpz_t())) return false;
  static const Integer deterministic_bound("3317044064679887385961981");
  if (n < deterministic_bound) return miller_rabin_deterministic(n);
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

unsigned long vp(const Integer& n, const Integer& p) {
  if (n == 0) throw InfiniteValuationError();
  Integer stripped;
  return mpz_remove(stripped.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

long vp_rational(const Rational& q, const Integer& p) {
  if (q == 0) throw InfiniteValuationError();
  const Integer num(mpq_numref(q.get_mpq_t()));
  const Integer den(mpq_denref(q.get_mpq_t()));
  return static_cast<long>(vp(num, p)) - static_cast<long>(vp(den, p));
}

PrimeFactorization factor(const Integer& n, const FactorOptions& opts) {
  if (n == 0) throw std::invalid_argument("factor: n must be nonzero");
  PrimeFactorization pf;
  pf.sign = (n < 0) ? -1 : 1;
  Integer m = abs(n);
  std::map<Integer, unsigned long> found;
  for (unsigned long q : small_primes()) {
    if (q > opts.trial_limit) break;
    Integer qq(q);
    if (qq * qq > m) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
      Integer rest;
      unsigned long e = mpz_remove(rest.get_mpz_t(), m.get_mpz_t(), qq.get_mpz_t());
      found[qq] = e;
      m = rest;
    }
  }
  if (m > 1) {
    if (is_prime(m)) {
      found[m] += 1;
    } else {
      auto deadline = Clock::now() + opts.rho_budget;
      factor_recurse(m, found, deadline);
    }
  }
  pf.factors.assign(found.begin(), found.end());
  return pf;
}

int legendre(const Integer& a, const Integer& p) {
  if (p == 2) throw std::invalid_argument("legendre: p = 2 not allowed");
  return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

SquareClass SquareClass::operator*(const SquareClass& o) const {
  if (p != o.p) throw std::invalid_argument("square class product: mixed primes");
  SquareClass r;
  r.p = p;
  r.val_parity = (val_parity + o.val_parity) % 2;
  if (p == 2) {
    r.unit_tag = static_cast<int>((static_cast<long>(unit_tag) * o.unit_tag) % 8);
  } else {
    r.unit_tag = unit_tag * o.unit_tag;
  }
  return r;
}

SquareClass square_class(const Rational& x, const Integer& p) {
  if (x == 0) throw std::invalid_argument("square_class: x must be nonzero");
  const Integer num(mpq_numref(x.get_mpq_t()));
  const Integer den(mpq_denref(x.get_mpq_t()));
  long v = vp_rational(x, p);
  // unit part of num*den equals the unit part of x up to a square (den^2)
  Integer nd = num * den;
  Integer unit;
  mpz_remove(unit.get_mpz_t(), nd.get_mpz_t(), p.get_mpz_t());

  SquareClass cls;
  cls.p = p;
  cls.val_parity = static_cast<int>(((v % 2) + 2) % 2);
  if (p == 2) {
    Integer r = unit % 8;
    if (r < 0) r += 8;
    cls.unit_tag = static_cast<int>(r.get_si());
  } else {
    cls.unit_tag = legendre(unit, p);
  }
  return cls;
}

SquareClass square_class(const Integer& x, const Integer& p) {
  return square_class(Rational(x), p);
}

bool is_unramified_quadratic(const SquareClass& cls) {
  if (cls.val_parity != 0) return false;
  if (cls.p == 2) return cls.unit_tag == 1 || cls.unit_tag == 5;
  return true;
}

}  // namespace localrep::nt
