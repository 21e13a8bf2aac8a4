#include "localrep/tate.hpp"

#include <cassert>
#include <stdexcept>

namespace localrep::tate {

namespace wst = ::localrep::weierstrass;

namespace {

using Kind = KodairaType::Kind;

Integer mod(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

Integer invmod(const Integer& x, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::logic_error("invmod: not invertible");
  return r;
}

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

struct Z5 {
  Integer a1, a2, a3, a4, a6;
};

struct BInv {
  Integer b2, b4, b6, b8, disc;
};

BInv binv(const Z5& e) {
  BInv b;
  b.b2 = e.a1 * e.a1 + 4 * e.a2;
  b.b4 = 2 * e.a4 + e.a1 * e.a3;
  b.b6 = e.a3 * e.a3 + 4 * e.a6;
  b.b8 = e.a1 * e.a1 * e.a6 + 4 * e.a2 * e.a6 - e.a1 * e.a3 * e.a4 +
         e.a2 * e.a3 * e.a3 - e.a4 * e.a4;
  b.disc = -b.b2 * b.b2 * b.b8 - 8 * b.b4 * b.b4 * b.b4 - 27 * b.b6 * b.b6 +
           9 * b.b2 * b.b4 * b.b6;
  return b;
}

// x -> x + r, y -> y + s x + t  (u = 1)
Z5 shift(const Z5& e, const Integer& r, const Integer& s, const Integer& t) {
  Z5 o;
  o.a1 = e.a1 + 2 * s;
  o.a2 = e.a2 - s * e.a1 + 3 * r - s * s;
  o.a3 = e.a3 + r * e.a1 + 2 * t;
  o.a4 = e.a4 - s * e.a3 + 2 * r * e.a2 - (t + r * s) * e.a1 + 3 * r * r -
         2 * s * t;
  o.a6 = e.a6 + r * e.a4 + r * r * e.a2 + r * r * r - t * e.a3 - t * t -
         r * t * e.a1;
  return o;
}

Z5 scale_down(const Z5& e, const Integer& p) {
  Z5 o;
  Integer p2 = p * p, p3 = p2 * p, p4 = p2 * p2, p6 = p3 * p3;
  assert(e.a1 % p == 0 && e.a2 % p2 == 0 && e.a3 % p3 == 0 && e.a4 % p4 == 0 &&
         e.a6 % p6 == 0);
  o.a1 = e.a1 / p;
  o.a2 = e.a2 / p2;
  o.a3 = e.a3 / p3;
  o.a4 = e.a4 / p4;
  o.a6 = e.a6 / p6;
  return o;
}

unsigned long vp_or_large(const Integer& x, const Integer& p) {
  if (x == 0) return 1'000'000;  // larger than any valuation we compare against
  return nt::vp(x, p);
}

// Does A t^2 + B t + C (A a unit mod p) have a root in F_p?
bool quadratic_has_root(const Integer& A, const Integer& B, const Integer& C,
                        const Integer& p) {
  if (p <= 3) {
    for (Integer t = 0; t < p; ++t)
      if (mod(A * t * t + B * t + C, p) == 0) return true;
    return false;
  }
  return nt::legendre(B * B - 4 * A * C, p) >= 0;
}

// Double root of A t^2 + B t + C mod p, assuming the discriminant vanishes
// mod p and A is a unit.
Integer quadratic_double_root(const Integer& A, const Integer& B,
                              const Integer& C, const Integer& p) {
  if (p == 2) {
    // B must be even; A x^2 + C == A (x + AC)^2 mod 2
    assert(mod(B, p) == 0);
    return mod(C * A, p);
  }
  Integer half = invmod(2 * A, p);
  return mod(-B * half, p);
}

enum class CubicRoots { Distinct, Double, Triple };

// Multiplicity structure of T^3 + b T^2 + c T + d over F_p; on a multiple
// root, x0 receives it.
CubicRoots cubic_analyze(const Integer& b, const Integer& c, const Integer& d,
                         const Integer& p, Integer& x0) {
  if (p <= 3) {
    for (Integer x = 0; x < p; ++x) {
      Integer fx = mod(((x + b) * x + c) * x + d, p);
      if (fx != 0) continue;
      Integer dfx = mod((3 * x + 2 * b) * x + c, p);
      if (dfx != 0) continue;
      x0 = x;
      // triple root iff the cubic is (T - x)^3 coefficient by coefficient
      bool triple = mod(b + 3 * x, p) == 0 && mod(c - 3 * x * x, p) == 0 &&
                    mod(d + x * x * x, p) == 0;
      return triple ? CubicRoots::Triple : CubicRoots::Double;
    }
    return CubicRoots::Distinct;
  }
  Integer disc = mod(18 * b * c * d - 4 * b * b * b * d + b * b * c * c -
                         4 * c * c * c - 27 * d * d,
                     p);
  if (disc != 0) return CubicRoots::Distinct;
  Integer w = mod(b * b - 3 * c, p);
  if (w == 0) {
    // (T - x0)^3 with 3 x0 = -b
    x0 = mod(-b * invmod(Integer(3), p), p);
    return CubicRoots::Triple;
  }
  // double root of (T-x0)^2 (T-x1):  bc - 9d = -2 x0 (x0 - x1)^2
  x0 = mod(-(b * c - 9 * d) * invmod(2 * w, p), p);
  return CubicRoots::Double;
}

// Translation (r, t) moving the singular point of the reduction to the
// origin.  Assumes p | disc.
void singular_point(const Z5& e, const BInv& b, const Integer& p, Integer& r,
                    Integer& t) {
  if (p <= 3) {
    for (Integer x = 0; x < p; ++x) {
      for (Integer y = 0; y < p; ++y) {
        Integer F = y * y + e.a1 * x * y + e.a3 * y - x * x * x - e.a2 * x * x -
                    e.a4 * x - e.a6;
        Integer Fx = e.a1 * y - 3 * x * x - 2 * e.a2 * x - e.a4;
        Integer Fy = 2 * y + e.a1 * x + e.a3;
        if (mod(F, p) == 0 && mod(Fx, p) == 0 && mod(Fy, p) == 0) {
          r = x;
          t = y;
          return;
        }
      }
    }
    throw std::logic_error("tate: no singular point found mod p");
  }
  // x0 is a multiple root of 4x^3 + b2 x^2 + 2 b4 x + b6
  Integer c4 = b.b2 * b.b2 - 24 * b.b4;
  Integer x0;
  if (mod(c4, p) == 0) {
    x0 = mod(-b.b2 * invmod(Integer(12), p), p);
  } else {
    x0 = mod((18 * b.b6 - b.b2 * b.b4) * invmod(c4, p), p);
  }
  r = x0;
  t = mod(-(e.a1 * x0 + e.a3) * invmod(Integer(2), p), p);
}

struct RunResult {
  KodairaType type;
  unsigned long f = 0;
  std::optional<bool> split;
  Z5 minimal;
  wst::Transform change;
};

RunResult run(Z5 e, const Integer& p) {
  wst::Transform total = wst::Transform::identity();
  auto apply_shift = [&](const Integer& r, const Integer& s, const Integer& t) {
    e = shift(e, r, s, t);
    total = wst::compose(total, wst::Transform{1, Rational(r), Rational(s), Rational(t)});
  };

  for (;;) {
    BInv b = binv(e);
    if (b.disc == 0) throw std::invalid_argument("tate: singular model");
    unsigned long vD = vp_or_large(b.disc, p);
    if (vD == 0)
      return {KodairaType{Kind::I0, 0}, 0, std::nullopt, e, total};

    // Move the singular point of the reduction to the origin.
    {
      Integer r, t;
      singular_point(e, b, p, r, t);
      apply_shift(r, 0, t);
      b = binv(e);
    }
    assert(mod(e.a3, p) == 0 && mod(e.a4, p) == 0 && mod(e.a6, p) == 0);

    if (mod(b.b2, p) != 0) {
      // Node: multiplicative reduction, type I_n.
      bool split = quadratic_has_root(1, e.a1, -e.a2, p);
      return {KodairaType{Kind::In, vD}, 1, split, e, total};
    }

    // Cusp from here on: additive reduction.
    if (vp_or_large(e.a6, p) < 2)
      return {KodairaType{Kind::II, 0}, vD, std::nullopt, e, total};
    if (vp_or_large(b.b8, p) < 3)
      return {KodairaType{Kind::III, 0}, vD - 1, std::nullopt, e, total};
    if (vp_or_large(b.b6, p) < 3)
      return {KodairaType{Kind::IV, 0}, vD - 2, std::nullopt, e, total};

    // Normalize to p | a1, a2;  p^2 | a3, a4;  p^3 | a6.
    if (p <= 3) {
      bool done = false;
      Integer p3 = p * p * p;
      for (Integer s = 0; s < p && !done; ++s) {
        for (Integer t = 0; t < p3 && !done; ++t) {
          Z5 cand = shift(e, 0, s, t);
          if (mod(cand.a1, p) == 0 && mod(cand.a2, p) == 0 &&
              mod(cand.a3, p * p) == 0 && mod(cand.a4, p * p) == 0 &&
              mod(cand.a6, p3) == 0) {
            apply_shift(0, s, t);
            done = true;
          }
        }
      }
      if (!done) throw std::logic_error("tate: normalization failed at small p");
    } else {
      Integer half = invmod(Integer(2), p);
      Integer s = mod(-e.a1 * half, p);
      apply_shift(0, s, 0);
      Integer half2 = invmod(Integer(2), p * p);
      Integer t = mod(-e.a3 * half2, p * p);
      apply_shift(0, 0, t);
    }
    assert(mod(e.a1, p) == 0 && mod(e.a2, p) == 0 && mod(e.a3, p * p) == 0 &&
           mod(e.a4, p * p) == 0 && mod(e.a6, p * p * p) == 0);

    // P(T) = T^3 + a2/p T^2 + a4/p^2 T + a6/p^3 over F_p.
    Integer pb = e.a2 / p, pc = e.a4 / (p * p), pd = e.a6 / (p * p * p);
    Integer x0;
    CubicRoots roots = cubic_analyze(pb, pc, pd, p, x0);

    if (roots == CubicRoots::Distinct)
      return {KodairaType{Kind::I0star, 0}, vD - 4, std::nullopt, e, total};

    if (roots == CubicRoots::Double) {
      // Type I_n* for some n >= 1.
      apply_shift(p * x0, 0, 0);
      assert(nt::vp(e.a2, p) == 1 && vp_or_large(e.a4, p) >= 3 &&
             vp_or_large(e.a6, p) >= 4);
      Integer a2t = e.a2 / p;
      for (unsigned long k = 1;; ++k) {
        Integer my = ipow(p, k + 1);      // current y scale
        Integer mx2 = ipow(p, 2 * k + 2);
        // Y^2 + (a3/p^{k+1}) Y - a6/p^{2k+2}
        Integer B = e.a3 / my, C = -(e.a6 / mx2);
        if (mod(B * B + 4 * (e.a6 / mx2), p) != 0) {
          unsigned long n = 2 * k - 1;
          return {KodairaType{Kind::Instar, n}, vD - 4 - n, std::nullopt, e,
                  total};
        }
        Integer y0 = quadratic_double_root(1, B, C, p);
        apply_shift(0, 0, my * y0);
        assert(vp_or_large(e.a3, p) >= k + 2 && vp_or_large(e.a6, p) >= 2 * k + 3);
        // (a2/p) X^2 + (a4/p^{k+2}) X + a6/p^{2k+3}
        Integer B2 = e.a4 / (p * my), C2 = e.a6 / (p * mx2);
        if (mod(B2 * B2 - 4 * a2t * C2, p) != 0) {
          unsigned long n = 2 * k;
          return {KodairaType{Kind::Instar, n}, vD - 4 - n, std::nullopt, e,
                  total};
        }
        Integer z0 = quadratic_double_root(a2t, B2, C2, p);
        apply_shift(my * z0, 0, 0);
        assert(vp_or_large(e.a4, p) >= k + 3 && vp_or_large(e.a6, p) >= 2 * k + 4);
      }
    }

    // Triple root.
    apply_shift(p * x0, 0, 0);
    assert(vp_or_large(e.a2, p) >= 2 && vp_or_large(e.a4, p) >= 3 &&
           vp_or_large(e.a6, p) >= 4);
    {
      // Y^2 + (a3/p^2) Y - a6/p^4
      Integer p2 = p * p, p4 = p2 * p2;
      Integer B = e.a3 / p2, C6 = e.a6 / p4;
      if (mod(B * B + 4 * C6, p) != 0)
        return {KodairaType{Kind::IVstar, 0}, vD - 6, std::nullopt, e, total};
      Integer y0 = quadratic_double_root(1, B, -C6, p);
      apply_shift(0, 0, p2 * y0);
      assert(vp_or_large(e.a3, p) >= 3 && vp_or_large(e.a6, p) >= 5);
    }
    if (vp_or_large(e.a4, p) < 4)
      return {KodairaType{Kind::IIIstar, 0}, vD - 7, std::nullopt, e, total};
    if (vp_or_large(e.a6, p) < 6)
      return {KodairaType{Kind::IIstar, 0}, vD - 8, std::nullopt, e, total};

    // Everything divisible: the model was not minimal at p.  Rescale and rerun.
    e = scale_down(e, p);
    total = wst::compose(total, wst::Transform{Rational(p), 0, 0, 0});
  }
}

Z5 to_z5(const wst::Model& m) {
  if (!wst::is_integral(m))
    throw std::invalid_argument("tate: model must be integral");
  auto num = [](const Rational& q) { return Integer(mpq_numref(q.get_mpq_t())); };
  return Z5{num(m.a1), num(m.a2), num(m.a3), num(m.a4), num(m.a6)};
}

wst::Model to_model(const Z5& e) {
  return wst::Model{Rational(e.a1), Rational(e.a2), Rational(e.a3),
                    Rational(e.a4), Rational(e.a6)};
}

}  // namespace

std::string KodairaType::str() const {
  switch (kind) {
    case Kind::I0: return "I0";
    case Kind::In: return "I" + std::to_string(n);
    case Kind::II: return "II";
    case Kind::III: return "III";
    case Kind::IV: return "IV";
    case Kind::I0star: return "I0*";
    case Kind::Instar: return "I" + std::to_string(n) + "*";
    case Kind::IVstar: return "IV*";
    case Kind::IIIstar: return "III*";
    case Kind::IIstar: return "II*";
  }
  return "?";
}

LocalReductionData tate(const wst::Model& m, const Integer& p) {
  if (!nt::is_prime(p)) throw std::invalid_argument("tate: p must be prime");
  RunResult r = run(to_z5(m), p);
  LocalReductionData out;
  out.p = p;
  out.kodaira = r.type;
  out.f = r.f;
  out.n = r.type.n;
  out.split = r.split;
  return out;
}

MinimalModelResult minimal_model_at(const wst::Model& m, const Integer& p) {
  if (!nt::is_prime(p)) throw std::invalid_argument("tate: p must be prime");
  Z5 e = to_z5(m);
  RunResult r = run(e, p);
  // Translations never change the discriminant, so an input that already
  // attains the minimal valuation is returned untouched.
  unsigned long v_in = vp_or_large(binv(e).disc, p);
  unsigned long v_min = vp_or_large(binv(r.minimal).disc, p);
  if (v_in == v_min) return MinimalModelResult{m, wst::Transform::identity()};
  return MinimalModelResult{to_model(r.minimal), r.change};
}

Integer global_conductor(const wst::Model& m) {
  Z5 e = to_z5(m);
  BInv b = binv(e);
  if (b.disc == 0) throw std::invalid_argument("global_conductor: singular model");
  nt::PrimeFactorization pf = nt::factor(b.disc);
  Integer N = 1;
  for (const auto& [p, ignored] : pf.factors) {
    LocalReductionData d = tate(m, p);
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), d.f);
    N *= pe;
  }
  return N;
}

}  // namespace localrep::tate
