#include "localrep/families.hpp"

#include <stdexcept>

namespace localrep::families {

namespace wst = ::localrep::weierstrass;

namespace {

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// v_2 with v(0) treated as +infinity; a + b = 0 is a legitimate member for
// C2xC6 and lands in the high-valuation branch.
unsigned long v2(const Integer& n) {
  return n == 0 ? 1'000'000UL : nt::vp(n, 2);
}

struct Coeffs {
  Integer a1, a2, a3;
};

// The defining coefficient polynomials of E_T.
Coeffs table1(Torsion T, const Integer& a, const Integer& b) {
  switch (T) {
    case Torsion::C3_0:
      return {0, 0, a};
    case Torsion::C3:
      return {a, 0, a * a * b};
    case Torsion::C5:
      return {a - b, -a * b, -a * a * b};
    case Torsion::C6:
      return {a - b, -a * b - b * b, -a * a * b - a * b * b};
    case Torsion::C7:
      return {a * a + a * b - b * b, a * a * b * b - a * b * b * b,
              ipow(a, 4) * b * b - ipow(a, 3) * ipow(b, 3)};
    case Torsion::C9: {
      Integer a2 = ipow(a, 4) * b * b - 2 * ipow(a, 3) * ipow(b, 3) +
                   2 * a * a * ipow(b, 4) - a * ipow(b, 5);
      return {ipow(a, 3) + a * b * b - ipow(b, 3), a2, ipow(a, 3) * a2};
    }
    case Torsion::C10: {
      Integer a2 = -ipow(a, 3) * ipow(b, 3) + 3 * a * a * ipow(b, 4) -
                   2 * a * ipow(b, 5);
      return {ipow(a, 3) - 2 * a * a * b - 2 * a * b * b + 2 * ipow(b, 3), a2,
              (ipow(a, 3) - 3 * a * a * b + a * b * b) * a2};
    }
    case Torsion::C12: {
      Integer a2 = b * (a - 2 * b) * (a - b) * (a - b) *
                   (a * a - 3 * a * b + 3 * b * b) *
                   (a * a - 2 * a * b + 2 * b * b);
      return {-ipow(a, 4) + 2 * ipow(a, 3) * b + 2 * a * a * b * b -
                  8 * a * ipow(b, 3) + 6 * ipow(b, 4),
              a2, a * ipow(b - a, 3) * a2};
    }
    case Torsion::C2xC6:
      return {-19 * a * a + 2 * a * b + b * b,
              -10 * ipow(a, 4) + 22 * ipow(a, 3) * b - 14 * a * a * b * b +
                  2 * a * ipow(b, 3),
              90 * ipow(a, 6) - 198 * ipow(a, 5) * b + 116 * ipow(a, 4) * b * b +
                  4 * ipow(a, 3) * ipow(b, 3) - 14 * a * a * ipow(b, 4) +
                  2 * a * ipow(b, 5)};
  }
  throw std::logic_error("table1: unknown torsion");
}

// gamma_T = disc(E_T) as a product of the factors of the minimal-discriminant
// table.  For C12 the middle quadratic is (a^2-6ab+6b^2); any other reading
// fails the gamma = disc identity.
Integer gamma_poly(Torsion T, const Integer& a, const Integer& b) {
  switch (T) {
    case Torsion::C3_0:
      return -27 * ipow(a, 4);
    case Torsion::C3:
      return ipow(a, 8) * ipow(b, 3) * (a - 27 * b);
    case Torsion::C5:
      return -ipow(a, 5) * ipow(b, 5) * (a * a + 11 * a * b - b * b);
    case Torsion::C6:
      return a * a * ipow(b, 6) * (a + 9 * b) * ipow(a + b, 3);
    case Torsion::C7:
      return -ipow(a, 7) * ipow(b, 7) * ipow(a - b, 7) *
             (ipow(a, 3) + 5 * a * a * b - 8 * a * b * b + ipow(b, 3));
    case Torsion::C9:
      return -ipow(a * a * b - a * b * b, 9) *
             ipow(a * a - a * b + b * b, 3) *
             (ipow(a, 3) + 3 * a * a * b - 6 * a * b * b + ipow(b, 3));
    case Torsion::C10:
      return ipow(a, 5) * ipow(b, 10) * ipow(a - b, 10) * ipow(a - 2 * b, 5) *
             (a * a + 2 * a * b - 4 * b * b) * ipow(a * a - 3 * a * b + b * b, 2);
    case Torsion::C12:
      return a * a * ipow(a * b - b * b, 12) * ipow(a - 2 * b, 6) *
             (a * a - 6 * a * b + 6 * b * b) *
             ipow(a * a - 2 * a * b + 2 * b * b, 3) *
             ipow(a * a - 3 * a * b + 3 * b * b, 4);
    case Torsion::C2xC6:
      return ipow(2 * a, 6) * ipow(b - a, 6) * ipow(b - 9 * a, 2) *
             ipow(b * b - 9 * a * a, 2) * ipow(b - 5 * a, 6);
  }
  throw std::logic_error("gamma_poly: unknown torsion");
}

Integer u_scale(const FamilyParams& p) {
  switch (p.T) {
    case Torsion::C3:
      return p.cde->c * p.cde->c * p.cde->d;
    case Torsion::C3_0:
    case Torsion::C5:
    case Torsion::C7:
    case Torsion::C9:
      return 1;
    case Torsion::C6:
      return v2(p.a + p.b) <= 2 ? 1 : 2;
    case Torsion::C10:
    case Torsion::C12:
      return mpz_odd_p(p.a.get_mpz_t()) ? 1 : 2;
    case Torsion::C2xC6: {
      unsigned long v = v2(p.a + p.b);
      if (v == 0) return 1;
      return v == 1 ? 16 : 4;
    }
  }
  throw std::logic_error("u_scale: unknown torsion");
}

}  // namespace

const std::vector<Torsion>& all_torsions() {
  static const std::vector<Torsion> all = {
      Torsion::C3,  Torsion::C3_0, Torsion::C5,  Torsion::C6,   Torsion::C7,
      Torsion::C9,  Torsion::C10,  Torsion::C12, Torsion::C2xC6};
  return all;
}

std::string to_string(Torsion t) {
  switch (t) {
    case Torsion::C3: return "C3";
    case Torsion::C3_0: return "C3_0";
    case Torsion::C5: return "C5";
    case Torsion::C6: return "C6";
    case Torsion::C7: return "C7";
    case Torsion::C9: return "C9";
    case Torsion::C10: return "C10";
    case Torsion::C12: return "C12";
    case Torsion::C2xC6: return "C2xC6";
  }
  return "?";
}

std::optional<Torsion> torsion_from_string(const std::string& s) {
  for (Torsion t : all_torsions())
    if (to_string(t) == s) return t;
  return std::nullopt;
}

C3Decomposition c3_decompose(const Integer& a) {
  if (a == 0) throw std::invalid_argument("c3_decompose: a must be nonzero");
  nt::PrimeFactorization pf = nt::factor(a);
  C3Decomposition out{pf.sign, 1, 1};
  for (const auto& [p, e] : pf.factors) {
    out.c *= ipow(p, e / 3);
    switch (e % 3) {
      case 2: out.d *= p; break;
      case 1: out.e *= p; break;
      default: break;
    }
  }
  return out;
}

FamilyParams validate_params(Torsion T, const Integer& a, const Integer& b) {
  FamilyParams params{T, a, b, std::nullopt};
  if (T == Torsion::C3_0) {
    if (a == 0) throw std::invalid_argument("C3_0 requires a != 0");
    nt::PrimeFactorization pf = nt::factor(a);
    for (const auto& [p, e] : pf.factors)
      if (e >= 3)
        throw std::invalid_argument("C3_0 requires cubefree a (divisible by " +
                                    ipow(p, 3).get_str() + ")");
    params.b = 0;
    return params;
  }
  if (gcd(a, b) != 1) throw std::invalid_argument("gcd(a,b) must be 1");
  if (gamma_poly(T, a, b) == 0)
    throw std::invalid_argument("singular member: Delta_T = 0");
  if (T == Torsion::C3) params.cde = c3_decompose(a);
  return params;
}

wst::Model build_curve(const FamilyParams& params) {
  Coeffs c = table1(params.T, params.a, params.b);
  return wst::Model{Rational(c.a1), Rational(c.a2), Rational(c.a3), 0, 0};
}

MinimalDiscriminant minimal_discriminant(const FamilyParams& params) {
  MinimalDiscriminant md;
  md.gamma = gamma_poly(params.T, params.a, params.b);
  md.u = u_scale(params);
  Integer u12 = ipow(md.u, 12);
  Integer rem;
  mpz_tdiv_qr(md.delta.get_mpz_t(), rem.get_mpz_t(), md.gamma.get_mpz_t(),
              u12.get_mpz_t());
  if (rem != 0)
    throw std::logic_error("minimal_discriminant: u^12 does not divide gamma");
  // gamma is by construction the discriminant of the parameterized model
  wst::Invariants inv = wst::invariants(build_curve(params));
  if (inv.disc != Rational(md.gamma))
    throw std::logic_error("minimal_discriminant: gamma != disc(E_T)");
  return md;
}

FModelSpec f_model_spec(const FamilyParams& p, int j) {
  const Rational a(p.a), b(p.b);
  FModelSpec f{p.T, j, 0, 1, 0, 0, 0};
  switch (p.T) {
    case Torsion::C3: {
      const Rational c(p.cde->c), d(p.cde->d), e(p.cde->e);
      if (j == 1) {
        f.z = c * c * d;
        f.u = f.z;
        f.r = f.z * f.z * b;
        return f;
      }
      if (j == 2) {
        f.z = c * c * d / 3;
        f.u = f.z;
        f.r = -c * c * d * d * e * e * f.z * f.z;
        f.s = -c * c * c * d * d * e;
        f.t = c * c * c * d * d * d * e * e * e * f.z * f.z * f.z;
        return f;
      }
      break;
    }
    case Torsion::C5:
      if (j == 1) {
        f.z = a * b;
        f.r = f.s = f.t = f.z;
        return f;
      }
      break;
    case Torsion::C6:
      switch (j) {
        case 1:
          f.z = a * b;
          f.r = f.s = f.t = f.z;
          return f;
        case 2:
          f.z = 3 * b - a;
          f.u = Rational(1, 3);
          f.r = a * f.z / 9;
          f.s = 2 * b;
          f.t = 2 * a * (a + 3 * b) * (a + 3 * b) / 27;
          return f;
        case 3:
          f.z = a + b;
          f.r = f.z;
          return f;
        case 4:
          f.z = 1;
          f.u = 2;
          f.r = 4;
          f.t = 8;
          return f;
        case 5:
          f.z = a + b;
          f.u = 2;
          f.r = 4 * f.z;
          return f;
      }
      break;
    case Torsion::C7:
      if (j == 1) {
        f.z = a * b * (a - b);
        f.r = f.s = f.z;
        return f;
      }
      break;
    case Torsion::C9:
      if (j == 1) {
        f.z = a * b * (a - b);
        f.r = f.z;
        f.s = a * b * f.z;
        return f;
      }
      break;
    case Torsion::C10:
    case Torsion::C12:
      if (j == 1) {
        f.z = a * b * (a - b) * (a - 2 * b);
        f.r = f.s = f.z;
        return f;
      }
      if (j == 2) {
        f.z = a * b * (a - b) * (a - 2 * b);
        f.u = 2;
        f.r = 4 * f.z;
        f.s = 8 * f.z;
        return f;
      }
      break;
    case Torsion::C2xC6:
      switch (j) {
        case 1:
          f.z = (b * b - 9 * a * a) * (b - 5 * a);
          f.r = f.s = 2 * a * (b - a) * f.z;
          return f;
        case 2:
          f.z = 16;
          f.u = f.z;
          f.s = -f.z;
          f.t = 2 * f.z * f.z * f.z;
          return f;
        case 3:
          f.z = 16;
          f.u = f.z;
          f.r = -f.z * f.z;
          f.t = f.z * f.z * f.z;
          return f;
        case 4:
          f.z = 4;
          f.u = f.z;
          f.s = -f.z;
          f.t = 2 * f.z * f.z * f.z;
          return f;
      }
      break;
    default:
      break;
  }
  throw std::invalid_argument("f_model: no row (" + to_string(p.T) + ", " +
                              std::to_string(j) + ")");
}

wst::Model f_model(const FamilyParams& params, int j) {
  FModelSpec f = f_model_spec(params, j);
  return wst::transform(build_curve(params), wst::Transform{f.u, f.r, f.s, f.t});
}

bool negation_invariant(Torsion T) {
  return T == Torsion::C7 || T == Torsion::C12 || T == Torsion::C2xC6;
}

std::vector<FamilyParams> enumerate_family(Torsion T, long bound) {
  std::vector<FamilyParams> out;
  if (T == Torsion::C3_0) {
    for (long a = -bound; a <= bound; ++a) {
      if (a == 0) continue;
      try {
        out.push_back(validate_params(T, a, 0));
      } catch (const std::invalid_argument&) {
      }
    }
    return out;
  }
  long b_lo = negation_invariant(T) ? 1 : -bound;
  for (long a = -bound; a <= bound; ++a) {
    for (long b = b_lo; b <= bound; ++b) {
      try {
        out.push_back(validate_params(T, a, b));
      } catch (const std::invalid_argument&) {
      }
    }
  }
  return out;
}

}  // namespace localrep::families
