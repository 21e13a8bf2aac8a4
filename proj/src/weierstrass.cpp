#include "localrep/weierstrass.hpp"

#include <stdexcept>

namespace localrep::weierstrass {

namespace {

bool rational_is_integer(const Rational& q) {
  return mpz_cmp_ui(mpq_denref(q.get_mpq_t()), 1) == 0;
}

}  // namespace

bool is_integral(const Model& m) {
  return rational_is_integer(m.a1) && rational_is_integer(m.a2) &&
         rational_is_integer(m.a3) && rational_is_integer(m.a4) &&
         rational_is_integer(m.a6);
}

Invariants invariants(const Model& m) {
  Invariants inv;
  inv.b2 = m.a1 * m.a1 + 4 * m.a2;
  inv.b4 = 2 * m.a4 + m.a1 * m.a3;
  inv.b6 = m.a3 * m.a3 + 4 * m.a6;
  inv.b8 = m.a1 * m.a1 * m.a6 + 4 * m.a2 * m.a6 - m.a1 * m.a3 * m.a4 +
           m.a2 * m.a3 * m.a3 - m.a4 * m.a4;
  inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
  inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
  inv.disc = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4 -
             27 * inv.b6 * inv.b6 + 9 * inv.b2 * inv.b4 * inv.b6;
  if (inv.disc != 0) inv.j = inv.c4 * inv.c4 * inv.c4 / inv.disc;
  return inv;
}

Transform compose(const Transform& a, const Transform& b) {
  Transform c;
  c.u = a.u * b.u;
  c.r = a.u * a.u * b.r + a.r;
  c.s = a.u * b.s + a.s;
  c.t = a.u * a.u * a.u * b.t + a.u * a.u * a.s * b.r + a.t;
  return c;
}

Model transform(const Model& m, const Transform& t) {
  if (t.u == 0) throw std::invalid_argument("transform: u must be nonzero");
  const Rational &u = t.u, &r = t.r, &s = t.s, &w = t.t;
  Rational u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  Model out;
  out.a1 = (m.a1 + 2 * s) / u;
  out.a2 = (m.a2 - s * m.a1 + 3 * r - s * s) / u2;
  out.a3 = (m.a3 + r * m.a1 + 2 * w) / u3;
  out.a4 = (m.a4 - s * m.a3 + 2 * r * m.a2 - (w + r * s) * m.a1 + 3 * r * r -
            2 * s * w) /
           u4;
  out.a6 = (m.a6 + r * m.a4 + r * r * m.a2 + r * r * r - w * m.a3 - w * w -
            r * w * m.a1) /
           u6;
  return out;
}

ReductionKind naive_reduction(const Model& m, const Integer& p) {
  Invariants inv = invariants(m);
  if (inv.disc == 0)
    throw std::invalid_argument("naive_reduction: singular model");
  if (nt::vp_rational(inv.disc, p) == 0) return ReductionKind::Good;
  if (inv.c4 != 0 && nt::vp_rational(inv.c4, p) == 0)
    return ReductionKind::Multiplicative;
  return ReductionKind::Additive;
}

nt::SquareClass gamma_invariant(const Model& m, const Integer& p) {
  Invariants inv = invariants(m);
  if (inv.disc == 0)
    throw std::invalid_argument("gamma_invariant: singular model");
  // v_p(j) < 0 guarantees c6 != 0: j = 0 would need c4 = 0, and then
  // v_p(j) >= 0 vacuously.
  if (inv.c4 == 0 ||
      3 * nt::vp_rational(inv.c4, p) - nt::vp_rational(inv.disc, p) >= 0)
    throw std::invalid_argument(
        "gamma_invariant: requires potentially multiplicative reduction "
        "(v_p(j) < 0)");
  return nt::square_class(-inv.c4 / inv.c6, p);
}

}  // namespace localrep::weierstrass
