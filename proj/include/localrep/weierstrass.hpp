#pragma once

#include <optional>

#include "localrep/numtheory.hpp"

namespace localrep::weierstrass {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q.
//
// Coefficients are rationals on purpose: several of the auxiliary models are
// reached through changes of variables with u = 1/3 or w with denominator 27,
// and integrality is a checked property, not a type constraint.
struct Model {
  Rational a1, a2, a3, a4, a6;

  bool operator==(const Model& o) const {
    return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
  }
};

bool is_integral(const Model& m);

struct Invariants {
  Rational b2, b4, b6, b8;
  Rational c4, c6;
  Rational disc;
  std::optional<Rational> j;  // absent when disc = 0
};

Invariants invariants(const Model& m);

// x = u^2 x' + r,  y = u^3 y' + u^2 s x' + t.
struct Transform {
  Rational u = 1, r = 0, s = 0, t = 0;

  static Transform identity() { return {}; }
};

// Apply first `a`, then `b` (in the coordinates produced by `a`).
Transform compose(const Transform& a, const Transform& b);

Model transform(const Model& m, const Transform& t);

enum class ReductionKind { Good, Multiplicative, Additive };

// Naive taxonomy from a model assumed integral and minimal at p.  The
// authoritative classification, including minimalization, is tate::tate().
ReductionKind naive_reduction(const Model& m, const Integer& p);

// Class of -c4/c6 in Q_p^x / squares.  Defined only under potentially
// multiplicative reduction, i.e. v_p(j) < 0; model-independent there.
nt::SquareClass gamma_invariant(const Model& m, const Integer& p);

}  // namespace localrep::weierstrass
