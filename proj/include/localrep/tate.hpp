#pragma once

#include <optional>
#include <string>

#include "localrep/weierstrass.hpp"

namespace localrep::tate {

struct KodairaType {
  enum class Kind { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar };
  Kind kind = Kind::I0;
  unsigned long n = 0;  // index for In / Instar, 0 otherwise

  bool operator==(const KodairaType& o) const {
    return kind == o.kind && n == o.n;
  }
  bool good() const { return kind == Kind::I0; }
  bool multiplicative() const { return kind == Kind::In; }
  bool additive() const { return !good() && !multiplicative(); }
  std::string str() const;
};

struct LocalReductionData {
  Integer p;
  KodairaType kodaira;
  unsigned long f = 0;  // conductor exponent
  unsigned long n = 0;  // component index, 0 unless In / Instar
  std::optional<bool> split;  // present iff kodaira = In
};

// Tate's algorithm at p on an integral model with nonzero discriminant.
// Minimalization at p is part of the run (the algorithm's own u = p scaling
// step); the result never depends on which integral model of the curve is
// supplied.  The split flag comes from factoring t^2 + a1 t - a2 of the
// p-minimalized translated model over F_p.
LocalReductionData tate(const weierstrass::Model& m, const Integer& p);

struct MinimalModelResult {
  weierstrass::Model model;
  weierstrass::Transform change;  // transform(m, change) == model
};

MinimalModelResult minimal_model_at(const weierstrass::Model& m, const Integer& p);

// prod p^{f_p} over the primes dividing the discriminant.
Integer global_conductor(const weierstrass::Model& m);

}  // namespace localrep::tate
