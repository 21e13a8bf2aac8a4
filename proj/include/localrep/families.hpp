#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localrep/weierstrass.hpp"

namespace localrep::families {

// The nine parameterized families E_T carrying a rational point of odd
// prime-power order.  Every such curve over Q is isomorphic to a member.
enum class Torsion { C3, C3_0, C5, C6, C7, C9, C10, C12, C2xC6 };

const std::vector<Torsion>& all_torsions();
std::string to_string(Torsion t);
std::optional<Torsion> torsion_from_string(const std::string& s);

// a = c^3 d^2 e with d, e coprime positive squarefree; sign lives in c.
struct C3Decomposition {
  Integer c, d, e;
};

C3Decomposition c3_decompose(const Integer& a);

struct FamilyParams {
  Torsion T;
  Integer a, b;  // b is 0 and ignored for T = C3_0
  std::optional<C3Decomposition> cde;  // present iff T = C3
};

// Checks coprimality and nonsingularity; attaches the c^3d^2e decomposition
// for C3.  For C3_0 the parameter a must be cubefree (members with a cube
// factor are isomorphic to smaller ones and break the minimality bookkeeping).
// Throws std::invalid_argument with a one-line reason.
FamilyParams validate_params(Torsion T, const Integer& a, const Integer& b);

// The model y^2 + a1 xy + a3 y = x^3 + a2 x^2 with integer coefficients.
weierstrass::Model build_curve(const FamilyParams& params);

// gamma is the discriminant of build_curve(params); delta = gamma / u^12 is
// the minimal discriminant.
struct MinimalDiscriminant {
  Integer gamma;
  Integer u;
  Integer delta;
};

MinimalDiscriminant minimal_discriminant(const FamilyParams& params);

// Row (T, j) of the change-of-variables table producing the auxiliary model
// F_{T,j} from E_T.
struct FModelSpec {
  Torsion T;
  int j;
  Rational z, u, r, s, t;
};

FModelSpec f_model_spec(const FamilyParams& params, int j);
weierstrass::Model f_model(const FamilyParams& params, int j);

// True when E_T(-a,-b) is literally the same model as E_T(a,b) (all
// coefficient polynomials have even total degree).
bool negation_invariant(Torsion T);

// All valid parameter choices with |a|,|b| <= bound, deduplicating
// (a,b) ~ (-a,-b) only for negation-invariant families.  For C3_0 this is
// the single-parameter list over cubefree a.
std::vector<FamilyParams> enumerate_family(Torsion T, long bound);

}  // namespace localrep::families
