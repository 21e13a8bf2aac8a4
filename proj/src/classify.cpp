#include "localrep/classify.hpp"

#include <functional>
#include <sstream>

namespace localrep::classify {

namespace wst = ::localrep::weierstrass;
namespace fam = ::localrep::families;

namespace {

constexpr long kInfinity = 1'000'000'000L;

// Everything the condition columns can ask about, precomputed once per
// (params, p) query.  Valuations are longs with v(0) = kInfinity, so the
// index formulas (which subtract constants) stay in ordinary arithmetic.
struct Ctx {
  const FamilyParams& P;
  Integer p;
  Integer a, b;
  Integer c, d, e;  // C3 decomposition, 1s otherwise

  long vp(const Integer& x) const {
    return x == 0 ? kInfinity : static_cast<long>(nt::vp(x, p));
  }
  bool p_is(long q) const { return p == q; }
  bool p_mod6_is(long r) const { return p % 6 == r; }
  bool p_mod3_is(long r) const { return p % 3 == r; }
};

Ctx make_ctx(const FamilyParams& P, const Integer& p) {
  Ctx ctx{P, p, P.a, P.b, 1, 1, 1};
  if (P.cde) {
    ctx.c = P.cde->c;
    ctx.d = P.cde->d;
    ctx.e = P.cde->e;
  }
  return ctx;
}

Integer mod(const Integer& x, long m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

Integer ipow(const Integer& x, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
  return r;
}

// ---- Rule rows ------------------------------------------------------------

struct T3Row {
  Torsion T;
  const char* id;
  const char* primes;
  const char* cond;
  std::function<bool(const Ctx&)> matches;
};

const std::vector<T3Row>& t3_rows() {
  using TT = Torsion;
  static const std::vector<T3Row> rows = {
      {TT::C3, "C3.m1", "p >= 2", "v_p(b) > 0",
       [](const Ctx& x) { return x.vp(x.b) > 0; }},
      {TT::C3, "C3.m2", "p != 3", "v_p(a - 27b) > 0",
       [](const Ctx& x) { return !x.p_is(3) && x.vp(x.a - 27 * x.b) > 0; }},

      {TT::C5, "C5.m1", "p >= 2", "v_p(ab) > 0",
       [](const Ctx& x) { return x.vp(x.a * x.b) > 0; }},
      {TT::C5, "C5.m2", "p >= 7", "v_p(a^2 + 11ab - b^2) > 0",
       [](const Ctx& x) {
         return x.p >= 7 && x.vp(x.a * x.a + 11 * x.a * x.b - x.b * x.b) > 0;
       }},

      {TT::C6, "C6.m1", "p = 2", "v_2(a + b) >= 3",
       [](const Ctx& x) { return x.p_is(2) && x.vp(x.a + x.b) >= 3; }},
      {TT::C6, "C6.m2", "p = 3", "v_3(a + b) > 0 and v_3(a) = 0",
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a + x.b) > 0 && x.vp(x.a) == 0;
       }},
      {TT::C6, "C6.m3", "p >= 2", "v_p(b) > 0",
       [](const Ctx& x) { return x.vp(x.b) > 0; }},
      {TT::C6, "C6.m4", "p != 3", "v_p(a) > 0",
       [](const Ctx& x) { return !x.p_is(3) && x.vp(x.a) > 0; }},
      {TT::C6, "C6.m5", "p >= 5", "v_p((a + b)(a + 9b)) > 0",
       [](const Ctx& x) {
         return x.p >= 5 && x.vp((x.a + x.b) * (x.a + 9 * x.b)) > 0;
       }},

      {TT::C7, "C7.m1", "p >= 2", "v_p(ab(a - b)) > 0",
       [](const Ctx& x) { return x.vp(x.a * x.b * (x.a - x.b)) > 0; }},
      {TT::C7, "C7.m2", "p >= 13", "v_p(a^3 + 5a^2 b - 8ab^2 + b^3) > 0",
       [](const Ctx& x) {
         return x.p >= 13 &&
                x.vp(ipow(x.a, 3) + 5 * x.a * x.a * x.b - 8 * x.a * x.b * x.b +
                     ipow(x.b, 3)) > 0;
       }},

      {TT::C9, "C9.m1", "p >= 2", "v_p(ab(a - b)) > 0",
       [](const Ctx& x) { return x.vp(x.a * x.b * (x.a - x.b)) > 0; }},
      {TT::C9, "C9.m2", "p >= 7",
       "v_p((a^2 - ab + b^2)(a^3 + 3a^2 b - 6ab^2 + b^3)) > 0",
       [](const Ctx& x) {
         return x.p >= 7 &&
                x.vp((x.a * x.a - x.a * x.b + x.b * x.b) *
                     (ipow(x.a, 3) + 3 * x.a * x.a * x.b -
                      6 * x.a * x.b * x.b + ipow(x.b, 3))) > 0;
       }},

      {TT::C10, "C10.m1", "p >= 2", "v_p(ab(a - b)(a - 2b)) > 0",
       [](const Ctx& x) {
         return x.vp(x.a * x.b * (x.a - x.b) * (x.a - 2 * x.b)) > 0;
       }},
      {TT::C10, "C10.m2", "p >= 7",
       "v_p((a^2 + 2ab - 4b^2)(a^2 - 3ab + b^2)) > 0",
       [](const Ctx& x) {
         return x.p >= 7 &&
                x.vp((x.a * x.a + 2 * x.a * x.b - 4 * x.b * x.b) *
                     (x.a * x.a - 3 * x.a * x.b + x.b * x.b)) > 0;
       }},

      {TT::C12, "C12.m1", "p >= 2",
       "v_p(ab(a - b)(a - 2b)) > 0, with v_3(a) = 0 if p = 3",
       [](const Ctx& x) {
         if (x.p_is(3) && x.vp(x.a) != 0) return false;
         return x.vp(x.a * x.b * (x.a - x.b) * (x.a - 2 * x.b)) > 0;
       }},
      {TT::C12, "C12.m2", "p >= 5",
       "v_p((a^2 - 6ab + 6b^2)(a^2 - 2ab + 2b^2)(a^2 - 3ab + 3b^2)) > 0",
       [](const Ctx& x) {
         return x.p >= 5 &&
                x.vp((x.a * x.a - 6 * x.a * x.b + 6 * x.b * x.b) *
                     (x.a * x.a - 2 * x.a * x.b + 2 * x.b * x.b) *
                     (x.a * x.a - 3 * x.a * x.b + 3 * x.b * x.b)) > 0;
       }},

      {TT::C2xC6, "C2xC6.m1", "p >= 2",
       "v_p(2a(b - a)(b - 5a)) > 0, with v_3(b) = 0 if p = 3",
       [](const Ctx& x) {
         if (x.p_is(3) && x.vp(x.b) != 0) return false;
         return x.vp(2 * x.a * (x.b - x.a) * (x.b - 5 * x.a)) > 0;
       }},
      {TT::C2xC6, "C2xC6.m2", "p >= 5",
       "v_p((b - 9a)(b^2 - 9a^2)) > 0",
       [](const Ctx& x) {
         return x.p >= 5 &&
                x.vp((x.b - 9 * x.a) * (x.b * x.b - 9 * x.a * x.a)) > 0;
       }},
  };
  return rows;
}

struct T5Row {
  Torsion T;
  const char* id;
  const char* primes;
  const char* n_text;
  const char* cond;
  bool split;
  std::optional<int> f_j;
  std::function<bool(const Ctx&)> applies;   // p-range and side conditions
  std::function<long(const Ctx&)> index;     // the printed n formula
};

const std::vector<T5Row>& t5_rows() {
  using TT = Torsion;
  auto any = [](const Ctx&) { return true; };
  static const std::vector<T5Row> rows = {
      {TT::C3, "C3.t1", "p >= 2", "3 v_p(b)", "", true, 1, any,
       [](const Ctx& x) { return 3 * x.vp(x.b); }},
      {TT::C3, "C3.t2S", "p != 3", "v_p(a - 27b)", "p = 1 mod 6", true, 2,
       [](const Ctx& x) { return x.p_mod6_is(1); },
       [](const Ctx& x) { return x.vp(x.a - 27 * x.b); }},
      {TT::C3, "C3.t2N", "p != 3", "v_p(a - 27b)", "p = 5 mod 6 or p = 2",
       false, 2, [](const Ctx& x) { return x.p_mod6_is(5) || x.p_is(2); },
       [](const Ctx& x) { return x.vp(x.a - 27 * x.b); }},

      {TT::C5, "C5.t1", "p >= 2", "5 v_p(ab)", "", true, 1, any,
       [](const Ctx& x) { return 5 * x.vp(x.a * x.b); }},
      {TT::C5, "C5.t2S", "p >= 7", "v_p(a^2 + 11ab - b^2)",
       "(-5(a^2 + b^2) / p) = 1", true, std::nullopt,
       [](const Ctx& x) {
         return x.p >= 7 &&
                nt::legendre(-5 * (x.a * x.a + x.b * x.b), x.p) == 1;
       },
       [](const Ctx& x) {
         return x.vp(x.a * x.a + 11 * x.a * x.b - x.b * x.b);
       }},
      {TT::C5, "C5.t2N", "p >= 7", "v_p(a^2 + 11ab - b^2)",
       "(-5(a^2 + b^2) / p) = -1", false, std::nullopt,
       [](const Ctx& x) {
         return x.p >= 7 &&
                nt::legendre(-5 * (x.a * x.a + x.b * x.b), x.p) == -1;
       },
       [](const Ctx& x) {
         return x.vp(x.a * x.a + 11 * x.a * x.b - x.b * x.b);
       }},

      {TT::C6, "C6.t1", "p >= 2", "6 v_p(b)", "", true, 1, any,
       [](const Ctx& x) { return 6 * x.vp(x.b); }},
      {TT::C6, "C6.t2S", "p != 3", "2 v_p(a)", "p = 1 mod 6", true,
       std::nullopt, [](const Ctx& x) { return x.p_mod6_is(1); },
       [](const Ctx& x) { return 2 * x.vp(x.a); }},
      {TT::C6, "C6.t2N", "p != 3", "2 v_p(a)", "p = 5 mod 6 or p = 2", false,
       std::nullopt, [](const Ctx& x) { return x.p_mod6_is(5) || x.p_is(2); },
       [](const Ctx& x) { return 2 * x.vp(x.a); }},
      {TT::C6, "C6.t3S", "p > 3", "v_p(a + 9b)", "p = 1 mod 6", true, 2,
       [](const Ctx& x) { return x.p > 3 && x.p_mod6_is(1); },
       [](const Ctx& x) { return x.vp(x.a + 9 * x.b); }},
      {TT::C6, "C6.t3N", "p > 3", "v_p(a + 9b)", "p = 5 mod 6", false, 2,
       [](const Ctx& x) { return x.p > 3 && x.p_mod6_is(5); },
       [](const Ctx& x) { return x.vp(x.a + 9 * x.b); }},
      {TT::C6, "C6.t4", "p >= 3", "3 v_p(a + b)", "v_3(a) = 0 if p = 3", true,
       3,
       [](const Ctx& x) {
         return x.p >= 3 && (!x.p_is(3) || x.vp(x.a) == 0);
       },
       [](const Ctx& x) { return 3 * x.vp(x.a + x.b); }},
      {TT::C6, "C6.t5", "p = 2", "v_2(a + 9b) - 3", "v_2(a + b) = 3", false, 4,
       [](const Ctx& x) { return x.p_is(2) && x.vp(x.a + x.b) == 3; },
       [](const Ctx& x) { return x.vp(x.a + 9 * x.b) - 3; }},
      {TT::C6, "C6.t6", "p = 2", "3 v_2(a + b) - 9", "v_2(a + b) > 3", true, 5,
       [](const Ctx& x) { return x.p_is(2) && x.vp(x.a + x.b) > 3; },
       [](const Ctx& x) { return 3 * x.vp(x.a + x.b) - 9; }},

      {TT::C7, "C7.t1", "p >= 2", "7 v_p(ab(a - b))", "", true, 1, any,
       [](const Ctx& x) { return 7 * x.vp(x.a * x.b * (x.a - x.b)); }},
      {TT::C7, "C7.t2S", "p >= 13", "v_p(a^3 + 5a^2 b - 8ab^2 + b^3)",
       "(-7(a^2 - ab + b^2) / p) = 1", true, std::nullopt,
       [](const Ctx& x) {
         return x.p >= 13 &&
                nt::legendre(-7 * (x.a * x.a - x.a * x.b + x.b * x.b), x.p) ==
                    1;
       },
       [](const Ctx& x) {
         return x.vp(ipow(x.a, 3) + 5 * x.a * x.a * x.b -
                     8 * x.a * x.b * x.b + ipow(x.b, 3));
       }},
      {TT::C7, "C7.t2N", "p >= 13", "v_p(a^3 + 5a^2 b - 8ab^2 + b^3)",
       "(-7(a^2 - ab + b^2) / p) = -1", false, std::nullopt,
       [](const Ctx& x) {
         return x.p >= 13 &&
                nt::legendre(-7 * (x.a * x.a - x.a * x.b + x.b * x.b), x.p) ==
                    -1;
       },
       [](const Ctx& x) {
         return x.vp(ipow(x.a, 3) + 5 * x.a * x.a * x.b -
                     8 * x.a * x.b * x.b + ipow(x.b, 3));
       }},

      {TT::C9, "C9.t1", "p >= 2", "9 v_p(ab(a - b))", "", true, 1, any,
       [](const Ctx& x) { return 9 * x.vp(x.a * x.b * (x.a - x.b)); }},
      {TT::C9, "C9.t2S", "p >= 7",
       "3 v_p(a^2 - ab + b^2) + v_p(a^3 + 3a^2 b - 6ab^2 + b^3)",
       "p = 1 mod 6", true, std::nullopt,
       [](const Ctx& x) { return x.p >= 7 && x.p_mod6_is(1); },
       [](const Ctx& x) {
         return 3 * x.vp(x.a * x.a - x.a * x.b + x.b * x.b) +
                x.vp(ipow(x.a, 3) + 3 * x.a * x.a * x.b -
                     6 * x.a * x.b * x.b + ipow(x.b, 3));
       }},
      {TT::C9, "C9.t2N", "p >= 7",
       "3 v_p(a^2 - ab + b^2) + v_p(a^3 + 3a^2 b - 6ab^2 + b^3)",
       "p = 5 mod 6", false, std::nullopt,
       [](const Ctx& x) { return x.p >= 7 && x.p_mod6_is(5); },
       [](const Ctx& x) {
         return 3 * x.vp(x.a * x.a - x.a * x.b + x.b * x.b) +
                x.vp(ipow(x.a, 3) + 3 * x.a * x.a * x.b -
                     6 * x.a * x.b * x.b + ipow(x.b, 3));
       }},

      {TT::C10, "C10.t1", "p >= 2", "v_p(a^5 b^10 (a - 2b)^5 (a - b)^10)",
       "v_2(a) = 0 if p = 2", true, 1,
       [](const Ctx& x) { return !x.p_is(2) || x.vp(x.a) == 0; },
       [](const Ctx& x) {
         return x.vp(ipow(x.a, 5) * ipow(x.b, 10) * ipow(x.a - 2 * x.b, 5) *
                     ipow(x.a - x.b, 10));
       }},
      {TT::C10, "C10.t2", "p = 2",
       "v_2(a^5 (a - 2b)^5) + v_2(a^2 + 2ab - 4b^2) - 12", "v_2(a) > 0", true,
       2, [](const Ctx& x) { return x.p_is(2) && x.vp(x.a) > 0; },
       [](const Ctx& x) {
         return x.vp(ipow(x.a, 5) * ipow(x.a - 2 * x.b, 5)) +
                x.vp(x.a * x.a + 2 * x.a * x.b - 4 * x.b * x.b) - 12;
       }},
      {TT::C10, "C10.t3S", "p >= 7", "v_p(a^2 + 2ab - 4b^2)",
       "((b^2 - a^2) / p) = 1", true, std::nullopt,
       [](const Ctx& x) {
         return x.p >= 7 && nt::legendre(x.b * x.b - x.a * x.a, x.p) == 1;
       },
       [](const Ctx& x) {
         return x.vp(x.a * x.a + 2 * x.a * x.b - 4 * x.b * x.b);
       }},
      {TT::C10, "C10.t3N", "p >= 7", "v_p(a^2 + 2ab - 4b^2)",
       "((b^2 - a^2) / p) = -1", false, std::nullopt,
       [](const Ctx& x) {
         return x.p >= 7 && nt::legendre(x.b * x.b - x.a * x.a, x.p) == -1;
       },
       [](const Ctx& x) {
         return x.vp(x.a * x.a + 2 * x.a * x.b - 4 * x.b * x.b);
       }},
      {TT::C10, "C10.t4S", "p >= 7", "2 v_p(a^2 - 3ab + b^2)",
       "(-(ab + b^2) / p) = 1", true, std::nullopt,
       [](const Ctx& x) {
         return x.p >= 7 &&
                nt::legendre(-(x.a * x.b + x.b * x.b), x.p) == 1;
       },
       [](const Ctx& x) {
         return 2 * x.vp(x.a * x.a - 3 * x.a * x.b + x.b * x.b);
       }},
      {TT::C10, "C10.t4N", "p >= 7", "2 v_p(a^2 - 3ab + b^2)",
       "(-(ab + b^2) / p) = -1", false, std::nullopt,
       [](const Ctx& x) {
         return x.p >= 7 &&
                nt::legendre(-(x.a * x.b + x.b * x.b), x.p) == -1;
       },
       [](const Ctx& x) {
         return 2 * x.vp(x.a * x.a - 3 * x.a * x.b + x.b * x.b);
       }},

      {TT::C12, "C12.t1", "p >= 2", "v_p(b^12 (a - b)^12 (a - 2b)^6)",
       "v_2(a) = 0 if p = 2, v_3(a) = 0 if p = 3", true, 1,
       [](const Ctx& x) {
         if (x.p_is(2) && x.vp(x.a) != 0) return false;
         if (x.p_is(3) && x.vp(x.a) != 0) return false;
         return true;
       },
       [](const Ctx& x) {
         return x.vp(ipow(x.b, 12) * ipow(x.a - x.b, 12) *
                     ipow(x.a - 2 * x.b, 6));
       }},
      {TT::C12, "C12.t2", "p = 2", "6 v_2(a - 2b) - 6", "v_2(a) = 1", true, 2,
       [](const Ctx& x) { return x.p_is(2) && x.vp(x.a) == 1; },
       [](const Ctx& x) { return 6 * x.vp(x.a - 2 * x.b) - 6; }},
      {TT::C12, "C12.t3", "p = 2", "2 v_2(a) - 2", "v_2(a) >= 2", false, 2,
       [](const Ctx& x) { return x.p_is(2) && x.vp(x.a) >= 2; },
       [](const Ctx& x) { return 2 * x.vp(x.a) - 2; }},
      {TT::C12, "C12.t4S", "p >= 5", "2 v_p(a) + v_p(a^2 - 6ab + 6b^2)",
       "p = 1 mod 6", true, std::nullopt,
       [](const Ctx& x) { return x.p >= 5 && x.p_mod6_is(1); },
       [](const Ctx& x) {
         return 2 * x.vp(x.a) +
                x.vp(x.a * x.a - 6 * x.a * x.b + 6 * x.b * x.b);
       }},
      {TT::C12, "C12.t4N", "p >= 5", "2 v_p(a) + v_p(a^2 - 6ab + 6b^2)",
       "p = 5 mod 6", false, std::nullopt,
       [](const Ctx& x) { return x.p >= 5 && x.p_mod6_is(5); },
       [](const Ctx& x) {
         return 2 * x.vp(x.a) +
                x.vp(x.a * x.a - 6 * x.a * x.b + 6 * x.b * x.b);
       }},
      // (2^10 b^40 / p) = 1 and (3^5 b^21 (a-b)^15 (a-2b)^4 / p) = 1 whenever
      // the respective quadratic divides: both residues are forced squares,
      // so this row is unconditionally split.
      {TT::C12, "C12.t5", "p >= 5",
       "3 v_p(a^2 - 2ab + 2b^2) + 4 v_p(a^2 - 3ab + 3b^2)", "", true,
       std::nullopt, [](const Ctx& x) { return x.p >= 5; },
       [](const Ctx& x) {
         return 3 * x.vp(x.a * x.a - 2 * x.a * x.b + 2 * x.b * x.b) +
                4 * x.vp(x.a * x.a - 3 * x.a * x.b + 3 * x.b * x.b);
       }},

      {TT::C2xC6, "C2xC6.t1", "p >= 2", "6 v_p(2a(b - 5a)(b - a))",
       "v_3(b) = 0 if p = 3, v_2(a + b) = 0 if p = 2", true, 1,
       [](const Ctx& x) {
         if (x.p_is(3) && x.vp(x.b) != 0) return false;
         if (x.p_is(2) && x.vp(x.a + x.b) != 0) return false;
         return true;
       },
       [](const Ctx& x) {
         return 6 * x.vp(2 * x.a * (x.b - 5 * x.a) * (x.b - x.a));
       }},
      {TT::C2xC6, "C2xC6.t2S", "p >= 5", "2 v_p((b^2 - 9a^2)(b - 9a))",
       "p = 1 mod 6", true, std::nullopt,
       [](const Ctx& x) { return x.p >= 5 && x.p_mod6_is(1); },
       [](const Ctx& x) {
         return 2 * x.vp((x.b * x.b - 9 * x.a * x.a) * (x.b - 9 * x.a));
       }},
      {TT::C2xC6, "C2xC6.t2N", "p >= 5", "2 v_p((b^2 - 9a^2)(b - 9a))",
       "p = 5 mod 6", false, std::nullopt,
       [](const Ctx& x) { return x.p >= 5 && x.p_mod6_is(5); },
       [](const Ctx& x) {
         return 2 * x.vp((x.b * x.b - 9 * x.a * x.a) * (x.b - 9 * x.a));
       }},
      {TT::C2xC6, "C2xC6.t3N", "p = 2", "6 v_2(b - 5a) + 2 v_2(b + 3a) - 24",
       "v_2(a - b) = 2 and ab - b^2 = 4 mod 16", false, 2,
       [](const Ctx& x) {
         return x.p_is(2) && x.vp(x.a - x.b) == 2 &&
                mod(x.a * x.b - x.b * x.b, 16) == 4;
       },
       [](const Ctx& x) {
         return 6 * x.vp(x.b - 5 * x.a) + 2 * x.vp(x.b + 3 * x.a) - 24;
       }},
      {TT::C2xC6, "C2xC6.t3S", "p = 2", "6 v_2(b - 5a) + 2 v_2(b + 3a) - 24",
       "v_2(a - b) = 2 and ab - b^2 = 12 mod 16", true, 2,
       [](const Ctx& x) {
         return x.p_is(2) && x.vp(x.a - x.b) == 2 &&
                mod(x.a * x.b - x.b * x.b, 16) == 12;
       },
       [](const Ctx& x) {
         return 6 * x.vp(x.b - 5 * x.a) + 2 * x.vp(x.b + 3 * x.a) - 24;
       }},
      {TT::C2xC6, "C2xC6.t4", "p = 2", "6 v_2(b - a) - 18", "v_2(a - b) >= 4",
       true, 2, [](const Ctx& x) { return x.p_is(2) && x.vp(x.a - x.b) >= 4; },
       [](const Ctx& x) { return 6 * x.vp(x.b - x.a) - 18; }},
      {TT::C2xC6, "C2xC6.t5", "p = 2", "2 v_2(b - 9a) - 6", "v_2(a - b) = 3",
       false, 3, [](const Ctx& x) { return x.p_is(2) && x.vp(x.a - x.b) == 3; },
       [](const Ctx& x) { return 2 * x.vp(x.b - 9 * x.a) - 6; }},
      {TT::C2xC6, "C2xC6.t6", "p = 2", "2 v_2(b - 3a) - 2", "v_2(a - b) = 1",
       false, 4, [](const Ctx& x) { return x.p_is(2) && x.vp(x.a - x.b) == 1; },
       [](const Ctx& x) { return 2 * x.vp(x.b - 3 * x.a) - 2; }},
  };
  return rows;
}

// Additive reduction: representation rows.  expect_f is the conductor
// exponent the row promises; it must agree with the recomputation from the
// descriptor.
struct RepRow {
  Torsion T;
  const char* id;
  const char* primes;
  const char* cond;
  const char* out_text;
  const char* kodaira;  // expected reduction types, "" when unstated
  unsigned long expect_f;
  std::function<bool(const Ctx&)> matches;
  std::function<RepKind(const Ctx&)> make;
};

nt::SquareClass delta_class(const Ctx& x) {
  fam::MinimalDiscriminant md = fam::minimal_discriminant(x.P);
  return nt::square_class(md.delta, x.p);
}

RepKind sc_ram_delta(const Ctx& x, unsigned a_xi, unsigned ord_xi) {
  return DihedralSupercuspidal{true, delta_class(x), a_xi, ord_xi};
}

RepKind twst_gamma(const Ctx& x) {
  nt::SquareClass g = wst::gamma_invariant(fam::build_curve(x.P), x.p);
  return TwistedSteinberg{g, 1};
}

const std::vector<RepRow>& rep_rows() {
  using TT = Torsion;
  static const std::vector<RepRow> rows = {
      // ---- C3, p != 3 ----
      {TT::C3, "C3.a1", "p = 1 mod 3, p != 3", "v_p(a) = 1, 2 mod 3",
       "chi x chi^-1, a(chi) = 1, ord(chi) = 3", "IV|IV*", 2,
       [](const Ctx& x) {
         return !x.p_is(3) && x.p_mod3_is(1) && x.vp(x.a) % 3 != 0 &&
                x.vp(x.a) < kInfinity;
       },
       [](const Ctx&) { return RamifiedPrincipalSeries{1, 3}; }},
      {TT::C3, "C3.a2", "p = 2 mod 3", "v_p(a) = 1, 2 mod 3",
       "omega_{F,xi}, F unramified, a(xi) = 1, ord(xi) = 3", "IV|IV*", 2,
       [](const Ctx& x) {
         return x.p_mod3_is(2) && x.vp(x.a) % 3 != 0 && x.vp(x.a) < kInfinity;
       },
       [](const Ctx& x) {
         std::optional<nt::SquareClass> fd;
         if (x.p == 2) fd = nt::square_class(Integer(5), x.p);
         return DihedralSupercuspidal{false, fd, 1, 3};
       }},
      // ---- C3, p = 3 ----
      {TT::C3, "C3.a3", "p = 3",
       "v_3(a) = 0 mod 3, v_3(a - 27b) = 3, b d^2 e^3 (b^3 d^2 e^5 - c) != -2 "
       "mod 9",
       "omega_{F,xi}, F = Q_3(sqrt(Delta_T)) ramified, a(xi) = 2, ord(xi) = 6",
       "II", 3,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a) % 3 == 0 &&
                x.vp(x.a - 27 * x.b) == 3 &&
                mod(x.b * x.d * x.d * ipow(x.e, 3) *
                        (ipow(x.b, 3) * x.d * x.d * ipow(x.e, 5) - x.c),
                    9) != 7;
       },
       [](const Ctx& x) { return sc_ram_delta(x, 2, 6); }},
      {TT::C3, "C3.a4", "p = 3",
       "v_3(a) = 0 mod 3, v_3(a - 27b) = 3, b d^2 e^3 (b^3 d^2 e^5 - c) = -2 "
       "mod 9",
       "omega_{F,xi}, F = Q_3(i) unramified, a(xi) = 1, ord(xi) = 4", "III", 2,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a) % 3 == 0 &&
                x.vp(x.a - 27 * x.b) == 3 &&
                mod(x.b * x.d * x.d * ipow(x.e, 3) *
                        (ipow(x.b, 3) * x.d * x.d * ipow(x.e, 5) - x.c),
                    9) == 7;
       },
       [](const Ctx& x) {
         return DihedralSupercuspidal{
             false, nt::square_class(Integer(-1), x.p), 1, 4};
       }},
      {TT::C3, "C3.a5", "p = 3", "v_3(a - 27b) = 5",
       "omega_{F,xi}, F = Q_3(sqrt(Delta_T)) ramified, a(xi) = 2, ord(xi) = 6",
       "IV", 3,
       [](const Ctx& x) { return x.p_is(3) && x.vp(x.a - 27 * x.b) == 5; },
       [](const Ctx& x) { return sc_ram_delta(x, 2, 6); }},
      {TT::C3, "C3.a6", "p = 3", "v_3(a) = 1",
       "omega_{F,xi}, F = Q_3(sqrt(Delta_T)) ramified, a(xi) = 2, ord(xi) = 6",
       "IV*", 3, [](const Ctx& x) { return x.p_is(3) && x.vp(x.a) == 1; },
       [](const Ctx& x) { return sc_ram_delta(x, 2, 6); }},
      {TT::C3, "C3.a7", "p = 3", "v_3(a) = 2, ab = 18 mod 27",
       "omega_{F,xi}, F = Q_3(sqrt(Delta_T)) unramified, a(xi) = 2, ord(xi) = "
       "6",
       "IV", 4,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a) == 2 && mod(x.a * x.b, 27) == 18;
       },
       [](const Ctx& x) {
         return DihedralSupercuspidal{false, delta_class(x), 2, 6};
       }},
      {TT::C3, "C3.a8", "p = 3", "v_3(a) = 2, ab = 9 mod 27",
       "chi x chi^-1, a(chi) = 2, ord(chi) = 6", "IV", 4,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a) == 2 && mod(x.a * x.b, 27) == 9;
       },
       [](const Ctx&) { return RamifiedPrincipalSeries{2, 6}; }},
      {TT::C3, "C3.a9", "p = 3", "v_3(a - 27b) = 6",
       "chi x chi^-1, a(chi) = 1, ord(chi) = 2", "I0*", 2,
       [](const Ctx& x) { return x.p_is(3) && x.vp(x.a - 27 * x.b) == 6; },
       [](const Ctx&) { return RamifiedPrincipalSeries{1, 2}; }},
      {TT::C3, "C3.a10", "p = 3", "v_3(a - 27b) - 6 >= 1",
       "twist of Steinberg by (gamma, .), a((gamma, .)) = 1", "In*", 2,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a - 27 * x.b) < kInfinity &&
                x.vp(x.a - 27 * x.b) >= 7;
       },
       twst_gamma},
      {TT::C3, "C3.a11", "p = 3", "v_3(a) = 1, 2 mod 3, v_3(a) > 2",
       "omega_{F,xi}, F = Q_3(sqrt(Delta_T)) ramified, a(xi) = 4, ord(xi) = 6",
       "IV|IV*", 5,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a) > 2 && x.vp(x.a) < kInfinity &&
                x.vp(x.a) % 3 != 0;
       },
       [](const Ctx& x) { return sc_ram_delta(x, 4, 6); }},

      // ---- C3_0 ----
      {TT::C3_0, "C3_0.a1", "p = 1 mod 3, p != 3", "v_p(a) = 1, 2",
       "chi x chi^-1, a(chi) = 1, ord(chi) = 3", "IV|IV*", 2,
       [](const Ctx& x) {
         return !x.p_is(3) && x.p_mod3_is(1) &&
                (x.vp(x.a) == 1 || x.vp(x.a) == 2);
       },
       [](const Ctx&) { return RamifiedPrincipalSeries{1, 3}; }},
      {TT::C3_0, "C3_0.a2", "p = 2 mod 3", "v_p(a) = 1, 2",
       "omega_{F,xi}, F unramified, a(xi) = 1, ord(xi) = 3", "IV|IV*", 2,
       [](const Ctx& x) {
         return x.p_mod3_is(2) && (x.vp(x.a) == 1 || x.vp(x.a) == 2);
       },
       [](const Ctx& x) {
         std::optional<nt::SquareClass> fd;
         if (x.p == 2) fd = nt::square_class(Integer(5), x.p);
         return DihedralSupercuspidal{false, fd, 1, 3};
       }},
      {TT::C3_0, "C3_0.a3", "p = 3", "v_3(a) = 0, a = +-1, +-4 mod 9",
       "omega_{F,xi}, F = Q_3(sqrt(Delta_T)) ramified, a(xi) = 2, ord(xi) = 6",
       "II", 3,
       [](const Ctx& x) {
         Integer r = mod(x.a, 9);
         return x.p_is(3) && x.vp(x.a) == 0 &&
                (r == 1 || r == 8 || r == 4 || r == 5);
       },
       [](const Ctx& x) { return sc_ram_delta(x, 2, 6); }},
      // Delta_T has odd 3-valuation here, so the field cannot be
      // Q_3(sqrt(Delta_T)); conductor 2 = 2 a(xi) forces the unramified
      // quadratic extension Q_3(i).
      {TT::C3_0, "C3_0.a4", "p = 3", "v_3(a) = 0, a = +-2 mod 9",
       "omega_{F,xi}, F = Q_3(i) unramified, a(xi) = 1, ord(xi) = 4", "III", 2,
       [](const Ctx& x) {
         Integer r = mod(x.a, 9);
         return x.p_is(3) && x.vp(x.a) == 0 && (r == 2 || r == 7);
       },
       [](const Ctx& x) {
         return DihedralSupercuspidal{
             false, nt::square_class(Integer(-1), x.p), 1, 4};
       }},
      {TT::C3_0, "C3_0.a5", "p = 3", "v_3(a) = 1, 2",
       "omega_{F,xi}, F = Q_3(sqrt(Delta_T)) ramified, a(xi) = 4, ord(xi) = 6",
       "IV|IV*", 5,
       [](const Ctx& x) {
         return x.p_is(3) && (x.vp(x.a) == 1 || x.vp(x.a) == 2);
       },
       [](const Ctx& x) { return sc_ram_delta(x, 4, 6); }},

      // ---- C6 ----
      {TT::C6, "C6.a1", "p = 2", "v_2(a + b) = 1, 2",
       "omega_{F,xi}, F = Q_2(sqrt(5)) unramified, a(xi) = 1, ord(xi) = 3",
       "IV|IV*", 2,
       [](const Ctx& x) {
         return x.p_is(2) &&
                (x.vp(x.a + x.b) == 1 || x.vp(x.a + x.b) == 2);
       },
       [](const Ctx& x) {
         return DihedralSupercuspidal{
             false, nt::square_class(Integer(5), x.p), 1, 3};
       }},
      {TT::C6, "C6.a2", "p = 3", "v_3(a) = 1",
       "omega_{F,xi}, F unramified, a(xi) = 1, ord(xi) = 4", "III", 2,
       [](const Ctx& x) { return x.p_is(3) && x.vp(x.a) == 1; },
       [](const Ctx&) {
         return DihedralSupercuspidal{false, std::nullopt, 1, 4};
       }},
      {TT::C6, "C6.a3", "p = 3", "v_3(a) = 2, v_3(a + 9b) = 2",
       "chi x chi^-1, a(chi) = 1, ord(chi) = 2", "I0*", 2,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a) == 2 && x.vp(x.a + 9 * x.b) == 2;
       },
       [](const Ctx&) { return RamifiedPrincipalSeries{1, 2}; }},
      {TT::C6, "C6.a4", "p = 3", "v_3(a) = 2, v_3(a + 9b) >= 3",
       "twist of Steinberg by (gamma, .), a((gamma, .)) = 1", "In*", 2,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a) == 2 && x.vp(x.a + 9 * x.b) >= 3;
       },
       twst_gamma},
      {TT::C6, "C6.a5", "p = 3", "v_3(a) >= 3",
       "twist of Steinberg by (gamma, .), a((gamma, .)) = 1", "In*", 2,
       [](const Ctx& x) {
         return x.p_is(3) && x.vp(x.a) >= 3 && x.vp(x.a) < kInfinity;
       },
       twst_gamma},

      // ---- C5 ----
      {TT::C5, "C5.a1", "p = 5", "v_5(a + 18b) = 1",
       "omega_{F,xi}, F unramified, a(xi) = 1, ord(xi) = 6", "II", 2,
       [](const Ctx& x) { return x.p_is(5) && x.vp(x.a + 18 * x.b) == 1; },
       [](const Ctx&) {
         return DihedralSupercuspidal{false, std::nullopt, 1, 6};
       }},
      {TT::C5, "C5.a2", "p = 5", "v_5(a + 18b) >= 2",
       "chi x chi^-1, a(chi) = 1, ord(chi) = 4", "III", 2,
       [](const Ctx& x) { return x.p_is(5) && x.vp(x.a + 18 * x.b) >= 2; },
       [](const Ctx&) { return RamifiedPrincipalSeries{1, 4}; }},

      // ---- C7 ----
      {TT::C7, "C7.a1", "p = 7", "v_7(a + 4b) >= 1",
       "chi x chi^-1, a(chi) = 1, ord(chi) = 6", "II", 2,
       [](const Ctx& x) { return x.p_is(7) && x.vp(x.a + 4 * x.b) >= 1; },
       [](const Ctx&) { return RamifiedPrincipalSeries{1, 6}; }},

      // ---- C9 ----
      {TT::C9, "C9.a1", "p = 3", "v_3(a + b) >= 1",
       "omega_{F,xi}, F = Q_3(sqrt(Delta_T)) ramified, a(xi) = 2, ord(xi) = 6",
       "IV", 3,
       [](const Ctx& x) { return x.p_is(3) && x.vp(x.a + x.b) >= 1; },
       [](const Ctx& x) { return sc_ram_delta(x, 2, 6); }},

      // ---- C10 ----
      {TT::C10, "C10.a1", "p = 5", "v_5(a + b) >= 1",
       "chi x chi^-1, a(chi) = 1, ord(chi) = 4", "III", 2,
       [](const Ctx& x) { return x.p_is(5) && x.vp(x.a + x.b) >= 1; },
       [](const Ctx&) { return RamifiedPrincipalSeries{1, 4}; }},

      // ---- C12 ----
      {TT::C12, "C12.a1", "p = 3", "v_3(a) >= 1",
       "twist of Steinberg by (gamma, .), a((gamma, .)) = 1", "In*", 2,
       [](const Ctx& x) { return x.p_is(3) && x.vp(x.a) >= 1; },
       twst_gamma},

      // ---- C2xC6 ----
      {TT::C2xC6, "C2xC6.a1", "p = 3", "v_3(b) >= 1",
       "twist of Steinberg by (gamma, .), a((gamma, .)) = 1", "In*", 2,
       [](const Ctx& x) { return x.p_is(3) && x.vp(x.b) >= 1; },
       twst_gamma},
  };
  return rows;
}

std::string instance_tag(const FamilyParams& P, const Integer& p) {
  std::ostringstream os;
  os << fam::to_string(P.T) << "(a=" << P.a << ", b=" << P.b << ") at p=" << p;
  return os.str();
}

}  // namespace

std::vector<MultMatch> mult_primes(const FamilyParams& params) {
  std::vector<MultMatch> out;
  if (params.T == Torsion::C3_0) return out;  // additive at every bad prime
  fam::MinimalDiscriminant md = fam::minimal_discriminant(params);
  nt::PrimeFactorization pf = nt::factor(md.delta);
  for (const auto& [p, ignored] : pf.factors) {
    Ctx ctx = make_ctx(params, p);
    for (const T3Row& row : t3_rows()) {
      if (row.T != params.T) continue;
      if (row.matches(ctx)) out.push_back({p, row.id});
    }
  }
  return out;
}

MultTypeResult mult_type(const FamilyParams& params, const Integer& p) {
  Ctx ctx = make_ctx(params, p);
  std::vector<const T5Row*> hits;
  for (const T5Row& row : t5_rows()) {
    if (row.T != params.T) continue;
    if (!row.applies(ctx)) continue;
    long n = row.index(ctx);
    if (n >= 1 && n < kInfinity) hits.push_back(&row);
  }
  if (hits.size() != 1) {
    std::ostringstream os;
    os << "multiplicative-type table: " << hits.size() << " rows match for "
       << instance_tag(params, p);
    for (auto* h : hits) os << " [" << h->id << "]";
    throw ClassificationError(os.str());
  }
  const T5Row& row = *hits.front();
  MultTypeResult res;
  res.p = p;
  res.n = static_cast<unsigned long>(row.index(ctx));
  res.split = row.split;
  res.rule_id = row.id;
  res.witness_model = row.f_j;
  return res;
}

bool split_by_c4c6(const FamilyParams& params, const Integer& p) {
  if (p < 5)
    throw std::invalid_argument("split_by_c4c6: requires p >= 5");
  wst::Invariants inv = wst::invariants(fam::build_curve(params));
  Integer c4(mpq_numref(inv.c4.get_mpq_t()));
  Integer c6(mpq_numref(inv.c6.get_mpq_t()));
  int sym = nt::legendre(-c4 * c6, p);
  if (sym == 0)
    throw ClassificationError("split_by_c4c6: p divides c4 c6 at " +
                              instance_tag(params, p));
  return sym == 1;
}

std::string kind_name(const RepKind& kind) {
  struct V {
    std::string operator()(const UnramifiedPrincipalSeries&) const {
      return "UnramifiedPrincipalSeries";
    }
    std::string operator()(const RamifiedPrincipalSeries&) const {
      return "RamifiedPrincipalSeries";
    }
    std::string operator()(const Steinberg&) const { return "Steinberg"; }
    std::string operator()(const TwistedSteinberg&) const {
      return "TwistedSteinberg";
    }
    std::string operator()(const DihedralSupercuspidal&) const {
      return "DihedralSupercuspidal";
    }
  };
  return std::visit(V{}, kind);
}

unsigned long conductor_exponent(const RepKind& kind) {
  struct V {
    unsigned long operator()(const UnramifiedPrincipalSeries&) const {
      return 0;
    }
    unsigned long operator()(const RamifiedPrincipalSeries& r) const {
      return 2UL * r.a_chi;
    }
    unsigned long operator()(const Steinberg&) const { return 1; }
    unsigned long operator()(const TwistedSteinberg& t) const {
      return t.a_twist == 0 ? 1 : 2UL * t.a_twist;
    }
    unsigned long operator()(const DihedralSupercuspidal& s) const {
      return s.field_ramified ? 1UL + s.a_xi : 2UL * s.a_xi;
    }
  };
  return std::visit(V{}, kind);
}

LocalRepDescriptor classify_rep(const FamilyParams& params, const Integer& p) {
  fam::MinimalDiscriminant md = fam::minimal_discriminant(params);
  unsigned long vD = nt::vp(md.delta, p);
  Ctx ctx = make_ctx(params, p);

  std::vector<const T5Row*> mult_hits;
  if (params.T != Torsion::C3_0) {
    for (const T5Row& row : t5_rows()) {
      if (row.T != params.T || !row.applies(ctx)) continue;
      long n = row.index(ctx);
      if (n >= 1 && n < kInfinity) mult_hits.push_back(&row);
    }
  }
  std::vector<const RepRow*> add_hits;
  for (const RepRow& row : rep_rows()) {
    if (row.T != params.T) continue;
    if (row.matches(ctx)) add_hits.push_back(&row);
  }

  auto audit_fail = [&](const char* situation) {
    std::ostringstream os;
    os << "representation tables: " << situation << " for "
       << instance_tag(params, p) << " (v_p(Delta_T) = " << vD
       << "; mult rows:";
    for (auto* h : mult_hits) os << " " << h->id;
    os << "; additive rows:";
    for (auto* h : add_hits) os << " " << h->id;
    os << ")";
    return ClassificationError(os.str());
  };

  LocalRepDescriptor out;
  out.p = p;
  if (vD == 0) {
    if (!mult_hits.empty() || !add_hits.empty())
      throw audit_fail("rows match at a good prime");
    out.kind = UnramifiedPrincipalSeries{};
    out.rule_id = fam::to_string(params.T) + ".good";
  } else if (mult_hits.size() == 1 && add_hits.empty()) {
    const T5Row& row = *mult_hits.front();
    if (row.split) {
      out.kind = Steinberg{};
    } else {
      nt::SquareClass g = wst::gamma_invariant(fam::build_curve(params), p);
      if (!nt::is_unramified_quadratic(g))
        throw audit_fail("non-split twist class is ramified");
      out.kind = TwistedSteinberg{g, 0};
    }
    out.rule_id = row.id;
  } else if (add_hits.size() == 1 && mult_hits.empty()) {
    const RepRow& row = *add_hits.front();
    out.kind = row.make(ctx);
    out.rule_id = row.id;
    if (conductor_exponent(out.kind) != row.expect_f)
      throw audit_fail("conductor formula disagrees with the row");
    if (const auto* sc = std::get_if<DihedralSupercuspidal>(&out.kind);
        sc && sc->field_disc) {
      // the class must cut out an honest quadratic field of the declared kind
      if (sc->field_disc->is_trivial() ||
          sc->field_ramified == nt::is_unramified_quadratic(*sc->field_disc))
        throw audit_fail("field discriminant class contradicts ramification");
    }
    if (const auto* tw = std::get_if<TwistedSteinberg>(&out.kind);
        tw && tw->a_twist == 1 && nt::is_unramified_quadratic(tw->twist))
      throw audit_fail("ramified twist expected but gamma is unramified");
  } else {
    throw audit_fail(add_hits.empty() && mult_hits.empty()
                         ? "no row matches at a bad prime"
                         : "multiple rows match");
  }
  out.f = conductor_exponent(out.kind);
  return out;
}

GlobalRepReport global_rep(const FamilyParams& params) {
  GlobalRepReport rep;
  rep.params = params;
  fam::MinimalDiscriminant md = fam::minimal_discriminant(params);
  nt::PrimeFactorization pf = nt::factor(md.delta);
  for (const auto& [p, ignored] : pf.factors) {
    LocalRepDescriptor d = classify_rep(params, p);
    Integer pe = ipow(p, d.f);
    rep.conductor *= pe;
    rep.locals.emplace(p, std::move(d));
  }
  Integer oracle = tate::global_conductor(fam::build_curve(params));
  if (oracle != rep.conductor) {
    std::ostringstream os;
    os << "conductor mismatch for " << fam::to_string(params.T)
       << "(a=" << params.a << ", b=" << params.b
       << "): tables give " << rep.conductor << ", Tate gives " << oracle;
    throw ClassificationError(os.str());
  }
  return rep;
}

const std::vector<RuleInfo>& rule_inventory() {
  static const std::vector<RuleInfo> inv = [] {
    std::vector<RuleInfo> v;
    for (const T3Row& r : t3_rows())
      v.push_back({r.id, "mult-primes", fam::to_string(r.T), r.primes, r.cond,
                   "multiplicative reduction at p", "In"});
    for (const T5Row& r : t5_rows())
      v.push_back({r.id, "mult-type", fam::to_string(r.T), r.primes,
                   std::string(r.cond).empty()
                       ? std::string("n = ") + r.n_text + " >= 1"
                       : std::string("n = ") + r.n_text + " >= 1; " + r.cond,
                   std::string(r.split ? "split" : "non-split") +
                       " I_n with the stated n" +
                       (r.f_j ? ", witness F_" + std::to_string(*r.f_j) : ""),
                   "In"});
    for (const RepRow& r : rep_rows())
      v.push_back({r.id, "representation", fam::to_string(r.T), r.primes,
                   r.cond,
                   std::string(r.out_text) + "; f_p = " +
                       std::to_string(r.expect_f),
                   r.kodaira});
    for (fam::Torsion T : fam::all_torsions())
      v.push_back({fam::to_string(T) + ".good", "representation",
                   fam::to_string(T), "any p", "v_p(Delta_T) = 0",
                   "chi x chi^-1, a(chi) = 0; f_p = 0", "I0"});
    return v;
  }();
  return inv;
}

std::string traceability_markdown() {
  std::ostringstream os;
  os << "# Classification rule inventory\n\n"
     << "One row per executable rule in the classification engine.  Rule ids\n"
     << "are stable and appear verbatim in JSON reports and discrepancy logs.\n";
  std::string current;
  for (const RuleInfo& r : rule_inventory()) {
    if (r.table != current) {
      os << "\n## " << r.table << "\n\n"
         << "| rule | family | primes | condition | output | reduction |\n"
         << "|------|--------|--------|-----------|--------|-----------|\n";
      current = r.table;
    }
    os << "| `" << r.id << "` | " << r.family << " | " << r.primes << " | "
       << r.condition << " | " << r.output << " | " << r.kodaira << " |\n";
  }
  return os.str();
}

std::vector<std::string> expected_kodaira(const std::string& rule_id) {
  for (const RuleInfo& r : rule_inventory()) {
    if (r.id != rule_id) continue;
    std::vector<std::string> out;
    std::string cur;
    for (char ch : r.kodaira) {
      if (ch == '|') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }
  return {};
}

}  // namespace localrep::classify
