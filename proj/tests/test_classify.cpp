#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "localrep/classify.hpp"
#include "localrep/sweep.hpp"

using namespace localrep;
namespace fam = localrep::families;
namespace wst = localrep::weierstrass;
using fam::Torsion;

namespace {

fam::FamilyParams P(Torsion T, long a, long b) {
  return fam::validate_params(T, a, b);
}

}  // namespace

TEST_CASE("mult_primes: pinned memberships") {
  auto m5 = classify::mult_primes(P(Torsion::C5, 1, 1));
  REQUIRE(m5.size() == 1);
  CHECK(m5[0].p == 11);
  CHECK(m5[0].rule_id == "C5.m2");

  auto m3 = classify::mult_primes(P(Torsion::C3, 1, 1));
  REQUIRE(m3.size() == 2);
  CHECK(m3[0].p == 2);
  CHECK(m3[0].rule_id == "C3.m2");
  CHECK(m3[1].p == 13);
  CHECK(m3[1].rule_id == "C3.m2");

  CHECK(classify::mult_primes(P(Torsion::C3_0, 5, 0)).empty());
}

TEST_CASE("mult_type: pinned rows") {
  classify::MultTypeResult r5 = classify::mult_type(P(Torsion::C5, 1, 1), 11);
  CHECK(r5.n == 1);
  CHECK(r5.split);
  CHECK(r5.rule_id == "C5.t2S");

  classify::MultTypeResult r2 = classify::mult_type(P(Torsion::C3, 1, 1), 2);
  CHECK(r2.n == 1);
  CHECK_FALSE(r2.split);
  CHECK(r2.rule_id == "C3.t2N");
  CHECK(r2.witness_model == 2);

  classify::MultTypeResult r13 = classify::mult_type(P(Torsion::C3, 1, 1), 13);
  CHECK(r13.n == 1);
  CHECK(r13.split);  // 13 = 1 mod 6

  // no row matches at a good prime
  CHECK_THROWS_AS(classify::mult_type(P(Torsion::C5, 1, 1), 7),
                  classify::ClassificationError);
}

TEST_CASE("split_by_c4c6: pinned and residue identities") {
  CHECK(classify::split_by_c4c6(P(Torsion::C5, 1, 1), 11));
  CHECK_THROWS_AS(classify::split_by_c4c6(P(Torsion::C5, 1, 1), 3),
                  std::invalid_argument);

  // -c4 c6 = -5 a^4 b^4 (a^2 + b^2) mod p on the C5 quadratic divisor rows
  for (long a = 1; a <= 8; ++a) {
    for (long b = -8; b <= 8; ++b) {
      if (b == 0) continue;
      Integer g;
      Integer A(a), B(b);
      mpz_gcd(g.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
      if (g != 1) continue;
      Integer quad = A * A + 11 * A * B - B * B;
      for (const auto& [p, e] : nt::factor(quad).factors) {
        if (p < 7) continue;
        wst::Invariants inv =
            wst::invariants(fam::build_curve(P(Torsion::C5, a, b)));
        Integer c4(mpq_numref(inv.c4.get_mpq_t()));
        Integer c6(mpq_numref(inv.c6.get_mpq_t()));
        Integer lhs = (-c4 * c6) % p;
        Integer A4 = A * A * A * A, B4 = B * B * B * B;
        Integer rhs = (-5 * A4 * B4 * (A * A + B * B)) % p;
        CHECK(((lhs - rhs) % p) == 0);
      }
    }
  }

  // C9 cubic-divisor rows: -c4 c6 = -243 (ab(a-b))^10 mod p
  {
    fam::FamilyParams params = P(Torsion::C9, 2, 1);
    Integer cubic = Integer(8) + 12 - 12 + 1;  // a^3+3a^2b-6ab^2+b^3 at (2,1)
    CHECK(cubic == 9);
    // use (3,1): 27+27-18+1 = 37
    params = P(Torsion::C9, 3, 1);
    Integer p37 = 37;
    wst::Invariants inv = wst::invariants(fam::build_curve(params));
    Integer c4(mpq_numref(inv.c4.get_mpq_t()));
    Integer c6(mpq_numref(inv.c6.get_mpq_t()));
    Integer prod = Integer(3) * 1 * 2;  // ab(a-b)
    Integer rhs;
    mpz_pow_ui(rhs.get_mpz_t(), prod.get_mpz_t(), 10);
    rhs = -243 * rhs;
    CHECK(((-c4 * c6 - rhs) % p37) == 0);
    CHECK(classify::split_by_c4c6(params, p37) ==
          (nt::legendre(rhs, p37) == 1));
  }
}

TEST_CASE("conductor_exponent recomputation") {
  using namespace classify;
  CHECK(conductor_exponent(UnramifiedPrincipalSeries{}) == 0);
  CHECK(conductor_exponent(RamifiedPrincipalSeries{1, 3}) == 2);
  CHECK(conductor_exponent(RamifiedPrincipalSeries{2, 6}) == 4);
  CHECK(conductor_exponent(Steinberg{}) == 1);
  nt::SquareClass dummy = nt::square_class(Integer(5), Integer(2));
  CHECK(conductor_exponent(TwistedSteinberg{dummy, 0}) == 1);
  CHECK(conductor_exponent(TwistedSteinberg{dummy, 1}) == 2);
  CHECK(conductor_exponent(DihedralSupercuspidal{false, {}, 1, 3}) == 2);
  CHECK(conductor_exponent(DihedralSupercuspidal{true, {}, 2, 6}) == 3);
  CHECK(conductor_exponent(DihedralSupercuspidal{true, {}, 4, 6}) == 5);
}

TEST_CASE("classify_rep: pinned descriptors") {
  classify::LocalRepDescriptor st =
      classify::classify_rep(P(Torsion::C5, 1, 1), 11);
  CHECK(std::holds_alternative<classify::Steinberg>(st.kind));
  CHECK(st.f == 1);

  classify::LocalRepDescriptor sc5 =
      classify::classify_rep(P(Torsion::C5, 2, 1), 5);
  auto* sc = std::get_if<classify::DihedralSupercuspidal>(&sc5.kind);
  REQUIRE(sc != nullptr);
  CHECK_FALSE(sc->field_ramified);
  CHECK(sc->a_xi == 1);
  CHECK(sc->ord_xi == 6);
  CHECK(sc5.f == 2);
  CHECK(sc5.rule_id == "C5.a1");

  classify::LocalRepDescriptor c30 =
      classify::classify_rep(P(Torsion::C3_0, 1, 0), 3);
  auto* sc3 = std::get_if<classify::DihedralSupercuspidal>(&c30.kind);
  REQUIRE(sc3 != nullptr);
  CHECK(sc3->field_ramified);
  CHECK(sc3->a_xi == 2);
  CHECK(sc3->ord_xi == 6);
  CHECK(c30.f == 3);

  classify::LocalRepDescriptor good =
      classify::classify_rep(P(Torsion::C5, 1, 1), 7);
  CHECK(std::holds_alternative<classify::UnramifiedPrincipalSeries>(good.kind));
  CHECK(good.f == 0);

  classify::LocalRepDescriptor tw =
      classify::classify_rep(P(Torsion::C3, 1, 1), 2);
  auto* tws = std::get_if<classify::TwistedSteinberg>(&tw.kind);
  REQUIRE(tws != nullptr);
  CHECK(tws->a_twist == 0);
  CHECK(nt::is_unramified_quadratic(tws->twist));
  CHECK(tw.f == 1);
}

TEST_CASE("classify_rep: uncovered corner is reported, not guessed") {
  // v_3(a) = 0 mod 3 with v_3(a - 27b) = 4 has no representation row
  CHECK_THROWS_AS(classify::classify_rep(P(Torsion::C3, 108, 1), 3),
                  classify::ClassificationError);
}

TEST_CASE("global_rep: pinned reports") {
  classify::GlobalRepReport r5 = classify::global_rep(P(Torsion::C5, 1, 1));
  CHECK(r5.conductor == 11);
  REQUIRE(r5.locals.size() == 1);
  CHECK(std::holds_alternative<classify::Steinberg>(r5.locals.at(11).kind));
  CHECK(r5.infinity_label == std::string(classify::kInfinityLabel));

  classify::GlobalRepReport r30 = classify::global_rep(P(Torsion::C3_0, 1, 0));
  CHECK(r30.conductor == 27);
  REQUIRE(r30.locals.size() == 1);

  classify::GlobalRepReport r3 = classify::global_rep(P(Torsion::C3, 1, 1));
  CHECK(r3.conductor == 26);
  REQUIRE(r3.locals.size() == 2);
  CHECK(std::holds_alternative<classify::TwistedSteinberg>(r3.locals.at(2).kind));
  CHECK(std::holds_alternative<classify::Steinberg>(r3.locals.at(13).kind));
}

TEST_CASE("deep 3-adic rows for C3 at larger parameters") {
  struct Row {
    long a, b;
    const char* rule;
    unsigned long f;
  } rows[] = {
      {54, 1, "C3.a4", 2},    // mod-9 condition lands on the unramified case
      {270, 1, "C3.a5", 3},   // v_3(a - 27b) = 5
      {756, 1, "C3.a9", 2},   // v_3(a - 27b) = 6
      {2214, 1, "C3.a10", 2}, // v_3(a - 27b) = 7
      {81, 1, "C3.a11", 5},   // v_3(a) = 4
      {243, 1, "C3.a11", 5},  // v_3(a) = 5
      {9, 1, "C3.a8", 4},     // v_3(a) = 2, ab = 9 mod 27
      {18, 1, "C3.a7", 4},    // v_3(a) = 2, ab = 18 mod 27
      {3, 1, "C3.a6", 3},     // v_3(a) = 1
  };
  for (const auto& row : rows) {
    classify::LocalRepDescriptor d =
        classify::classify_rep(P(Torsion::C3, row.a, row.b), 3);
    CHECK(d.rule_id == row.rule);
    CHECK(d.f == row.f);
    // the oracle agrees on the conductor exponent
    tate::LocalReductionData o =
        tate::tate(fam::build_curve(P(Torsion::C3, row.a, row.b)), 3);
    CHECK(o.f == row.f);
  }
}

TEST_CASE("rule inventory: ids unique, referenced rules exist") {
  std::set<std::string> ids;
  for (const auto& r : classify::rule_inventory()) {
    CHECK(ids.insert(r.id).second);
    CHECK_FALSE(r.table.empty());
    CHECK_FALSE(r.condition.empty());
  }
  CHECK(ids.size() > 60);
  CHECK(ids.count("C5.t2S") == 1);
  CHECK(ids.count("C3.good") == 1);

  std::string md = classify::traceability_markdown();
  CHECK(md.find("## mult-type") != std::string::npos);
  CHECK(md.find("C12.t5") != std::string::npos);

  auto exp = classify::expected_kodaira("C3.a3");
  REQUIRE(exp.size() == 1);
  CHECK(exp[0] == "II");
  auto exp2 = classify::expected_kodaira("C3.a1");
  REQUIRE(exp2.size() == 2);
  CHECK(exp2[1] == "IV*");
}

TEST_CASE("verify_instance is clean on a spread of members") {
  struct Probe {
    Torsion T;
    long a, b;
  } probes[] = {
      {Torsion::C3, 5, 3},    {Torsion::C3_0, 6, 0},  {Torsion::C5, 7, 3},
      {Torsion::C6, 7, 1},    {Torsion::C7, 3, 2},    {Torsion::C9, 4, 3},
      {Torsion::C10, 5, 2},   {Torsion::C12, 5, 2},   {Torsion::C2xC6, 3, 7},
      {Torsion::C2xC6, -1, 1},
  };
  for (const auto& probe : probes) {
    sweep::InstanceResult r =
        sweep::verify_instance(P(probe.T, probe.a, probe.b));
    CHECK(r.discrepancies.empty());
    CHECK_FALSE(r.incomplete_cofactor.has_value());
  }
}
