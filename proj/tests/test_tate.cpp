#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "localrep/families.hpp"
#include "localrep/tate.hpp"

using namespace localrep;
namespace fam = localrep::families;
namespace wst = localrep::weierstrass;
using tate::KodairaType;
using Kind = tate::KodairaType::Kind;

namespace {

wst::Model model_i(long a1, long a2, long a3, long a4, long a6) {
  return wst::Model{Rational(a1), Rational(a2), Rational(a3), Rational(a4),
                    Rational(a6)};
}

Integer disc_of(const wst::Model& m) {
  return Integer(mpq_numref(wst::invariants(m).disc.get_mpq_t()));
}

std::mt19937_64& rng() {
  static std::mt19937_64 r(31);
  return r;
}

// u in {1, 1/2, 1/3} with integer r, s, t: always integrality-preserving.
wst::Transform random_worsening_change() {
  std::uniform_int_distribution<long> small(-8, 8);
  std::uniform_int_distribution<int> pick(0, 3);
  static const Rational us[] = {Rational(1), Rational(1), Rational(1, 2),
                                Rational(1, 3)};
  return wst::Transform{us[pick(rng())], Rational(small(rng())),
                        Rational(small(rng())), Rational(small(rng()))};
}

}  // namespace

TEST_CASE("pinned local data") {
  // 5-torsion member (1,1): good at 7, split I1 at 11
  wst::Model m5 = model_i(0, -1, -1, 0, 0);
  tate::LocalReductionData good = tate::tate(m5, 7);
  CHECK(good.kodaira == KodairaType{Kind::I0, 0});
  CHECK(good.f == 0);

  tate::LocalReductionData at11 = tate::tate(m5, 11);
  CHECK(at11.kodaira == KodairaType{Kind::In, 1});
  CHECK(at11.f == 1);
  CHECK(at11.n == 1);
  REQUIRE(at11.split.has_value());
  CHECK(*at11.split == true);

  // y^2 + y = x^3: type II at 3 with f = 3
  tate::LocalReductionData at3 = tate::tate(model_i(0, 0, 1, 0, 0), 3);
  CHECK(at3.kodaira == KodairaType{Kind::II, 0});
  CHECK(at3.f == 3);

  CHECK(tate::global_conductor(m5) == 11);
  CHECK(tate::global_conductor(model_i(0, 0, 1, 0, 0)) == 27);
  CHECK(tate::global_conductor(model_i(1, 0, 1, 0, 0)) == 26);  // 3-torsion (1,1)
}

TEST_CASE("singular and non-integral inputs are rejected") {
  CHECK_THROWS_AS(tate::tate(model_i(0, 0, 0, 0, 0), 2), std::invalid_argument);
  wst::Model frac = model_i(1, 1, 1, 1, 1);
  frac.a4 = Rational(1, 2);
  CHECK_THROWS_AS(tate::tate(frac, 2), std::invalid_argument);
  CHECK_THROWS_AS(tate::tate(model_i(0, -1, -1, 0, 0), 10),
                  std::invalid_argument);  // 10 is not prime
}

TEST_CASE("minimal_model_at") {
  wst::Model m5 = model_i(0, -1, -1, 0, 0);
  SUBCASE("already minimal: identity change") {
    auto mm = tate::minimal_model_at(m5, 11);
    CHECK(mm.model == m5);
    CHECK(mm.change.u == 1);
    CHECK(mm.change.r == 0);
  }
  SUBCASE("scaled input recovers the minimal valuation") {
    const Integer p = 5;
    wst::Model blown =
        wst::transform(m5, wst::Transform{Rational(1, 5), 0, 0, 0});
    CHECK(wst::is_integral(blown));
    CHECK(nt::vp(disc_of(blown), p) == 12);
    auto mm = tate::minimal_model_at(blown, p);
    CHECK(nt::vp(disc_of(mm.model), p) == 0);
    CHECK(wst::is_integral(mm.model));
    // the change witnesses the isomorphism
    CHECK(wst::transform(blown, mm.change) == mm.model);
  }
  SUBCASE("the 6-torsion member (7,1) drops v_2 by 12") {
    wst::Model raw =
        fam::build_curve(fam::validate_params(fam::Torsion::C6, 7, 1));
    CHECK(nt::vp(disc_of(raw), 2) == 13);
    auto mm = tate::minimal_model_at(raw, 2);
    CHECK(nt::vp(disc_of(mm.model), 2) == 1);
    CHECK(wst::transform(raw, mm.change) == mm.model);
  }
}

TEST_CASE("model independence under integrality-preserving changes") {
  std::vector<wst::Model> seeds = {
      model_i(0, -1, -1, 0, 0), model_i(0, 0, 1, 0, 0), model_i(1, 0, 1, 0, 0),
      fam::build_curve(fam::validate_params(fam::Torsion::C6, 7, 1)),
      fam::build_curve(fam::validate_params(fam::Torsion::C12, 3, 1)),
      fam::build_curve(fam::validate_params(fam::Torsion::C2xC6, 3, 7)),
      model_i(1, -1, 1, -14, 29), model_i(0, 0, 0, -7, 6),
      // deep wild branches at 2 and 3: In*, II*, III*, large f
      model_i(0, -3, 0, -12, -32), model_i(0, -3, 0, -1, -13),
      model_i(0, -3, 0, -13, -1), model_i(0, -3, 0, -5, -9),
      model_i(0, -3, 0, -15, -31), model_i(0, -3, 0, -16, -30),
      model_i(0, 0, 1, 15, -23), model_i(0, -3, 0, 3, -28),
      model_i(0, -3, 1, 3, 19)};
  const Integer primes[] = {2, 3, 5, 7, 11, 13};
  for (const wst::Model& m : seeds) {
    for (const Integer& p : primes) {
      tate::LocalReductionData base = tate::tate(m, p);
      for (int k = 0; k < 25; ++k) {
        wst::Model other = wst::transform(m, random_worsening_change());
        REQUIRE(wst::is_integral(other));
        tate::LocalReductionData again = tate::tate(other, p);
        CHECK(again.kodaira == base.kodaira);
        CHECK(again.f == base.f);
        CHECK(again.n == base.n);
        CHECK(again.split == base.split);
      }
    }
  }
}

TEST_CASE("split flag is invariant under translations") {
  std::uniform_int_distribution<long> small(-30, 30);
  wst::Model m5 = model_i(0, -1, -1, 0, 0);
  wst::Model m3 = model_i(1, 0, 1, 0, 0);
  struct Probe {
    wst::Model m;
    Integer p;
  } probes[] = {{m5, 11}, {m3, 2}, {m3, 13}};
  for (const auto& probe : probes) {
    auto base = tate::tate(probe.m, probe.p);
    REQUIRE(base.split.has_value());
    for (int k = 0; k < 200; ++k) {
      wst::Transform t{1, Rational(small(rng())), 0, Rational(small(rng()))};
      auto moved = tate::tate(wst::transform(probe.m, t), probe.p);
      CHECK(moved.split == base.split);
    }
  }
}

TEST_CASE("family sweep: structural invariants of the local data") {
  for (fam::Torsion T : fam::all_torsions()) {
    for (const auto& params : fam::enumerate_family(T, 5)) {
      wst::Model curve = fam::build_curve(params);
      CHECK(tate::global_conductor(curve) > 1);
      Integer gamma = fam::minimal_discriminant(params).gamma;
      for (const auto& [p, e] : nt::factor(gamma).factors) {
        tate::LocalReductionData d = tate::tate(curve, p);
        // conductor exponent ranges
        if (p >= 5) CHECK(d.f <= 2);
        if (p == 3) CHECK(d.f <= 5);
        if (p == 2) CHECK(d.f <= 8);
        // f = 0 iff good, f = 1 iff multiplicative, f >= 2 iff additive
        CHECK((d.f == 0) == d.kodaira.good());
        if (d.kodaira.multiplicative()) {
          CHECK(d.f == 1);
          REQUIRE(d.split.has_value());
          // Ogg: n = v_p of the minimal discriminant
          auto mm = tate::minimal_model_at(curve, p);
          CHECK(d.n == nt::vp(disc_of(mm.model), p));
        } else {
          CHECK_FALSE(d.split.has_value());
        }
        if (d.kodaira.additive()) CHECK(d.f >= 2);
        // naive taxonomy agrees on the minimal model
        auto mm = tate::minimal_model_at(curve, p);
        wst::ReductionKind kind = wst::naive_reduction(mm.model, p);
        if (d.kodaira.good()) CHECK(kind == wst::ReductionKind::Good);
        if (d.kodaira.multiplicative())
          CHECK(kind == wst::ReductionKind::Multiplicative);
        if (d.kodaira.additive()) CHECK(kind == wst::ReductionKind::Additive);
      }
    }
  }
}

namespace {

// Independent reference for p >= 5: on a p-minimal model the type is a
// function of (v(c4), v(Delta)) alone.
tate::KodairaType type_from_valuations(const wst::Model& m, const Integer& p) {
  wst::Invariants inv = wst::invariants(m);
  unsigned long vD = nt::vp_rational(inv.disc, p) >= 0
                         ? static_cast<unsigned long>(nt::vp_rational(inv.disc, p))
                         : 0;
  const unsigned long big = 1'000'000;
  unsigned long vc4 = inv.c4 == 0 ? big : nt::vp_rational(inv.c4, p);
  if (vD == 0) return {Kind::I0, 0};
  if (vc4 == 0) return {Kind::In, vD};
  switch (vD) {
    case 2: return {Kind::II, 0};
    case 3: return {Kind::III, 0};
    case 4: return {Kind::IV, 0};
    case 6: return {Kind::I0star, 0};
    case 8: return vc4 == 2 ? KodairaType{Kind::Instar, 2}
                            : KodairaType{Kind::IVstar, 0};
    case 9: return vc4 == 2 ? KodairaType{Kind::Instar, 3}
                            : KodairaType{Kind::IIIstar, 0};
    case 10: return vc4 == 2 ? KodairaType{Kind::Instar, 4}
                             : KodairaType{Kind::IIstar, 0};
    default:
      if (vD < 7) return {Kind::I0, 777};  // impossible; fail loudly
      return {Kind::Instar, vD - 6};       // 7, 11 and beyond
  }
}

}  // namespace

TEST_CASE("random curves at p >= 5 match the valuation classification") {
  std::uniform_int_distribution<long> dist(-40, 40);
  const Integer primes[] = {5, 7, 11, 13, 101};
  unsigned long additive_seen = 0;
  for (int i = 0; i < 4000; ++i) {
    wst::Model m = model_i(dist(rng()), dist(rng()), dist(rng()), dist(rng()),
                           dist(rng()));
    if (wst::invariants(m).disc == 0) continue;
    const Integer& p = primes[i % 5];
    auto mm = tate::minimal_model_at(m, p);
    tate::KodairaType expect = type_from_valuations(mm.model, p);
    tate::LocalReductionData got = tate::tate(m, p);
    CHECK(got.kodaira == expect);
    if (expect.additive()) {
      ++additive_seen;
      CHECK(got.f == 2);
    }
  }
  CHECK(additive_seen > 50);

  // force deeper additive branches: y^2 = x^3 + A p^2 x + B p^k
  std::uniform_int_distribution<long> unit(1, 30);
  for (int i = 0; i < 2000; ++i) {
    const Integer& p = primes[i % 5];
    Integer p2 = p * p;
    long k = 2 + (i % 9);
    Integer pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
    wst::Model m{0, 0, 0, Rational(Integer(unit(rng())) * p2),
                 Rational(Integer(unit(rng())) * pk)};
    if (wst::invariants(m).disc == 0) continue;
    auto mm = tate::minimal_model_at(m, p);
    CHECK(tate::tate(m, p).kodaira == type_from_valuations(mm.model, p));
  }
}

TEST_CASE("random models: conductor bounds and flag coherence at 2 and 3") {
  std::uniform_int_distribution<long> dist(-60, 60);
  const Integer primes[] = {2, 3};
  for (int i = 0; i < 3000; ++i) {
    wst::Model m = model_i(dist(rng()), dist(rng()), dist(rng()), dist(rng()),
                           dist(rng()));
    if (wst::invariants(m).disc == 0) continue;
    const Integer& p = primes[i % 2];
    tate::LocalReductionData d = tate::tate(m, p);
    CHECK(d.f <= (p == 2 ? 8 : 5));
    CHECK((d.f == 0) == d.kodaira.good());
    CHECK((d.f == 1) == d.kodaira.multiplicative());
    CHECK(d.split.has_value() == d.kodaira.multiplicative());
    if (d.kodaira.kind == Kind::In || d.kodaira.kind == Kind::Instar)
      CHECK(d.n >= 1);
    else
      CHECK(d.n == 0);
  }
}

TEST_CASE("quadratic twist structure at p = 3") {
  // E with split I_n at 3: the 3-torsion member (1,3) has I3 at 3
  wst::Model e = fam::build_curve(fam::validate_params(fam::Torsion::C3, 1, 3));
  tate::LocalReductionData base = tate::tate(e, 3);
  REQUIRE(base.kodaira.kind == Kind::In);
  REQUIRE(base.split.has_value());

  wst::Invariants inv = wst::invariants(e);
  Integer c4(mpq_numref(inv.c4.get_mpq_t()));
  Integer c6(mpq_numref(inv.c6.get_mpq_t()));
  auto twist = [&](long d) {
    // y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3
    return wst::Model{0, 0, 0, Rational(-27 * c4 * d * d),
                      Rational(-54 * c6 * d * d * d)};
  };

  // d = 1 is just an isomorphic model
  tate::LocalReductionData same = tate::tate(twist(1), 3);
  CHECK(same.kodaira == base.kodaira);
  CHECK(same.split == base.split);

  // twisting by a nonsquare unit flips the split flag, keeps I_n
  tate::LocalReductionData unit_twist = tate::tate(twist(-1), 3);
  CHECK(nt::legendre(-1, 3) == -1);
  CHECK(unit_twist.kodaira == base.kodaira);
  CHECK(unit_twist.f == 1);
  REQUIRE(unit_twist.split.has_value());
  CHECK(*unit_twist.split != *base.split);

  // twisting by the uniformizer turns I_n into I_n* with the same index
  tate::LocalReductionData ram_twist = tate::tate(twist(3), 3);
  CHECK(ram_twist.kodaira == KodairaType{Kind::Instar, base.n});
  CHECK(ram_twist.f == 2);
}

TEST_CASE("every additive branch at p = 5, types pinned by valuations") {
  // For p >= 5 the type of a minimal model is decided by (v(c4), v(Delta))
  // alone, so these expectations are derivable by hand:
  //   y^2 = x^3 + 5^k      has c4 = 0,      Delta = -432 * 5^(2k)
  //   y^2 = x^3 + 5^k x    has c4 = -48*5^k, Delta = -64 * 5^(3k)
  // and [0,0,0,75,125] is the quadratic twist by 5 of the 5-multiplicative
  // curve y^2 = x^3 + 3x + 1 (v_5(Delta) = 1), hence I1*.
  struct Row {
    wst::Model m;
    const char* type;
    unsigned long f;
  } rows[] = {
      {model_i(0, 0, 0, 0, 5), "II", 2},
      {model_i(0, 0, 0, 0, 25), "IV", 2},
      {model_i(0, 0, 0, 0, 125), "I0*", 2},
      {model_i(0, 0, 0, 0, 625), "IV*", 2},
      {model_i(0, 0, 0, 0, 3125), "II*", 2},
      {model_i(0, 0, 0, 5, 0), "III", 2},
      {model_i(0, 0, 0, 25, 0), "I0*", 2},
      {model_i(0, 0, 0, 125, 0), "III*", 2},
      {model_i(0, 0, 0, 75, 125), "I1*", 2},
  };
  for (const auto& row : rows) {
    tate::LocalReductionData d = tate::tate(row.m, 5);
    CHECK(d.kodaira.str() == row.type);
    CHECK(d.f == row.f);
  }
  // the twist partner really is 5-multiplicative
  tate::LocalReductionData base = tate::tate(model_i(0, 0, 0, 3, 1), 5);
  CHECK(base.kodaira == KodairaType{Kind::In, 1});

  // a non-minimal model of the II curve restarts with u = p and agrees
  wst::Model blown = wst::transform(model_i(0, 0, 0, 0, 5),
                                    wst::Transform{Rational(1, 5), 0, 0, 0});
  tate::LocalReductionData again = tate::tate(blown, 5);
  CHECK(again.kodaira.str() == "II");
  CHECK(again.f == 2);
}
