#include "localrep/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace localrep::sweep {

namespace fam = ::localrep::families;
namespace wst = ::localrep::weierstrass;

namespace {

std::string kodaira_name(const tate::KodairaType& k) { return k.str(); }

bool kodaira_matches_pattern(const tate::KodairaType& k,
                             const std::string& pattern) {
  using Kind = tate::KodairaType::Kind;
  if (pattern == "In") return k.kind == Kind::In;
  if (pattern == "In*") return k.kind == Kind::Instar;
  return k.str() == pattern;
}

struct Checker {
  const FamilyParams& P;
  InstanceResult& out;

  void fail(const Integer& p, const std::string& aspect,
            const std::string& table, const std::string& oracle,
            const std::string& rule = "") {
    out.discrepancies.push_back({P.T, P.a, P.b, p, aspect, table, oracle, rule});
  }
};

}  // namespace

InstanceResult verify_instance(const FamilyParams& params) {
  InstanceResult result;
  Checker chk{params, result};

  wst::Model curve = fam::build_curve(params);
  fam::MinimalDiscriminant md;
  try {
    md = fam::minimal_discriminant(params);
  } catch (const std::exception& e) {
    chk.fail(0, "minimal-discriminant", "Delta_T = gamma / u^12", e.what());
    return result;
  }

  // gamma = disc(E_T) is asserted inside minimal_discriminant; here we pin
  // the per-prime minimal valuations against the oracle.
  nt::PrimeFactorization gamma_fact;
  try {
    gamma_fact = nt::factor(md.gamma);
  } catch (const nt::IncompleteFactorizationError& e) {
    result.incomplete_cofactor = e.cofactor();
    return result;
  }

  std::vector<classify::MultMatch> mult;
  try {
    mult = classify::mult_primes(params);
  } catch (const std::exception& e) {
    chk.fail(0, "mult-primes", "Lemma conditions", e.what());
    return result;
  }

  Integer conductor_from_tables = 1;
  for (const auto& [p, ignored] : gamma_fact.factors) {
    tate::LocalReductionData oracle = tate::tate(curve, p);

    // minimal discriminant identity, valuation by valuation
    {
      auto mm = tate::minimal_model_at(curve, p);
      wst::Invariants inv = wst::invariants(mm.model);
      Integer dmin(mpq_numref(inv.disc.get_mpq_t()));
      long table_v = static_cast<long>(nt::vp(md.gamma, p)) -
                     12 * static_cast<long>(md.u == 1 ? 0 : nt::vp(md.u, p));
      long oracle_v = static_cast<long>(nt::vp(dmin, p));
      if (table_v != oracle_v)
        chk.fail(p, "minimal-valuation", std::to_string(table_v),
                 std::to_string(oracle_v));
    }

    bool table_mult = std::any_of(mult.begin(), mult.end(),
                                  [&](const auto& m) { return m.p == p; });
    if (table_mult != oracle.kodaira.multiplicative()) {
      chk.fail(p, "mult-membership",
               table_mult ? "multiplicative" : "not multiplicative",
               kodaira_name(oracle.kodaira));
      continue;
    }

    if (table_mult) {
      classify::MultTypeResult mt;
      try {
        mt = classify::mult_type(params, p);
      } catch (const classify::ClassificationError& e) {
        chk.fail(p, "mult-type", "unique row", e.what());
        continue;
      }
      if (mt.n != oracle.n)
        chk.fail(p, "index-n", std::to_string(mt.n), std::to_string(oracle.n),
                 mt.rule_id);
      if (!oracle.split || mt.split != *oracle.split)
        chk.fail(p, "split-flag", mt.split ? "split" : "non-split",
                 oracle.split ? (*oracle.split ? "split" : "non-split") : "?",
                 mt.rule_id);
      if (nt::vp(md.delta, p) != mt.n)
        chk.fail(p, "n-vs-delta", std::to_string(mt.n),
                 std::to_string(nt::vp(md.delta, p)), mt.rule_id);
      if (p >= 5) {
        bool legendre_split = classify::split_by_c4c6(params, p);
        if (legendre_split != mt.split)
          chk.fail(p, "split-c4c6", mt.split ? "split" : "non-split",
                   legendre_split ? "split" : "non-split", mt.rule_id);
      }
      if (mt.witness_model) {
        wst::Model F = fam::f_model(params, *mt.witness_model);
        if (!wst::is_integral(F)) {
          chk.fail(p, "f-model-integrality", "integral",
                   "non-integral F model", mt.rule_id);
        } else {
          wst::Invariants finv = wst::invariants(F);
          Integer fd(mpq_numref(finv.disc.get_mpq_t()));
          if (nt::vp(fd, p) != oracle.n)
            chk.fail(p, "f-model-minimality", std::to_string(nt::vp(fd, p)),
                     std::to_string(oracle.n), mt.rule_id);
        }
      }
    }

    classify::LocalRepDescriptor rep;
    try {
      rep = classify::classify_rep(params, p);
    } catch (const classify::ClassificationError& e) {
      chk.fail(p, "rep-row", "unique row", e.what());
      continue;
    }

    if (rep.f != oracle.f)
      chk.fail(p, "conductor-exponent", std::to_string(rep.f),
               std::to_string(oracle.f), rep.rule_id);

    // kind <-> reduction consistency
    {
      const bool is_st = std::holds_alternative<classify::Steinberg>(rep.kind);
      const auto* tw = std::get_if<classify::TwistedSteinberg>(&rep.kind);
      std::string kind = classify::kind_name(rep.kind);
      if (oracle.kodaira.good()) {
        if (!std::holds_alternative<classify::UnramifiedPrincipalSeries>(
                rep.kind))
          chk.fail(p, "kind-good", kind, "I0", rep.rule_id);
      } else if (oracle.kodaira.multiplicative()) {
        if (*oracle.split) {
          if (!is_st) chk.fail(p, "kind-split", kind, "In split", rep.rule_id);
        } else if (!tw || tw->a_twist != 0 ||
                   !nt::is_unramified_quadratic(tw->twist)) {
          chk.fail(p, "kind-nonsplit", kind, "In non-split", rep.rule_id);
        }
      } else {
        if (is_st ||
            std::holds_alternative<classify::UnramifiedPrincipalSeries>(
                rep.kind) ||
            (tw && tw->a_twist == 0))
          chk.fail(p, "kind-additive", kind, kodaira_name(oracle.kodaira),
                   rep.rule_id);
        if (tw && tw->a_twist == 1 && nt::is_unramified_quadratic(tw->twist))
          chk.fail(p, "twist-ramification", "ramified twist",
                   "unramified gamma class", rep.rule_id);
        // conductor-2 instances at p = 2 must land on the unramified
        // supercuspidal with a(xi) = 1
        if (p == 2 && oracle.f == 2) {
          const auto* sc =
              std::get_if<classify::DihedralSupercuspidal>(&rep.kind);
          if (!sc || sc->field_ramified || sc->a_xi != 1)
            chk.fail(p, "conductor-2-rep", kind,
                     "dihedral supercuspidal, unramified, a(xi) = 1",
                     rep.rule_id);
        }
        std::vector<std::string> expect = classify::expected_kodaira(rep.rule_id);
        if (!expect.empty()) {
          bool ok = std::any_of(expect.begin(), expect.end(),
                                [&](const std::string& pat) {
                                  return kodaira_matches_pattern(oracle.kodaira,
                                                                 pat);
                                });
          if (!ok) {
            std::string joined;
            for (const auto& s : expect)
              joined += (joined.empty() ? "" : "|") + s;
            chk.fail(p, "kodaira-expected", joined,
                     kodaira_name(oracle.kodaira), rep.rule_id);
          }
        }
      }
    }

    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), rep.f);
    conductor_from_tables *= pe;
  }

  try {
    Integer oracle_cond = tate::global_conductor(curve);
    if (oracle_cond != conductor_from_tables)
      chk.fail(0, "global-conductor", conductor_from_tables.get_str(),
               oracle_cond.get_str());
  } catch (const nt::IncompleteFactorizationError& e) {
    result.incomplete_cofactor = e.cofactor();
  }

  return result;
}

SweepReport run_sweep(const std::vector<Torsion>& which, long bound,
                      unsigned jobs) {
  SweepReport report;
  report.bound = bound;
  report.families = which;

  std::vector<FamilyParams> instances;
  for (Torsion T : which) {
    std::vector<FamilyParams> fam_instances = fam::enumerate_family(T, bound);
    instances.insert(instances.end(), fam_instances.begin(),
                     fam_instances.end());
  }
  report.instances = instances.size();

  std::vector<InstanceResult> results(instances.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < instances.size(); ++i)
      results[i] = verify_instance(instances[i]);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= instances.size()) return;
        results[i] = verify_instance(instances[i]);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (size_t i = 0; i < instances.size(); ++i) {
    const auto& r = results[i];
    report.discrepancies.insert(report.discrepancies.end(),
                                r.discrepancies.begin(), r.discrepancies.end());
    if (r.incomplete_cofactor)
      report.incomplete.push_back({instances[i].T, instances[i].a,
                                   instances[i].b, *r.incomplete_cofactor});
  }
  return report;
}

}  // namespace localrep::sweep
