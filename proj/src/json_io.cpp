#include "localrep/json_io.hpp"

#include <sstream>

namespace localrep::json_io {

namespace fam = ::localrep::families;
namespace wst = ::localrep::weierstrass;

namespace {

const Integer kSafeMax = (Integer(1) << 53) - 1;

json representation_json(const classify::LocalRepDescriptor& rep) {
  json j;
  j["kind"] = classify::kind_name(rep.kind);
  if (const auto* ps = std::get_if<classify::RamifiedPrincipalSeries>(&rep.kind)) {
    j["a_chi"] = ps->a_chi;
    j["ord_chi"] = ps->ord_chi;
  } else if (const auto* tw = std::get_if<classify::TwistedSteinberg>(&rep.kind)) {
    j["twist_unramified"] = tw->a_twist == 0;
  } else if (const auto* sc =
                 std::get_if<classify::DihedralSupercuspidal>(&rep.kind)) {
    j["field"] = sc->field_ramified ? "ramified" : "unramified";
    j["a_xi"] = sc->a_xi;
    j["ord_xi"] = sc->ord_xi;
  }
  j["rule"] = rep.rule_id;
  return j;
}

json local_json(const tate::LocalReductionData& oracle,
                const classify::LocalRepDescriptor& rep) {
  json j;
  j["p"] = integer_json(oracle.p);
  j["kodaira"] = oracle.kodaira.str();
  j["f_p"] = oracle.f;
  if (oracle.kodaira.multiplicative() || oracle.kodaira.kind ==
                                             tate::KodairaType::Kind::Instar)
    j["n"] = oracle.n;
  if (oracle.split) j["split"] = *oracle.split;
  j["representation"] = representation_json(rep);
  return j;
}

json local_reduction_json(const tate::LocalReductionData& d) {
  json j;
  j["p"] = integer_json(d.p);
  j["kodaira"] = d.kodaira.str();
  j["f_p"] = d.f;
  if (d.kodaira.multiplicative() ||
      d.kodaira.kind == tate::KodairaType::Kind::Instar)
    j["n"] = d.n;
  if (d.split) j["split"] = *d.split;
  return j;
}

json discrepancy_json(const sweep::Discrepancy& d) {
  json j;
  j["torsion"] = fam::to_string(d.T);
  j["a"] = integer_json(d.a);
  j["b"] = integer_json(d.b);
  j["p"] = integer_json(d.p);
  j["aspect"] = d.aspect;
  j["table_verdict"] = d.table_verdict;
  j["oracle_verdict"] = d.oracle_verdict;
  if (!d.rule_id.empty()) j["rule"] = d.rule_id;
  return j;
}

}  // namespace

json integer_json(const Integer& n) {
  if (n <= kSafeMax && n >= -kSafeMax) {
    return json(n.get_si());
  }
  return json(n.get_str());
}

std::string dump(const json& j) { return j.dump(); }

json classify_json(const fam::FamilyParams& params) {
  classify::GlobalRepReport rep = classify::global_rep(params);
  fam::MinimalDiscriminant md = fam::minimal_discriminant(params);
  wst::Model curve = fam::build_curve(params);

  json j;
  j["torsion"] = fam::to_string(params.T);
  j["a"] = integer_json(params.a);
  if (params.T != fam::Torsion::C3_0) j["b"] = integer_json(params.b);
  if (params.cde) {
    j["c3_decomposition"] = {{"c", integer_json(params.cde->c)},
                             {"d", integer_json(params.cde->d)},
                             {"e", integer_json(params.cde->e)}};
  }
  j["minimal_discriminant"] = integer_json(md.delta);
  j["conductor"] = integer_json(rep.conductor);
  json locals = json::array();
  for (const auto& [p, local] : rep.locals) {
    tate::LocalReductionData oracle = tate::tate(curve, p);
    if (oracle.f != local.f)
      throw classify::ClassificationError(
          "conductor exponent mismatch while rendering p=" + p.get_str());
    locals.push_back(local_json(oracle, local));
  }
  j["locals"] = std::move(locals);
  j["infinity"] = classify::kInfinityLabel;
  return j;
}

std::string classify_text(const fam::FamilyParams& params) {
  json j = classify_json(params);
  std::ostringstream os;
  os << "curve   E_" << j["torsion"].get<std::string>() << "(a=" << j["a"];
  if (j.contains("b")) os << ", b=" << j["b"];
  os << ")\n";
  if (j.contains("c3_decomposition"))
    os << "a=c^3d^2e  c=" << j["c3_decomposition"]["c"]
       << " d=" << j["c3_decomposition"]["d"]
       << " e=" << j["c3_decomposition"]["e"] << "\n";
  os << "Delta_min  " << j["minimal_discriminant"] << "\n";
  os << "conductor  " << j["conductor"] << "\n";
  os << "pi_infinity  " << j["infinity"].get<std::string>() << "\n";
  os << "p      type   f  rep\n";
  for (const auto& loc : j["locals"]) {
    os << loc["p"] << "  " << loc["kodaira"].get<std::string>();
    if (loc.contains("split"))
      os << (loc["split"].get<bool>() ? " (split)" : " (non-split)");
    os << "  f=" << loc["f_p"] << "  "
       << loc["representation"]["kind"].get<std::string>();
    const auto& r = loc["representation"];
    if (r.contains("a_chi"))
      os << " a(chi)=" << r["a_chi"] << " ord=" << r["ord_chi"];
    if (r.contains("a_xi"))
      os << " " << r["field"].get<std::string>() << " a(xi)=" << r["a_xi"]
         << " ord=" << r["ord_xi"];
    if (r.contains("twist_unramified"))
      os << (r["twist_unramified"].get<bool>() ? " unramified twist"
                                               : " ramified twist");
    os << "\n";
  }
  return os.str();
}

json tate_json(const wst::Model& m, const std::optional<Integer>& p) {
  json j;
  json locals = json::array();
  if (p) {
    locals.push_back(local_reduction_json(tate::tate(m, *p)));
  } else {
    wst::Invariants inv = wst::invariants(m);
    Integer disc(mpq_numref(inv.disc.get_mpq_t()));
    nt::PrimeFactorization pf = nt::factor(disc);
    for (const auto& [q, ignored] : pf.factors) {
      tate::LocalReductionData d = tate::tate(m, q);
      if (d.kodaira.good()) continue;
      locals.push_back(local_reduction_json(d));
    }
    j["conductor"] = integer_json(tate::global_conductor(m));
  }
  j["locals"] = std::move(locals);
  return j;
}

json sweep_report_json(const sweep::SweepReport& report) {
  json j;
  j["bound"] = report.bound;
  json fams = json::array();
  for (auto T : report.families) fams.push_back(fam::to_string(T));
  j["families"] = std::move(fams);
  j["instances_checked"] = report.instances;
  json ds = json::array();
  for (const auto& d : report.discrepancies) ds.push_back(discrepancy_json(d));
  j["discrepancies"] = std::move(ds);
  json inc = json::array();
  for (const auto& i : report.incomplete) {
    inc.push_back({{"torsion", fam::to_string(i.T)},
                   {"a", integer_json(i.a)},
                   {"b", integer_json(i.b)},
                   {"cofactor", integer_json(i.cofactor)}});
  }
  j["incomplete_factorizations"] = std::move(inc);
  return j;
}

std::string sweep_report_text(const sweep::SweepReport& report) {
  std::ostringstream os;
  os << "sweep bound " << report.bound << ", " << report.instances
     << " instances, " << report.discrepancies.size() << " discrepancies, "
     << report.incomplete.size() << " incomplete factorizations\n";
  for (const auto& d : report.discrepancies) {
    os << "  " << fam::to_string(d.T) << "(a=" << d.a << ", b=" << d.b
       << ") p=" << d.p << " " << d.aspect << ": tables say "
       << d.table_verdict << ", oracle says " << d.oracle_verdict;
    if (!d.rule_id.empty()) os << " [" << d.rule_id << "]";
    os << "\n";
  }
  return os.str();
}

}  // namespace localrep::json_io
