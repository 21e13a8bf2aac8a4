#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "localrep/families.hpp"
#include "localrep/tate.hpp"

namespace localrep::classify {

using families::FamilyParams;
using families::Torsion;

// Raised when no rule matches or several do.  The condition tables are
// supposed to partition every case; a violation is reported with full
// context instead of being tie-broken silently.
class ClassificationError : public std::runtime_error {
 public:
  explicit ClassificationError(const std::string& what)
      : std::runtime_error(what) {}
};

// ---- multiplicative reduction -------------------------------------------

struct MultMatch {
  Integer p;
  std::string rule_id;
};

// Primes at which E_T has multiplicative reduction, with every matching
// detection-rule id.  Empty for C3_0 (additive everywhere bad).
std::vector<MultMatch> mult_primes(const FamilyParams& params);

struct MultTypeResult {
  Integer p;
  unsigned long n = 0;
  bool split = false;
  std::string rule_id;
  std::optional<int> witness_model;  // j of the F_{T,j} the row is tied to
};

MultTypeResult mult_type(const FamilyParams& params, const Integer& p);

// Split test via the Legendre criterion (-c4 c6 / p) = 1, for p >= 5 with
// multiplicative reduction.  -c4 c6 changes by u^10 between models, so the
// verdict is model independent.
bool split_by_c4c6(const FamilyParams& params, const Integer& p);

// ---- local representation descriptors ------------------------------------

struct UnramifiedPrincipalSeries {
  bool operator==(const UnramifiedPrincipalSeries&) const = default;
};
struct RamifiedPrincipalSeries {
  unsigned a_chi = 1;    // conductor of chi
  unsigned ord_chi = 1;  // order of chi restricted to Z_p^x
  bool operator==(const RamifiedPrincipalSeries&) const = default;
};
struct Steinberg {
  bool operator==(const Steinberg&) const = default;
};
struct TwistedSteinberg {
  nt::SquareClass twist;  // the quadratic twist class (gamma invariant)
  unsigned a_twist = 0;   // conductor of the twist character: 0 or 1 here
  bool operator==(const TwistedSteinberg&) const = default;
};
struct DihedralSupercuspidal {
  bool field_ramified = false;
  std::optional<nt::SquareClass> field_disc;  // class cutting out F, when named
  unsigned a_xi = 1;
  unsigned ord_xi = 1;
  bool operator==(const DihedralSupercuspidal&) const = default;
};

using RepKind = std::variant<UnramifiedPrincipalSeries, RamifiedPrincipalSeries,
                             Steinberg, TwistedSteinberg, DihedralSupercuspidal>;

std::string kind_name(const RepKind& kind);

// Conductor exponent of the representation: 2 a(chi) for principal series,
// 1 / 2 a(chi) for unramified / ramified Steinberg twists, and
// f(F/Q_p) a(xi) + d(F/Q_p) for the dihedral supercuspidals (2 a(xi)
// unramified, 1 + a(xi) ramified).
unsigned long conductor_exponent(const RepKind& kind);

struct LocalRepDescriptor {
  Integer p;
  RepKind kind;
  unsigned long f = 0;
  std::string rule_id;
};

LocalRepDescriptor classify_rep(const FamilyParams& params, const Integer& p);

inline constexpr const char* kInfinityLabel =
    "holomorphic discrete series, weight 2";

struct GlobalRepReport {
  FamilyParams params;
  std::map<Integer, LocalRepDescriptor> locals;  // primes dividing Delta_T
  Integer conductor = 1;
  std::string infinity_label = kInfinityLabel;
};

// Classifies every bad prime and cross-checks the assembled conductor
// against the Tate-algorithm oracle.
GlobalRepReport global_rep(const FamilyParams& params);

// ---- rule traceability ----------------------------------------------------

struct RuleInfo {
  std::string id;
  std::string table;   // "mult-primes" / "mult-type" / "representation"
  std::string family;
  std::string primes;
  std::string condition;
  std::string output;
  std::string kodaira;  // expected reduction types, "" when unconstrained
};

const std::vector<RuleInfo>& rule_inventory();
std::string traceability_markdown();

// Expected Kodaira symbols for a rule ("In" / "In*" stand for any index);
// empty when the rule does not pin them.
std::vector<std::string> expected_kodaira(const std::string& rule_id);

}  // namespace localrep::classify
