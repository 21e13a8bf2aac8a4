#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localrep/classify.hpp"

namespace localrep::sweep {

using families::FamilyParams;
using families::Torsion;

struct Discrepancy {
  Torsion T;
  Integer a, b, p;
  std::string aspect;         // which comparison failed
  std::string table_verdict;  // what the condition tables say
  std::string oracle_verdict; // what Tate's algorithm says
  std::string rule_id;
};

struct InstanceResult {
  std::vector<Discrepancy> discrepancies;
  std::optional<Integer> incomplete_cofactor;
};

// Runs every table-vs-oracle comparison for one family member: minimal
// discriminant valuations, multiplicative membership, I_n index and split
// flag, conductor exponents, representation-kind/reduction-type consistency,
// the (-c4c6/p) split criterion at p >= 5, auxiliary-model integrality and
// minimality, and the assembled conductor.
InstanceResult verify_instance(const FamilyParams& params);

struct SweepReport {
  long bound = 0;
  std::vector<Torsion> families;
  unsigned long instances = 0;
  std::vector<Discrepancy> discrepancies;
  struct Incomplete {
    Torsion T;
    Integer a, b, cofactor;
  };
  std::vector<Incomplete> incomplete;
};

// Deterministic regardless of `jobs`: instances are enumerated in a fixed
// order and results merged back in that order.
SweepReport run_sweep(const std::vector<Torsion>& which, long bound,
                      unsigned jobs = 1);

}  // namespace localrep::sweep
