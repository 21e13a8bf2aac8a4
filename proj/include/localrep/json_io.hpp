#pragma once

#include <json.hpp>

#include "localrep/sweep.hpp"

namespace localrep::json_io {

using nlohmann::json;

// Integers render as JSON numbers inside the 53-bit safe range and as
// decimal strings beyond it, so any consumer reads them losslessly.
json integer_json(const Integer& n);

// Full per-curve report: parameters, minimal discriminant, conductor, and
// one entry per bad prime merging the reduction data with the
// representation descriptor.  Cross-checked against the oracle before
// rendering; throws classify::ClassificationError on any mismatch.
json classify_json(const families::FamilyParams& params);

std::string classify_text(const families::FamilyParams& params);

// Reduction data of an explicit integral model, at one prime or at all bad
// primes.
json tate_json(const weierstrass::Model& m, const std::optional<Integer>& p);

json sweep_report_json(const sweep::SweepReport& report);

std::string sweep_report_text(const sweep::SweepReport& report);

// Serialize with sorted keys and no whitespace variation: byte-identical
// output for identical inputs.
std::string dump(const json& j);

}  // namespace localrep::json_io
