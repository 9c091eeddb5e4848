#pragma once

// JSON and CSV forms of systems, measures, sets, certificates and reports.
// Rationals are always "p/q" strings; float columns carry a _float suffix.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "emergence/certificates.hpp"
#include "emergence/estimators.hpp"

namespace emergence::io {

using Json = nlohmann::ordered_json;

Json to_json(const SymbolicSystem& system);
// {"type": "full_shift", "alphabet": m, "lambda": "1/2"} or
// {"type": "subshift", "transitions": [[1,1],[1,0]], "lambda": "1/2"}.
SystemHandle system_from_json(const Json& doc);

Json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const SystemHandle& system, const Json& doc);

Json to_json(const FiniteClosedSet& set);
FiniteClosedSet set_from_json(const SystemHandle& system, const Json& doc);

Json to_json(const Certificate& cert);

// Structural problems throw FormatError. Content that cannot form a valid
// member (weights not summing to 1, inadmissible words) is kept as a defect so
// that verification can report it.
struct LoadedCertificate {
  Certificate cert;
  std::vector<std::string> defects;
};
LoadedCertificate certificate_from_json(const Json& doc);

Json to_json(const ScalingReport& report);
void write_csv(std::ostream& out, const ScalingReport& report);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

}  // namespace emergence::io
