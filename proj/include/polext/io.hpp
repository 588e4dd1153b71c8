#pragma once

// JSON documents for systems, extrema sets and certification reports.
//
//   system:  { "dim", "label", "vectors": [[...]], "normalize" }
//   extrema: { "system", "points": [{ "u", "pattern", "P", "S", "mu",
//              "residual", "newton_iters" }], "expected_count", "complete" }
//
// Doubles are written in shortest round-trip form, so load(write(x)) == x.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "polext/certify.hpp"
#include "polext/extrema.hpp"
#include "polext/systems.hpp"

namespace polext::io {

using json = nlohmann::ordered_json;

json system_to_json(const systems::VectorSystem& sys);
/// With "normalize": true vectors are scaled to unit length; otherwise a
/// non-unit vector is a LoadError.
systems::VectorSystem system_from_json(const json& doc);

json extrema_to_json(const extrema::ExtremaSet& es);
extrema::ExtremaSet extrema_from_json(const json& doc);

json report_to_json(const certify::CertificationReport& rep);

std::string dump(const json& doc);
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace polext::io
