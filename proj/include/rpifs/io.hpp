#pragma once

#include <string>

#include "json.hpp"

#include "rpifs/quant.hpp"
#include "rpifs/system.hpp"

namespace rpifs {

/// JSON pair [h0, h1] in normalized form; infinity is [1, 0].
void to_json(nlohmann::json& j, const ProjPoint& p);
ProjPoint proj_point_from_json(const nlohmann::json& j);

/// Sorted chart coordinates.
nlohmann::json quantizer_to_json(const Quantizer& q);

/// {lo, hi, lower, upper, depth} bracket report for an interval mass.
nlohmann::json cone_mass_report(const Cone& c, double lower, double upper, int depth);

inline constexpr const char* kToolVersion = "0.1.0";

/// Spec JSON schema:
/// {"matrices": [[[a11,a12],[a21,a22]], ...], "probs": [p1, ...] (optional)}
RPIFSSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const RPIFSSpec& spec);

RPIFSSpec load_spec(const std::string& path);

/// FNV-1a hash of the canonical spec serialization, hex-encoded; identifies
/// the input system in every emitted artifact.
std::string spec_hash(const RPIFSSpec& spec);

/// Round-trip-faithful decimal rendering (17 significant digits).
std::string format_double(double v);

}  // namespace rpifs
