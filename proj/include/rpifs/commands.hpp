#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace rpifs {

/// Parameters shared by the CLI subcommands. An empty spec_path selects the
/// bundled projective Cantor system; an empty output_path writes to stdout.
struct RunConfig {
    std::string spec_path;
    std::string output_path;
    int depth = 12;
    int n_min = 1;
    int n_max = 8;
    double r = 2.0;
    double tol = 1e-6;
    uint64_t seed = 1;
    int samples = 100000;
    double base_lo = -1.0;
    double base_hi = 1.0;
    int oracle_depth = 14;
};

// Each command writes its artifact (JSON or CSV with a metadata header)
// and returns a process exit code: 0 success, nonzero for failed checks.
// Precondition violations propagate as exceptions; the CLI front-end maps
// them to exit codes 2 (domain/geometry/unsupported) and 3 (resource).

int cmd_dimension(const RunConfig& cfg);
int cmd_attractor(const RunConfig& cfg);
int cmd_sample(const RunConfig& cfg);
int cmd_quantize(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

/// The dimension report as JSON, for in-process use by tests.
nlohmann::json dimension_report(const RunConfig& cfg);
nlohmann::json verify_report(const RunConfig& cfg);

}  // namespace rpifs
