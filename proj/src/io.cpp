#include "rpifs/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rpifs {

void to_json(nlohmann::json& j, const ProjPoint& p) {
    j = nlohmann::json::array({p.h0(), p.h1()});
}

ProjPoint proj_point_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw DomainError("ProjPoint JSON: expected a pair [h0, h1]");
    return ProjPoint::normalize(j[0].get<double>(), j[1].get<double>());
}

nlohmann::json quantizer_to_json(const Quantizer& q) {
    return nlohmann::json(q.sites());
}

nlohmann::json cone_mass_report(const Cone& c, double lower, double upper, int depth) {
    return {{"lo", c.lo().x()}, {"hi", c.hi().x()}, {"lower", lower}, {"upper", upper},
            {"depth", depth}};
}

RPIFSSpec spec_from_json(const nlohmann::json& j) {
    if (!j.contains("matrices") || !j["matrices"].is_array())
        throw DomainError("spec JSON: missing \"matrices\" array");
    RPIFSSpec spec;
    for (const auto& jm : j["matrices"]) {
        if (!jm.is_array() || jm.size() != 2 || jm[0].size() != 2 || jm[1].size() != 2)
            throw DomainError("spec JSON: each matrix must be a 2x2 array of rows");
        spec.mats.push_back({jm[0][0].get<double>(), jm[0][1].get<double>(),
                             jm[1][0].get<double>(), jm[1][1].get<double>()});
    }
    if (j.contains("probs")) spec.probs = j["probs"].get<std::vector<double>>();
    spec.validate();
    return spec;
}

nlohmann::json spec_to_json(const RPIFSSpec& spec) {
    nlohmann::json j;
    j["matrices"] = nlohmann::json::array();
    for (const Mat2& m : spec.mats)
        j["matrices"].push_back({{m.a11, m.a12}, {m.a21, m.a22}});
    if (spec.probs) j["probs"] = *spec.probs;
    return j;
}

RPIFSSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open spec file: " + path);
    nlohmann::json j;
    in >> j;
    return spec_from_json(j);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string spec_hash(const RPIFSSpec& spec) {
    std::ostringstream canonical;
    for (const Mat2& m : spec.mats)
        canonical << format_double(m.a11) << ',' << format_double(m.a12) << ','
                  << format_double(m.a21) << ',' << format_double(m.a22) << ';';
    if (spec.probs)
        for (double p : *spec.probs) canonical << format_double(p) << ',';

    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : canonical.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace rpifs
