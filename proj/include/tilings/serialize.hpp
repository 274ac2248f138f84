#pragma once

// JSON import/export for substitution systems and the run manifest written
// next to every artifact-producing CLI command.
//
// Schema (tilings-system-v1):
//   { name, m, s, d, theta, driver: [[int]], digits: [[ [ [int;s] ] ]],
//     defaultShape: [[float]], labels: [str], prototiles: [[int,int]],
//     geomDigits?: like digits }
//
// Integers round-trip exactly; reals are printed with 17 significant digits,
// which is lossless for IEEE doubles.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tilings/errors.hpp"
#include "tilings/substitution.hpp"

namespace tilings {

inline constexpr const char* kSystemSchema = "tilings-system-v1";
inline constexpr const char* kToolVersion = "tilings 1.0.0";

namespace detail {

inline nlohmann::json digits_to_json(const DigitTable& digits) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : digits) {
        nlohmann::json jrow = nlohmann::json::array();
        for (const auto& cell : row) {
            nlohmann::json jcell = nlohmann::json::array();
            for (const auto& addr : cell) jcell.push_back(addr);
            jrow.push_back(std::move(jcell));
        }
        out.push_back(std::move(jrow));
    }
    return out;
}

inline DigitTable digits_from_json(const nlohmann::json& j, int m, int s) {
    if (!j.is_array() || static_cast<int>(j.size()) != m)
        throw IoError("digit table must have m rows");
    DigitTable out(static_cast<std::size_t>(m), std::vector<std::vector<AddressVector>>(static_cast<std::size_t>(m)));
    for (int a = 0; a < m; ++a) {
        if (static_cast<int>(j[a].size()) != m) throw IoError("digit table must be m x m");
        for (int b = 0; b < m; ++b)
            for (const auto& jaddr : j[a][b]) {
                AddressVector addr = jaddr.get<AddressVector>();
                if (static_cast<int>(addr.size()) != s)
                    throw IoError("address vector length differs from s");
                out[a][b].push_back(std::move(addr));
            }
    }
    return out;
}

inline nlohmann::json mat_to_json(const MatI& m) {
    nlohmann::json out = nlohmann::json::array();
    for (int i = 0; i < m.rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

inline nlohmann::json mat_to_json(const MatD& m) {
    nlohmann::json out = nlohmann::json::array();
    for (int i = 0; i < m.rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace detail

inline nlohmann::json to_json(const SubstitutionSystem& sys) {
    nlohmann::json j;
    j["schema"] = kSystemSchema;
    j["name"] = sys.name;
    j["m"] = sys.m;
    j["s"] = sys.s;
    j["d"] = sys.d;
    j["theta"] = sys.theta;
    j["driver"] = detail::mat_to_json(sys.driver);
    j["digits"] = detail::digits_to_json(sys.digits);
    j["defaultShape"] = detail::mat_to_json(sys.defaultShape);
    j["labels"] = sys.labels;
    nlohmann::json spans = nlohmann::json::array();
    for (auto [a, b] : sys.prototileSpans) spans.push_back(nlohmann::json::array({a, b}));
    j["prototiles"] = std::move(spans);
    if (!(sys.geomDigits == sys.digits)) j["geomDigits"] = detail::digits_to_json(sys.geomDigits);
    return j;
}

inline SubstitutionSystem system_from_json(const nlohmann::json& j) {
    if (!j.contains("schema") || j["schema"] != kSystemSchema)
        throw IoError("not a " + std::string(kSystemSchema) + " document");
    SubstitutionSystem sys;
    sys.name = j.at("name").get<std::string>();
    sys.m = j.at("m").get<int>();
    sys.s = j.at("s").get<int>();
    sys.d = j.at("d").get<int>();
    sys.theta = j.at("theta").get<double>();
    if (sys.m < 1 || sys.s < 1 || sys.d < 1) throw IoError("invalid dimensions");

    const auto& jd = j.at("driver");
    if (static_cast<int>(jd.size()) != sys.s) throw IoError("driver must be s x s");
    sys.driver = MatI(sys.s, sys.s);
    for (int a = 0; a < sys.s; ++a) {
        if (static_cast<int>(jd[a].size()) != sys.s) throw IoError("driver must be s x s");
        for (int b = 0; b < sys.s; ++b) sys.driver(a, b) = jd[a][b].get<std::int64_t>();
    }

    sys.digits = detail::digits_from_json(j.at("digits"), sys.m, sys.s);
    sys.geomDigits = j.contains("geomDigits")
                         ? detail::digits_from_json(j["geomDigits"], sys.m, sys.s)
                         : sys.digits;

    const auto& js = j.at("defaultShape");
    if (static_cast<int>(js.size()) != sys.d) throw IoError("defaultShape must be d x s");
    sys.defaultShape = MatD(sys.d, sys.s);
    for (int a = 0; a < sys.d; ++a) {
        if (static_cast<int>(js[a].size()) != sys.s) throw IoError("defaultShape must be d x s");
        for (int b = 0; b < sys.s; ++b) sys.defaultShape(a, b) = js[a][b].get<double>();
    }

    if (j.contains("labels")) sys.labels = j["labels"].get<std::vector<std::string>>();
    if (j.contains("prototiles"))
        for (const auto& pr : j["prototiles"])
            sys.prototileSpans.emplace_back(pr[0].get<int>(), pr[1].get<int>());
    return sys;
}

inline void save_system(const SubstitutionSystem& sys, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << to_json(sys).dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline SubstitutionSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("parse error in " + path + ": " + e.what());
    }
    return system_from_json(j);
}

// ------------------------------------------------------------- run manifest

struct RunManifest {
    std::string commandLine;
    std::string model;
    std::uint64_t seed = 0;
    nlohmann::json thresholds;
    std::string version = kToolVersion;
    std::string timestamp;  // not part of the reproducibility contract
};

inline nlohmann::json to_json(const RunManifest& m) {
    return nlohmann::json{{"commandLine", m.commandLine}, {"model", m.model},
                          {"seed", m.seed},              {"thresholds", m.thresholds},
                          {"version", m.version},        {"timestamp", m.timestamp}};
}

inline void write_manifest(const RunManifest& m, const std::string& artifactPath) {
    const std::string path = artifactPath + ".manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << to_json(m).dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

} // namespace tilings
