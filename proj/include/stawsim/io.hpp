#pragma once

// File formats: packet JSON, pattern CSV/JSON, approximation-comparison CSV,
// oracle run reports. All floating-point text is written with 17 significant
// digits so identical runs produce identical bytes.

#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "stawsim/ladder.hpp"
#include "stawsim/pattern.hpp"
#include "stawsim/wavepacket.hpp"

namespace stawsim::io {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Pattern CSV: header `n,W`, sorted by n.
inline std::string pattern_to_csv(const DiffractionPattern& p) {
    std::string out = "n,W\n";
    for (const auto& [n, w] : p.probabilities) {
        out += std::to_string(n);
        out += ',';
        out += fmt_double(w);
        out += '\n';
    }
    return out;
}

/// Three-way comparison CSV for the Gaussian approximations,
/// header `n,W_exact,W_mg,W_airy`.
inline std::string comparison_to_csv(const std::map<int, double>& exact,
                                     const std::map<int, double>& mg,
                                     const std::map<int, double>& airy) {
    std::string out = "n,W_exact,W_mg,W_airy\n";
    for (const auto& [n, w] : exact) {
        auto get = [n = n](const std::map<int, double>& m) {
            auto it = m.find(n);
            return it == m.end() ? 0.0 : it->second;
        };
        out += std::to_string(n);
        out += ',';
        out += fmt_double(w);
        out += ',';
        out += fmt_double(get(mg));
        out += ',';
        out += fmt_double(get(airy));
        out += '\n';
    }
    return out;
}

/// Pattern JSON with metadata {u, detuning_sign, dropped_mass}.
/// Resonant patterns pass u = u_r and detuning_sign = 0.
inline nlohmann::json pattern_to_json(const DiffractionPattern& p, double u, int detuning_sign) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [n, w] : p.probabilities) entries.push_back({{"n", n}, {"W", w}});
    return {{"u", u},
            {"detuning_sign", detuning_sign},
            {"dropped_mass", p.dropped_mass},
            {"truncation_bound", p.truncation_bound},
            {"entries", entries}};
}

/// Packet schema: {"p0": real, "entries": [{"n": int, "re": real, "im": real}]}.
inline nlohmann::json packet_to_json(const WavePacket& p) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [n, a] : p.amplitudes)
        entries.push_back({{"n", n}, {"re", a.real()}, {"im", a.imag()}});
    return {{"p0", p.p0}, {"entries", entries}};
}

inline WavePacket packet_from_json(const nlohmann::json& j) {
    WavePacket p;
    p.p0 = j.value("p0", 0.0);
    if (!j.contains("entries") || !j["entries"].is_array())
        throw std::invalid_argument("packet JSON: missing \"entries\" array");
    for (const auto& e : j["entries"]) {
        int n = e.at("n").get<int>();
        p.amplitudes[n] = cplx(e.at("re").get<double>(), e.value("im", 0.0));
    }
    p.parity = p.even_only() ? Parity::even_only : Parity::general;
    if (p.norm_sq() == 0.0) throw std::invalid_argument("packet JSON: zero packet");
    p.normalize();
    return p;
}

inline nlohmann::json report_to_json(const OracleReport& r) {
    return {{"norm_drift", r.norm_drift},
            {"edge_mass", r.edge_mass},
            {"excited_final", r.excited_final},
            {"tv_distance", r.tv_distance},
            {"max_pointwise_dev", r.max_pointwise_dev},
            {"dt", r.dt},
            {"n_max", r.n_max},
            {"regime_warning", r.regime_warning}};
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

} // namespace stawsim::io
