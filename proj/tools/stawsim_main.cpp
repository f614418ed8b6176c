// stawsim: command-line front end for standing-wave diffraction scenarios.
// Scenario = mode + parameter block + packet block, merged from
// preset < config file < flags. Emits pattern CSVs and a metrics JSON,
// byte-identical for identical configs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stawsim/stawsim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stawsim;

namespace {

struct CliOverrides {
    std::optional<double> u, M, alpha, ur, dt, U0, Delta, t, omega_rec;
    std::optional<double> a0_re, a0_im, a2_re, a2_im;
    std::optional<int> sign_delta, nmax;
    std::optional<std::string> envelope, packet_file;
};

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json preset_config(const std::string& name) {
    if (name == "fig1")
        return {{"mode", "adiabatic-two-peak"}, {"u", 10.0}, {"sign_delta", -1},
                {"a0_re", 1.0 / std::sqrt(2.0)}, {"a0_im", 0.0},
                {"a2_re", 0.0}, {"a2_im", -1.0 / std::sqrt(2.0)}};
    if (name == "fig3")
        return {{"mode", "adiabatic-gaussian"}, {"u", 10.0}, {"sign_delta", +1},
                {"M", 10.0}, {"alpha", pi}};
    if (name == "fig4")
        return {{"mode", "resonant-gaussian"}, {"ur", 100.0}, {"sign_delta", +1},
                {"M", 10.0}, {"alpha", pi / 2.0}};
    throw config_error("unknown preset \"" + name + "\" (expected fig1, fig3 or fig4)");
}

void merge_overrides(json& cfg, const CliOverrides& o) {
    auto set = [&cfg](const char* key, const auto& opt) {
        if (opt) cfg[key] = *opt;
    };
    set("u", o.u); set("M", o.M); set("alpha", o.alpha); set("ur", o.ur);
    set("dt", o.dt); set("U0", o.U0); set("Delta", o.Delta); set("t", o.t);
    set("omega_rec", o.omega_rec);
    set("a0_re", o.a0_re); set("a0_im", o.a0_im);
    set("a2_re", o.a2_re); set("a2_im", o.a2_im);
    set("sign_delta", o.sign_delta); set("nmax", o.nmax);
    set("envelope", o.envelope); set("packet_file", o.packet_file);
}

double need_num(const json& cfg, const char* key) {
    if (!cfg.contains(key) || !cfg[key].is_number())
        throw config_error(std::string("missing or non-numeric field \"") + key + "\"");
    return cfg[key].get<double>();
}

int need_sign(const json& cfg) {
    if (!cfg.contains("sign_delta")) throw config_error("missing field \"sign_delta\" (+1 or -1)");
    int s = cfg["sign_delta"].get<int>();
    if (s != 1 && s != -1) throw config_error("field \"sign_delta\" must be +1 or -1");
    return s;
}

Envelope parse_envelope(const std::string& s) {
    if (s == "rectangular" || s == "rect") return Envelope::rectangular;
    if (s == "sin2" || s == "sin2-ramp") return Envelope::sin2_ramp;
    throw config_error("field \"envelope\" must be \"rectangular\" or \"sin2\"");
}

bool has_physical_block(const json& cfg) {
    return cfg.contains("U0") || cfg.contains("Delta") || cfg.contains("t");
}

PulseParams physical_params(const json& cfg) {
    PulseParams p;
    p.rabi_peak = need_num(cfg, "U0");
    p.detuning = need_num(cfg, "Delta");
    p.duration = need_num(cfg, "t");
    p.envelope = parse_envelope(cfg.value("envelope", "rectangular"));
    p.recoil_frequency = cfg.value("omega_rec", 0.0);
    return p;
}

/// Dimensionless block {u, sign_delta}, or derived from the physical block.
/// Exactly one style may be present.
AdiabaticParams adiabatic_params(const json& cfg, PulseParams* physical_out = nullptr) {
    bool dimensionless = cfg.contains("u");
    bool physical = has_physical_block(cfg);
    if (dimensionless && physical)
        throw config_error("give either {u, sign_delta} or {U0, Delta, envelope, t}, not both");
    if (dimensionless) return {need_num(cfg, "u"), need_sign(cfg)};
    if (physical) {
        PulseParams p = physical_params(cfg);
        if (physical_out) *physical_out = p;
        return adiabatic::interaction_parameter(p);
    }
    throw config_error("missing parameter block: need {u, sign_delta} or {U0, Delta, envelope, t}");
}

double resonant_ur(const json& cfg) {
    bool dimensionless = cfg.contains("ur");
    bool physical = cfg.contains("U0") || cfg.contains("t");
    if (dimensionless && physical)
        throw config_error("give either {ur} or {U0, t}, not both");
    if (dimensionless) return need_num(cfg, "ur");
    if (physical) {
        if (cfg.value("Delta", 0.0) != 0.0)
            throw config_error("resonant modes require Delta = 0");
        return 2.0 * need_num(cfg, "U0") * need_num(cfg, "t");
    }
    throw config_error("missing parameter block: need {ur} or {U0, t}");
}

cplx cfg_cplx(const json& cfg, const char* re, const char* im) {
    return {need_num(cfg, re), cfg.value(im, 0.0)};
}

WavePacket packet_from_config(const json& cfg) {
    bool two_peak = cfg.contains("a0_re") || cfg.contains("a2_re");
    bool gaussian = cfg.contains("M");
    bool file = cfg.contains("packet_file");
    bool inline_packet = cfg.contains("packet");
    int styles = int(two_peak) + int(gaussian) + int(file) + int(inline_packet);
    if (styles != 1)
        throw config_error("need exactly one packet block: {a0_*, a2_*}, {M, alpha}, \"packet\" or \"packet_file\"");
    if (two_peak) return make_two_peak(cfg_cplx(cfg, "a0_re", "a0_im"), cfg_cplx(cfg, "a2_re", "a2_im"));
    if (gaussian)
        return make_gaussian({need_num(cfg, "M"), need_num(cfg, "alpha"), need_sign(cfg)});
    if (inline_packet) return io::packet_from_json(cfg["packet"]);
    std::ifstream f(cfg["packet_file"].get<std::string>());
    if (!f) throw config_error("cannot read packet_file \"" + cfg["packet_file"].get<std::string>() + "\"");
    return io::packet_from_json(json::parse(f));
}

void write_outputs(const fs::path& out, const DiffractionPattern& pat, const json& metrics,
                   double u_meta, int sign_meta) {
    fs::create_directories(out);
    io::write_file((out / "pattern.csv").string(), io::pattern_to_csv(pat));
    io::write_file((out / "pattern.json").string(),
                   io::pattern_to_json(pat, u_meta, sign_meta).dump(2) + "\n");
    io::write_file((out / "metrics.json").string(), metrics.dump(2) + "\n");
}

int run_adiabatic_two_peak(const json& cfg, const fs::path& out) {
    PulseParams phys;
    phys.rabi_peak = -1.0;
    AdiabaticParams q = adiabatic_params(cfg, &phys);
    cplx a0 = cfg_cplx(cfg, "a0_re", "a0_im");
    cplx a2 = cfg_cplx(cfg, "a2_re", "a2_im");

    auto pat = adiabatic::two_peak_diffract(a0, a2, q);
    json metrics = {
        {"u", q.u},
        {"detuning_sign", q.detuning_sign},
        {"delta_w", adiabatic::asymmetry(pat)},
        {"delta_w_closed_form", adiabatic::asymmetry_closed_form(a0, a2, q)},
        {"mean_momentum", pat.first_moment()},
        {"mean_momentum_closed_form", adiabatic::mean_momentum_closed_form(a0, a2, q)},
        {"forward_fraction", pat.forward_fraction()},
        {"dropped_mass", pat.dropped_mass},
    };
    if (phys.rabi_peak >= 0.0 && phys.recoil_frequency > 0.0) {
        auto v = adiabatic::raman_nath_check(phys);
        metrics["raman_nath"] = {{"u", v.u}, {"n_max", v.n_max}, {"lhs", v.lhs},
                                 {"rhs", v.rhs}, {"ratio", v.ratio}, {"valid", v.valid}};
    }
    write_outputs(out, pat, metrics, q.u, q.detuning_sign);
    return 0;
}

int run_adiabatic_gaussian(const json& cfg, const fs::path& out) {
    AdiabaticParams q = adiabatic_params(cfg);
    GaussianSpec spec{need_num(cfg, "M"), need_num(cfg, "alpha"), q.detuning_sign};

    auto exact = gaussian_dynamics::diffract(spec, q.u);
    std::map<int, double> mg, airy;
    double mg_mass = 0.0, airy_mass = 0.0;
    for (const auto& [n, w] : exact.probabilities) {
        double wm = std::norm(gaussian_dynamics::moving_gaussian(n / 2.0, q.u, spec.half_width, spec.phase));
        double wa = std::norm(gaussian_dynamics::airy_solution(n / 2.0, q.u, spec.half_width, spec.phase));
        mg[n] = wm;
        airy[n] = wa;
        mg_mass += wm;
        airy_mass += wa;
    }
    for (auto& [n, w] : mg) w /= mg_mass;
    for (auto& [n, w] : airy) w /= airy_mass;

    double peak = 0.0, dev_mg = 0.0, dev_airy = 0.0;
    for (const auto& [n, w] : exact.probabilities) {
        peak = std::max(peak, w);
        dev_mg = std::max(dev_mg, std::abs(mg[n] - w));
        dev_airy = std::max(dev_airy, std::abs(airy[n] - w));
    }

    fs::create_directories(out);
    io::write_file((out / "pattern.csv").string(), io::comparison_to_csv(exact.probabilities, mg, airy));
    json metrics = {
        {"u", q.u},
        {"detuning_sign", q.detuning_sign},
        {"M", spec.half_width},
        {"alpha", spec.phase},
        {"peak_site", exact.peak_site_interpolated()},
        {"peak_probability", peak},
        {"max_dev_moving_gaussian", dev_mg},
        {"max_dev_airy", dev_airy},
        {"dropped_mass", exact.dropped_mass},
    };
    io::write_file((out / "pattern.json").string(),
                   io::pattern_to_json(exact, q.u, q.detuning_sign).dump(2) + "\n");
    io::write_file((out / "metrics.json").string(), metrics.dump(2) + "\n");
    return 0;
}

int run_resonant_gaussian(const json& cfg, const fs::path& out) {
    double ur = resonant_ur(cfg);
    GaussianSpec spec{need_num(cfg, "M"), need_num(cfg, "alpha"), need_sign(cfg)};
    auto rp = resonant::params_from_spec(spec, ur);

    auto s = to_resonant_vector(make_gaussian(spec));
    auto pat = resonant::diffract(s, ur);
    auto closed = resonant::gaussian_closed_form(spec, ur);
    auto two_fringe = resonant::gaussian_two_fringe(spec, ur);

    auto norm = pat;
    norm.renormalize();
    double peak = 0.0, dev_cf = 0.0, dev_tf = 0.0;
    int peak_pos = 0, peak_neg = 0;
    double wp = -1.0, wn = -1.0;
    for (const auto& [n, w] : norm.probabilities) {
        peak = std::max(peak, w);
        dev_cf = std::max(dev_cf, std::abs(closed.w(n) - w));
        dev_tf = std::max(dev_tf, std::abs(two_fringe.w(n) - w));
        if (n > 0 && w > wp) { wp = w; peak_pos = n; }
        if (n < 0 && w > wn) { wn = w; peak_neg = n; }
    }
    json metrics = {
        {"ur", ur},
        {"beta", rp.beta},
        {"M", spec.half_width},
        {"alpha", spec.phase},
        {"detuning_sign", spec.detuning_sign},
        {"fringe_balance", resonant::fringe_balance(pat)},
        {"peak_positive", peak_pos},
        {"peak_negative", peak_neg},
        {"max_dev_closed_form", dev_cf},
        {"max_dev_two_fringe", dev_tf},
        {"dropped_mass", pat.dropped_mass},
    };
    write_outputs(out, pat, metrics, ur, 0);
    return 0;
}

int run_resonant_general(const json& cfg, const fs::path& out) {
    double ur = resonant_ur(cfg);
    WavePacket s = packet_from_config(cfg);
    auto pat = resonant::diffract(s, ur);
    json metrics = {
        {"ur", ur},
        {"fringe_balance", resonant::fringe_balance(pat)},
        {"dropped_mass", pat.dropped_mass},
    };
    write_outputs(out, pat, metrics, ur, 0);
    return 0;
}

int run_oracle_adiabatic(const json& cfg, const fs::path& out) {
    PulseParams p = physical_params(cfg);
    WavePacket packet = packet_from_config(cfg);
    auto report = ladder::adiabatic_validate(packet, p, cfg.value("dt", 0.0), cfg.value("nmax", 0));
    auto q = adiabatic::interaction_parameter(p);

    json metrics = io::report_to_json(report);
    metrics["u"] = q.u;
    metrics["detuning_sign"] = q.detuning_sign;
    fs::create_directories(out);
    io::write_file((out / "metrics.json").string(), metrics.dump(2) + "\n");
    io::write_file((out / "report.json").string(), io::report_to_json(report).dump(2) + "\n");
    return 0;
}

int run_oracle_resonant(const json& cfg, const fs::path& out) {
    if (cfg.value("Delta", 0.0) != 0.0) throw config_error("oracle-resonant requires Delta = 0");
    WavePacket s = packet_from_config(cfg);
    double U0 = need_num(cfg, "U0");
    double t = need_num(cfg, "t");
    auto report = ladder::resonant_validate(s, U0, t, cfg.value("dt", 0.0), cfg.value("nmax", 0));

    json metrics = io::report_to_json(report);
    metrics["ur"] = 2.0 * U0 * t;
    fs::create_directories(out);
    io::write_file((out / "metrics.json").string(), metrics.dump(2) + "\n");
    io::write_file((out / "report.json").string(), io::report_to_json(report).dump(2) + "\n");
    return 0;
}

int run_mode(const std::string& mode, const json& cfg, const fs::path& out);

int run_sweep(const json& cfg, const fs::path& out) {
    if (!cfg.contains("sweep") || !cfg["sweep"].is_object())
        throw config_error("sweep mode needs a \"sweep\" object {mode, parameter, values}");
    const json& sw = cfg["sweep"];
    std::string sub_mode = sw.value("mode", "");
    std::string parameter = sw.value("parameter", "");
    if (sub_mode.empty() || sub_mode == "sweep") throw config_error("sweep.mode missing or invalid");
    if (parameter.empty()) throw config_error("sweep.parameter missing");
    if (!sw.contains("values") || !sw["values"].is_array() || sw["values"].empty())
        throw config_error("sweep.values must be a non-empty array");

    json index = json::array();
    for (const auto& v : sw["values"]) {
        json sub = cfg;
        sub.erase("sweep");
        sub[parameter] = v;
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s_%.10g", parameter.c_str(), v.get<double>());
        fs::path sub_out = out / buf;
        run_mode(sub_mode, sub, sub_out);
        index.push_back({{"value", v}, {"dir", buf}});
    }
    fs::create_directories(out);
    io::write_file((out / "index.json").string(), index.dump(2) + "\n");
    return 0;
}

int run_mode(const std::string& mode, const json& cfg, const fs::path& out) {
    if (mode == "adiabatic-two-peak") return run_adiabatic_two_peak(cfg, out);
    if (mode == "adiabatic-gaussian") return run_adiabatic_gaussian(cfg, out);
    if (mode == "resonant-gaussian") return run_resonant_gaussian(cfg, out);
    if (mode == "resonant-general") return run_resonant_general(cfg, out);
    if (mode == "oracle-adiabatic") return run_oracle_adiabatic(cfg, out);
    if (mode == "oracle-resonant") return run_oracle_resonant(cfg, out);
    if (mode == "sweep") return run_sweep(cfg, out);
    throw config_error("unknown mode \"" + mode + "\"");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Standing-wave atom diffraction simulator"};
    app.get_formatter()->column_width(30);

    std::string mode;
    app.add_option("mode", mode,
                   "adiabatic-two-peak | adiabatic-gaussian | resonant-gaussian | "
                   "resonant-general | oracle-adiabatic | oracle-resonant | sweep")
        ->required();

    std::string config_path, preset, out_dir = "out";
    app.add_option("--config", config_path, "scenario JSON file");
    app.add_option("--preset", preset, "bundled scenario: fig1, fig3 or fig4");
    app.add_option("--out", out_dir, "output directory");

    CliOverrides o;
    app.add_option("--u", o.u, "interaction parameter 2 U0^2 tau / |Delta|");
    app.add_option("--M", o.M, "Gaussian half-width");
    app.add_option("--alpha", o.alpha, "Gaussian phase ramp [rad]");
    app.add_option("--sign-delta", o.sign_delta, "detuning sign, +1 or -1");
    app.add_option("--ur", o.ur, "resonant parameter 2 U t");
    app.add_option("--nmax", o.nmax, "oracle lattice half-size");
    app.add_option("--dt", o.dt, "oracle integrator step [s]");
    app.add_option("--U0", o.U0, "peak Rabi frequency [rad/s]");
    app.add_option("--Delta", o.Delta, "detuning [rad/s]");
    app.add_option("--t", o.t, "pulse duration [s]");
    app.add_option("--envelope", o.envelope, "rectangular | sin2");
    app.add_option("--omega-rec", o.omega_rec, "recoil frequency [rad/s]");
    app.add_option("--a0-re", o.a0_re, "two-peak amplitude a0, real part");
    app.add_option("--a0-im", o.a0_im, "two-peak amplitude a0, imaginary part");
    app.add_option("--a2-re", o.a2_re, "two-peak amplitude a2, real part");
    app.add_option("--a2-im", o.a2_im, "two-peak amplitude a2, imaginary part");
    app.add_option("--packet-file", o.packet_file, "packet JSON file (s-representation)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        json cfg = json::object();
        if (!preset.empty()) cfg = preset_config(preset);
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw config_error("cannot read config file \"" + config_path + "\"");
            json file_cfg = json::parse(f);
            for (auto& [k, v] : file_cfg.items()) cfg[k] = v;
        }
        merge_overrides(cfg, o);
        if (cfg.contains("mode") && cfg["mode"].get<std::string>() != mode)
            throw config_error("requested mode \"" + mode + "\" conflicts with configured mode \"" +
                               cfg["mode"].get<std::string>() + "\"");
        return run_mode(mode, cfg, out_dir);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const regime_error& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical-quality error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
