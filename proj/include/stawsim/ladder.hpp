#pragma once

// Brute-force ground truth: fixed-step RK4 integration of the two-state
// Schrodinger system on a truncated photon-momentum ladder, in the
// interaction picture of the Raman-Nath model:
//   i dc1_n/dt = U0 f(t) e^{-i Delta t} (c2_{n+1} + c2_{n-1})
//   i dc2_n/dt = U0 f(t) e^{+i Delta t} (c1_{n+1} + c1_{n-1})

#include <cmath>
#include <map>
#include <vector>

#include "stawsim/adiabatic.hpp"
#include "stawsim/core.hpp"
#include "stawsim/pattern.hpp"
#include "stawsim/resonant.hpp"
#include "stawsim/wavepacket.hpp"

namespace stawsim {

struct LadderState {
    int n_max = 0;
    double time = 0.0;
    std::vector<cplx> ground;  // c1_n at index n + n_max
    std::vector<cplx> excited; // c2_n at index n + n_max
    double norm_drift = 0.0;   // |1 - total norm| at final time
    double edge_mass = 0.0;    // max over the run of the boundary-site population

    double ground_population() const {
        double s = 0.0;
        for (const auto& c : ground) s += std::norm(c);
        return s;
    }
    double excited_population() const {
        double s = 0.0;
        for (const auto& c : excited) s += std::norm(c);
        return s;
    }
    std::map<int, double> ground_distribution() const {
        std::map<int, double> d;
        for (int n = -n_max; n <= n_max; ++n) d[n] = std::norm(ground[static_cast<size_t>(n + n_max)]);
        return d;
    }
    /// Momentum distribution summed over both internal levels.
    std::map<int, double> momentum_distribution() const {
        std::map<int, double> d;
        for (int n = -n_max; n <= n_max; ++n)
            d[n] = std::norm(ground[static_cast<size_t>(n + n_max)]) +
                   std::norm(excited[static_cast<size_t>(n + n_max)]);
        return d;
    }
};

/// Comparison report of one oracle run against a closed-form target.
struct OracleReport {
    double norm_drift = 0.0;
    double edge_mass = 0.0;
    double excited_final = 0.0;
    double tv_distance = 0.0;        // (1/2) sum |p - q|
    double max_pointwise_dev = 0.0;  // max_n |p_n - q_n|
    double dt = 0.0;
    int n_max = 0;
    bool regime_warning = false;
};

namespace ladder {

namespace detail {

inline double envelope_value(Envelope e, double t, double T) {
    switch (e) {
        case Envelope::rectangular: return 1.0;
        case Envelope::sin2_ramp: {
            double s = std::sin(pi * t / T);
            return s * s;
        }
    }
    return 0.0;
}

// d/dt of the interleaved state. Zero amplitude beyond the lattice edges.
inline void derivative(const std::vector<cplx>& c1, const std::vector<cplx>& c2,
                       double coupling, double delta, double t,
                       std::vector<cplx>& d1, std::vector<cplx>& d2) {
    const size_t sz = c1.size();
    const cplx ph = std::polar(1.0, -delta * t);
    const cplx g1 = cplx(0.0, -1.0) * coupling * ph;        // -i U0 f e^{-i Delta t}
    const cplx g2 = cplx(0.0, -1.0) * coupling * std::conj(ph);
    for (size_t i = 0; i < sz; ++i) {
        cplx s2 = (i > 0 ? c2[i - 1] : cplx{}) + (i + 1 < sz ? c2[i + 1] : cplx{});
        cplx s1 = (i > 0 ? c1[i - 1] : cplx{}) + (i + 1 < sz ? c1[i + 1] : cplx{});
        d1[i] = g1 * s2;
        d2[i] = g2 * s1;
    }
}

// Expected half-spread of the final pattern, used by the n_max precondition.
inline double u_estimate(const PulseParams& p) {
    double tau = adiabatic::pulse_area(p);
    if (p.detuning == 0.0) return p.rabi_peak * tau; // resonant: orders reach ~2 U0 tau
    return 2.0 * p.rabi_peak * p.rabi_peak * tau / std::abs(p.detuning);
}

} // namespace detail

/// Fixed-step RK4 evolution of `initial` (all population in the ground
/// level) under the given drive. Monitors edge population throughout and
/// norm drift at the end; either above 1e-6 is an error.
inline LadderState evolve(const WavePacket& initial, const PulseParams& params,
                          int n_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("ladder::evolve: dt must be positive");
    double fastest = std::max(std::abs(params.detuning), 2.0 * params.rabi_peak);
    if (dt * fastest > 0.05)
        throw std::invalid_argument("ladder::evolve: dt too coarse; need dt * max(|Delta|, 2 U0) <= 0.05");
    int need = static_cast<int>(std::ceil(2.0 * detail::u_estimate(params))) + 40;
    if (n_max < need)
        throw std::invalid_argument("ladder::evolve: n_max below 2 u_estimate + 40");
    if (initial.max_abs_site() > n_max)
        throw std::invalid_argument("ladder::evolve: initial packet exceeds the lattice");

    const size_t sz = static_cast<size_t>(2 * n_max + 1);
    LadderState st;
    st.n_max = n_max;
    st.ground.assign(sz, cplx{});
    st.excited.assign(sz, cplx{});
    for (const auto& [n, a] : initial.amplitudes) st.ground[static_cast<size_t>(n + n_max)] = a;

    const double T = params.duration;
    if (T == 0.0) return st; // nothing to integrate
    const long steps = std::max(1L, std::lround(T / dt));
    const double h = T / static_cast<double>(steps);

    std::vector<cplx> k1a(sz), k1b(sz), k2a(sz), k2b(sz), k3a(sz), k3b(sz), k4a(sz), k4b(sz);
    std::vector<cplx> ta(sz), tb(sz);
    auto& c1 = st.ground;
    auto& c2 = st.excited;

    double t = 0.0;
    for (long s = 0; s < steps; ++s) {
        double f0 = detail::envelope_value(params.envelope, t, T);
        double fh = detail::envelope_value(params.envelope, t + 0.5 * h, T);
        double f1 = detail::envelope_value(params.envelope, t + h, T);

        detail::derivative(c1, c2, params.rabi_peak * f0, params.detuning, t, k1a, k1b);
        for (size_t i = 0; i < sz; ++i) { ta[i] = c1[i] + 0.5 * h * k1a[i]; tb[i] = c2[i] + 0.5 * h * k1b[i]; }
        detail::derivative(ta, tb, params.rabi_peak * fh, params.detuning, t + 0.5 * h, k2a, k2b);
        for (size_t i = 0; i < sz; ++i) { ta[i] = c1[i] + 0.5 * h * k2a[i]; tb[i] = c2[i] + 0.5 * h * k2b[i]; }
        detail::derivative(ta, tb, params.rabi_peak * fh, params.detuning, t + 0.5 * h, k3a, k3b);
        for (size_t i = 0; i < sz; ++i) { ta[i] = c1[i] + h * k3a[i]; tb[i] = c2[i] + h * k3b[i]; }
        detail::derivative(ta, tb, params.rabi_peak * f1, params.detuning, t + h, k4a, k4b);
        for (size_t i = 0; i < sz; ++i) {
            c1[i] += h / 6.0 * (k1a[i] + 2.0 * (k2a[i] + k3a[i]) + k4a[i]);
            c2[i] += h / 6.0 * (k1b[i] + 2.0 * (k2b[i] + k3b[i]) + k4b[i]);
        }
        t += h;

        double edge = std::norm(c1.front()) + std::norm(c1.back()) +
                      std::norm(c2.front()) + std::norm(c2.back());
        st.edge_mass = std::max(st.edge_mass, edge);
    }

    st.time = T;
    st.norm_drift = std::abs(1.0 - st.ground_population() - st.excited_population());
    if (st.edge_mass > 1e-6)
        throw numerical_error("ladder::evolve: truncation error, edge population above 1e-6");
    if (st.norm_drift > 1e-6)
        throw numerical_error("ladder::evolve: step-size error, norm drift above 1e-6");
    return st;
}

namespace detail {

inline void compare(const std::map<int, double>& p, const std::map<int, double>& q,
                    OracleReport& r) {
    std::map<int, double> diff;
    for (const auto& [n, v] : p) diff[n] += v;
    for (const auto& [n, v] : q) diff[n] -= v;
    double l1 = 0.0, mx = 0.0;
    for (const auto& [n, d] : diff) {
        l1 += std::abs(d);
        mx = std::max(mx, std::abs(d));
    }
    r.tv_distance = 0.5 * l1;
    r.max_pointwise_dev = mx;
}

} // namespace detail

/// Integrate the full two-state system and compare the final ground-state
/// momentum distribution against the adiabatic closed form at
/// u = 2 U0^2 tau / |Delta|. Regime violations (|Delta| t < 200 or a
/// non-smooth envelope) set the warning flag but the run proceeds.
inline OracleReport adiabatic_validate(const WavePacket& initial, const PulseParams& params,
                                       double dt = 0.0, int n_max = 0) {
    if (params.detuning == 0.0)
        throw regime_error("adiabatic_validate: zero detuning; use resonant_validate");

    OracleReport r;
    r.regime_warning = params.adiabaticity() < 200.0 || params.envelope != Envelope::sin2_ramp;

    double u_est = detail::u_estimate(params);
    r.n_max = n_max > 0 ? n_max : static_cast<int>(std::ceil(2.0 * u_est)) + 40 +
                                      initial.max_abs_site() + 20;
    double fastest = std::max(std::abs(params.detuning), 2.0 * params.rabi_peak);
    r.dt = dt > 0.0 ? dt : 0.005 / fastest;

    LadderState st = evolve(initial, params, r.n_max, r.dt);
    r.norm_drift = st.norm_drift;
    r.edge_mass = st.edge_mass;
    r.excited_final = st.excited_population();

    auto target = adiabatic::diffract(initial, adiabatic::interaction_parameter(params));
    detail::compare(st.ground_distribution(), target.probabilities, r);
    return r;
}

/// Integrate at exact resonance (rectangular envelope) and compare the
/// total momentum distribution (both levels) against the resonant engine
/// at u_r = 2 U0 t. Exact in the Raman-Nath model for even-only s.
inline OracleReport resonant_validate(const WavePacket& s, double rabi_peak, double t,
                                      double dt = 0.0, int n_max = 0) {
    if (!s.even_only())
        throw std::invalid_argument("resonant_validate: s must be even-only");
    PulseParams params;
    params.rabi_peak = rabi_peak;
    params.detuning = 0.0;
    params.envelope = Envelope::rectangular;
    params.duration = t;

    OracleReport r;
    r.regime_warning = false;
    double u_r = 2.0 * rabi_peak * t;
    r.n_max = n_max > 0 ? n_max : static_cast<int>(std::ceil(u_r)) + 40 + s.max_abs_site() + 20;
    r.dt = dt > 0.0 ? dt : (rabi_peak > 0.0 ? 0.005 / (2.0 * rabi_peak) : t);

    LadderState st = evolve(s, params, r.n_max, r.dt);
    r.norm_drift = st.norm_drift;
    r.edge_mass = st.edge_mass;
    r.excited_final = st.excited_population();

    auto target = resonant::diffract(s, u_r);
    detail::compare(st.momentum_distribution(), target.probabilities, r);
    return r;
}

} // namespace ladder
} // namespace stawsim
