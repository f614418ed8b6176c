#pragma once

// Adiabatic-regime diffraction: pulse area, interaction parameter,
// the general even-lattice engine, two-peak closed forms, asymmetry
// functionals, mean momentum, and the Raman-Nath validity check.

#include <algorithm>
#include <cmath>
#include <limits>

#include "stawsim/core.hpp"
#include "stawsim/pattern.hpp"
#include "stawsim/specfun.hpp"
#include "stawsim/wavepacket.hpp"

namespace stawsim {

enum class Envelope { rectangular, sin2_ramp };

/// Physical drive description. All rates in rad/s, duration in s.
struct PulseParams {
    double rabi_peak = 0.0;        // U0 > 0
    double detuning = 0.0;         // Delta, signed; zero means exact resonance
    Envelope envelope = Envelope::rectangular;
    double duration = 0.0;         // t >= 0
    double recoil_frequency = 0.0; // omega_rec > 0

    /// |Delta| t, the adiabaticity figure. Reported, never enforced.
    double adiabaticity() const { return std::abs(detuning) * duration; }
};

struct AdiabaticParams {
    double u = 0.0;          // 2 |U0|^2 tau / |Delta|
    int detuning_sign = +1;
};

struct ValidityReport {
    double u = 0.0;
    int n_max = 0;        // ~ 2u, largest populated order
    double lhs = 0.0;     // 4 u^2 omega_rec
    double rhs = 0.0;     // min(U0, 1/t)
    double ratio = 0.0;
    bool valid = false;
};

namespace adiabatic {

/// tau = integral of f^2 over the pulse.
inline double pulse_area(const PulseParams& p) {
    if (p.duration < 0.0 || !std::isfinite(p.duration))
        throw std::invalid_argument("pulse_area: duration must be >= 0");
    switch (p.envelope) {
        case Envelope::rectangular: return p.duration;
        case Envelope::sin2_ramp: return 0.375 * p.duration; // integral of sin^4
    }
    throw std::invalid_argument("pulse_area: unknown envelope");
}

inline AdiabaticParams interaction_parameter(const PulseParams& p) {
    if (p.detuning == 0.0)
        throw regime_error("interaction_parameter: zero detuning; use the resonant module");
    double tau = pulse_area(p);
    return {2.0 * p.rabi_peak * p.rabi_peak * tau / std::abs(p.detuning),
            p.detuning > 0.0 ? +1 : -1};
}

namespace detail {

// Bessel orders above u + this pad carry less than ~1e-18 each; the mass
// outside the resulting support is far below 1e-12.
inline int order_pad(double u) {
    return static_cast<int>(std::ceil(12.0 * std::cbrt(u + 1.0))) + 2;
}

inline void check_params(const AdiabaticParams& q) {
    if (!(q.u >= 0.0) || !std::isfinite(q.u))
        throw std::invalid_argument("adiabatic: u must be finite and >= 0");
    if (q.detuning_sign != 1 && q.detuning_sign != -1)
        throw std::invalid_argument("adiabatic: detuning_sign must be +1 or -1");
}

} // namespace detail

/// General even-lattice diffraction of an even-only packet:
/// W_{2k} = | sum_m (sign i)^{-m} alpha_{2m} J_{k-m}(u) |^2.
inline DiffractionPattern diffract(const WavePacket& packet, const AdiabaticParams& q) {
    detail::check_params(q);
    if (!packet.even_only())
        throw std::invalid_argument("adiabatic::diffract: packet must be even-only");

    const int mhalf = packet.max_abs_site() / 2;
    const int kb = static_cast<int>(std::ceil(q.u)) + detail::order_pad(q.u) + mhalf;
    const auto J = specfun::bessel_j_array(kb + mhalf, q.u);

    DiffractionPattern out;
    out.truncation_bound = 2 * kb;
    double mass = 0.0;
    for (int k = -kb; k <= kb; ++k) {
        cplx amp = 0.0;
        for (const auto& [site, a] : packet.amplitudes) {
            int m = site / 2;
            amp += ipow(-static_cast<long>(q.detuning_sign) * m) * a * J[k - m];
        }
        double w = std::norm(amp);
        out.probabilities[2 * k] = w;
        mass += w;
    }
    out.dropped_mass = std::max(0.0, packet.norm_sq() - mass);
    return out;
}

/// Two-peak closed form W_{2k} = |a0 J_k(u) + a2/(i sign) J_{k-1}(u)|^2.
/// Inputs are normalized first, so this matches diffract on make_two_peak.
inline DiffractionPattern two_peak_diffract(cplx a0, cplx a2, const AdiabaticParams& q) {
    detail::check_params(q);
    double s = std::sqrt(std::norm(a0) + std::norm(a2));
    if (s == 0.0) throw std::invalid_argument("two_peak_diffract: amplitudes must not both be zero");
    a0 /= s;
    a2 /= s;

    const int kb = static_cast<int>(std::ceil(q.u)) + detail::order_pad(q.u) + 1;
    const auto J = specfun::bessel_j_array(kb + 1, q.u);
    const cplx rot = a2 * cplx(0.0, -static_cast<double>(q.detuning_sign)); // a2 / (i sign)

    DiffractionPattern out;
    out.truncation_bound = 2 * kb;
    double mass = 0.0;
    for (int k = -kb; k <= kb; ++k) {
        double w = std::norm(a0 * J[k] + rot * J[k - 1]);
        out.probabilities[2 * k] = w;
        mass += w;
    }
    out.dropped_mass = std::max(0.0, 1.0 - mass);
    return out;
}

/// Direct-sum asymmetry Delta W = sum_{n>=1} (W_{+n} - W_{-n}).
/// This is the ground-truth definition for every closed form below.
inline double asymmetry(const DiffractionPattern& pattern) {
    double s = 0.0;
    for (const auto& [n, w] : pattern.probabilities) {
        if (n > 0) s += w - pattern.w(-n);
    }
    return s;
}

/// Interference kernel S(u) = (2/u) sum_{k>=1} k J_k(u)^2, obtained by
/// telescoping the branchwise two-peak expansion with the three-term
/// recurrence. Equals (1/u) int_0^u u' (J_0^2 + J_1^2) du' and tends to
/// 2/pi as u -> infinity.
inline double interference_kernel(double u) {
    if (u == 0.0) return 0.0;
    const int kb = static_cast<int>(std::ceil(u)) + detail::order_pad(u);
    const auto J = specfun::bessel_j_array(kb, u);
    double s = 0.0;
    for (int k = 1; k <= kb; ++k) s += k * J[k] * J[k];
    return 2.0 * s / u;
}

/// Closed-form asymmetry
///   Delta W = |a2|^2 (J_0^2 + J_1^2) - 2 Im(a0 a2*) / sign * S(u).
/// Returns 0 at u = 0 (no interaction) by convention.
inline double asymmetry_closed_form(cplx a0, cplx a2, const AdiabaticParams& q) {
    detail::check_params(q);
    if (q.u == 0.0) return 0.0;
    double s = std::sqrt(std::norm(a0) + std::norm(a2));
    if (s == 0.0) throw std::invalid_argument("asymmetry_closed_form: amplitudes must not both be zero");
    a0 /= s;
    a2 /= s;
    double j0 = specfun::bessel_j(0, q.u);
    double j1 = specfun::bessel_j(1, q.u);
    double im = std::imag(a0 * std::conj(a2));
    return std::norm(a2) * (j0 * j0 + j1 * j1) -
           2.0 * im / q.detuning_sign * interference_kernel(q.u);
}

/// Mean transferred momentum in units of hbar k, by direct first-moment
/// sum over the diffraction pattern.
inline double mean_momentum(const WavePacket& packet, const AdiabaticParams& q) {
    return diffract(packet, q).first_moment();
}

/// Exact two-peak closed form <p>/hbar k = 2(|a2|^2 - Im(a0 a2*) u sign).
inline double mean_momentum_closed_form(cplx a0, cplx a2, const AdiabaticParams& q) {
    detail::check_params(q);
    double s = std::sqrt(std::norm(a0) + std::norm(a2));
    if (s == 0.0) throw std::invalid_argument("mean_momentum_closed_form: amplitudes must not both be zero");
    a0 /= s;
    a2 /= s;
    return 2.0 * (std::norm(a2) -
                  std::imag(a0 * std::conj(a2)) * q.u * q.detuning_sign);
}

/// Raman-Nath validity: 4 u^2 omega_rec must stay well below min(U0, 1/t).
/// "Well below" is operationalized as ratio <= 0.1; the raw ratio is always
/// reported.
inline ValidityReport raman_nath_check(const PulseParams& p) {
    ValidityReport r;
    r.u = interaction_parameter(p).u;
    r.n_max = static_cast<int>(std::ceil(2.0 * r.u));
    r.lhs = 4.0 * r.u * r.u * p.recoil_frequency;
    double inv_t = p.duration > 0.0 ? 1.0 / p.duration : std::numeric_limits<double>::infinity();
    r.rhs = std::min(p.rabi_peak, inv_t);
    r.ratio = r.lhs == 0.0 ? 0.0 : r.lhs / r.rhs;
    r.valid = r.ratio <= 0.1;
    return r;
}

} // namespace adiabatic
} // namespace stawsim
