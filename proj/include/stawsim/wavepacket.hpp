#pragma once

// Momentum-space superposition states on the integer photon-momentum
// lattice (sites in units of one photon momentum, relative to p0).

#include <cmath>
#include <map>

#include "stawsim/core.hpp"

namespace stawsim {

enum class Parity { even_only, general };

struct WavePacket {
    std::map<int, cplx> amplitudes; // lattice site n -> amplitude
    Parity parity = Parity::general;
    double p0 = 0.0; // reference momentum, metadata only

    cplx amp(int n) const {
        auto it = amplitudes.find(n);
        return it == amplitudes.end() ? cplx{0.0, 0.0} : it->second;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& [n, a] : amplitudes) s += std::norm(a);
        return s;
    }

    int max_abs_site() const {
        int m = 0;
        for (const auto& [n, a] : amplitudes) m = std::max(m, std::abs(n));
        return m;
    }

    bool even_only() const {
        for (const auto& [n, a] : amplitudes)
            if (n % 2 != 0 && std::norm(a) > 0.0) return false;
        return true;
    }

    void normalize() {
        double s = std::sqrt(norm_sq());
        if (s == 0.0) throw std::invalid_argument("WavePacket: cannot normalize a zero packet");
        for (auto& [n, a] : amplitudes) a /= s;
    }
};

/// Discrete Gaussian packet parameters. half_width is the M of
/// |amplitude_{2m}|^2 ~ exp(-m^2/M); phase is the per-site ramp alpha.
struct GaussianSpec {
    double half_width = 10.0;  // M > 0
    double phase = 0.0;        // alpha [rad]
    int detuning_sign = +1;    // sign of Delta the packet was prepared for
};

/// Two-peak splitting: amplitudes at lattice sites 0 and +2.
inline WavePacket make_two_peak(cplx a0, cplx a2) {
    double s = std::sqrt(std::norm(a0) + std::norm(a2));
    if (s == 0.0 || !is_finite(a0) || !is_finite(a2))
        throw std::invalid_argument("make_two_peak: amplitudes must be finite and not both zero");
    WavePacket p;
    p.parity = Parity::even_only;
    p.amplitudes[0] = a0 / s;
    if (std::norm(a2) > 0.0) p.amplitudes[2] = a2 / s;
    return p;
}

/// Discrete Gaussian on the even lattice:
///   amplitude_{2m} = exp(i (alpha + sign * pi/2) m) exp(-m^2 / 2M) / (pi M)^{1/4},
/// renormalized to exact unit probability. Sites whose raw probability falls
/// below 1e-30 of the peak are dropped; if given, raw_norm_error receives
/// |1 - sum| of the unnormalized amplitudes.
inline WavePacket make_gaussian(const GaussianSpec& spec, double* raw_norm_error = nullptr) {
    const double M = spec.half_width;
    if (!(M > 0.0) || !std::isfinite(M))
        throw std::invalid_argument("make_gaussian: half_width must be positive");
    if (spec.detuning_sign != 1 && spec.detuning_sign != -1)
        throw std::invalid_argument("make_gaussian: detuning_sign must be +1 or -1");

    const double ramp = spec.phase + spec.detuning_sign * pi / 2.0;
    const double c0 = std::pow(pi * M, -0.25);
    const int m_cut = static_cast<int>(std::ceil(std::sqrt(M * 30.0 * std::log(10.0)))) + 1;

    WavePacket p;
    p.parity = Parity::even_only;
    double raw = 0.0;
    for (int m = -m_cut; m <= m_cut; ++m) {
        double mod = c0 * std::exp(-0.5 * m * m / M);
        if (mod * mod < 1e-30 * c0 * c0) continue;
        cplx a = std::polar(mod, ramp * m);
        p.amplitudes[2 * m] = a;
        raw += mod * mod;
    }
    if (raw_norm_error) *raw_norm_error = std::abs(1.0 - raw);
    p.normalize();
    return p;
}

/// Map an even-only packet in the alpha_{2m} indexing to the resonant
/// s-vector: s_m = alpha_{2(m/2)} at even m, zero at odd m. On the physical
/// photon lattice this is the identity; the result is tagged general-parity
/// for the resonant engine's integer-lattice sums.
inline WavePacket to_resonant_vector(const WavePacket& packet) {
    if (!packet.even_only())
        throw std::invalid_argument("to_resonant_vector: packet must be even-only");
    WavePacket s = packet;
    s.parity = Parity::general;
    s.normalize();
    return s;
}

} // namespace stawsim
