#pragma once

// Evolution of the discrete Gaussian packet under adiabatic scattering:
// the exact lattice sum I_n(u), its differential-difference equation,
// the moving-Gaussian approximation, and the Airy-function solution.

#include <cmath>

#include "stawsim/adiabatic.hpp"
#include "stawsim/core.hpp"
#include "stawsim/pattern.hpp"
#include "stawsim/specfun.hpp"
#include "stawsim/wavepacket.hpp"

namespace stawsim {

/// Scaled coordinates of the Airy-function solution.
struct AiryParams {
    double N = 0.0; // scaled displacement coordinate
    cplx h;         // scaled width parameter, Re(h) > 0
    double c0 = 1.0;
};

namespace gaussian_dynamics {

/// Exact lattice sum
///   I_n(u) = (pi M)^{-1/4} sum_nu exp(-i alpha nu - (n-nu)^2 / 2M) J_nu(u).
/// n may be non-integer (used by the derivative tests). Negative u is folded
/// through J_nu(-u) = (-1)^nu J_nu(u).
inline cplx i_exact(double n, double u, double M, double alpha) {
    if (!(M > 0.0) || !std::isfinite(M) || !std::isfinite(n) || !std::isfinite(u) || !std::isfinite(alpha))
        throw std::invalid_argument("i_exact: arguments must be finite, M > 0");

    const double ua = std::abs(u);
    if (u < 0.0) alpha += pi; // J_nu(-u) = (-1)^nu J_nu(u)

    // keep terms until both factors are below 1e-18 of their peaks
    const int nu_bessel = static_cast<int>(std::ceil(ua + 12.0 * std::cbrt(ua + 1.0))) + 20;
    const double gauss_w = std::sqrt(2.0 * M * 42.0);
    int lo = std::max(static_cast<int>(std::floor(n - gauss_w)), -nu_bessel);
    int hi = std::min(static_cast<int>(std::ceil(n + gauss_w)), nu_bessel);
    if (lo > hi) return {0.0, 0.0};

    const auto J = specfun::bessel_j_array(std::max(std::abs(lo), std::abs(hi)), ua);
    cplx sum = 0.0;
    for (int nu = lo; nu <= hi; ++nu) {
        double d = n - nu;
        sum += std::polar(std::exp(-0.5 * d * d / M), -alpha * nu) * J[nu];
    }
    return sum * std::pow(pi * M, -0.25);
}

/// Adiabatic diffraction of the Gaussian packet through the I_n sum:
/// W_{2k} = |I_k(u)|^2, renormalized. Agrees with
/// adiabatic::diffract(make_gaussian(spec), ...) pointwise.
inline DiffractionPattern diffract(const GaussianSpec& spec, double u) {
    if (!(spec.half_width > 0.0))
        throw std::invalid_argument("gaussian_dynamics::diffract: half_width must be positive");
    if (!(u >= 0.0) || !std::isfinite(u))
        throw std::invalid_argument("gaussian_dynamics::diffract: u must be finite and >= 0");

    const double M = spec.half_width;
    const int mhalf = static_cast<int>(std::ceil(std::sqrt(M * 30.0 * std::log(10.0)))) + 1;
    const int kb = static_cast<int>(std::ceil(u)) + adiabatic::detail::order_pad(u) + mhalf;

    DiffractionPattern out;
    out.truncation_bound = 2 * kb;
    for (int k = -kb; k <= kb; ++k)
        out.probabilities[2 * k] = std::norm(i_exact(k, u, M, spec.phase));
    out.renormalize();
    return out;
}

/// Residual of the exact differential-difference equation
///   dI_n/dn = -(n/M) I_n + (u/2M)(e^{i alpha} I_{n+1} + e^{-i alpha} I_{n-1}),
/// with dI_n/dn replaced by a central difference of the given step.
/// Converges to zero as O(step^2).
inline double dde_residual(double n, double u, double M, double alpha, double step) {
    if (!(step > 0.0) || step > 0.1)
        throw std::invalid_argument("dde_residual: step must lie in (0, 0.1]");
    cplx dIdn = (i_exact(n + step, u, M, alpha) - i_exact(n - step, u, M, alpha)) / (2.0 * step);
    cplx rhs = -(n / M) * i_exact(n, u, M, alpha) +
               u / (2.0 * M) * (std::polar(1.0, alpha) * i_exact(n + 1.0, u, M, alpha) +
                                std::polar(1.0, -alpha) * i_exact(n - 1.0, u, M, alpha));
    return std::abs(dIdn - rhs);
}

/// Moving-Gaussian approximation
///   I_n ~ c0 exp(-(n - u cos alpha)^2 / (2 (M + i u sin alpha))),
/// displacement by cos(alpha), broadening by sin(alpha).
inline cplx moving_gaussian(double n, double u, double M, double alpha) {
    if (!(M > 0.0)) throw std::invalid_argument("moving_gaussian: M must be positive");
    double sa = std::sin(alpha), ca = std::cos(alpha);
    double c0 = std::pow(pi * M * (1.0 + sa * sa * u * u / (M * M)), -0.25);
    cplx width(M, sa * u);
    cplx arg = -(n - ca * u) * (n - ca * u) / (2.0 * width);
    return c0 * std::exp(arg);
}

namespace detail {

/// Scaled Airy coordinates for a given lattice position. The displacement
/// coordinate carries sign(cos alpha) so that the Airy-asymptote side is
/// always the leading edge of the moving packet.
inline void airy_coords(double n, double u, double M, double alpha, double& N, cplx& h) {
    double ca = std::cos(alpha), sa = std::sin(alpha);
    double scale = std::cbrt(std::abs(ca) * u);
    N = (ca > 0.0 ? 1.0 : -1.0) * (n - ca * u) / (scale / std::cbrt(2.0));
    h = cplx(M, -sa * u) / (std::cbrt(2.0) * scale * scale);
}

inline void check_airy_args(double u, double M, double alpha) {
    if (!(u > 0.0) || !std::isfinite(u))
        throw std::invalid_argument("airy_solution: u must be positive");
    if (!(M > 0.0)) throw std::invalid_argument("airy_solution: M must be positive");
    if (std::abs(std::cos(alpha)) <= 1e-8)
        throw regime_error("airy_solution: cos(alpha) ~ 0 has no Airy branch; use moving_gaussian");
}

} // namespace detail

/// Scaled parameters of the Airy solution at lattice position n, with c0
/// fixed by normalizing sum_k |I_k|^2 over the even lattice.
inline AiryParams airy_params(double n, double u, double M, double alpha) {
    detail::check_airy_args(u, M, alpha);
    AiryParams p;
    detail::airy_coords(n, u, M, alpha, p.N, p.h);
    double mass = 0.0;
    const int kb = static_cast<int>(std::ceil(u + 8.0 * std::sqrt(M))) + 20;
    for (int k = -kb; k <= kb; ++k) {
        double Nk;
        cplx hk;
        detail::airy_coords(k, u, M, alpha, Nk, hk);
        mass += std::norm(std::exp(hk * Nk) * specfun::airy_ai(Nk + hk * hk));
    }
    p.c0 = 1.0 / std::sqrt(mass);
    return p;
}

/// Airy-function solution I_n = c0 e^{h N} Ai(N + h^2).
inline cplx airy_solution(double n, double u, double M, double alpha) {
    AiryParams p = airy_params(n, u, M, alpha);
    return p.c0 * std::exp(p.h * p.N) * specfun::airy_ai(p.N + p.h * p.h);
}

} // namespace gaussian_dynamics
} // namespace stawsim
