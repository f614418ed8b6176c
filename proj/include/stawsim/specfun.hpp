#pragma once

// Special-function kernels: integer-order Bessel J by stable backward
// recurrence, and the Airy function Ai for complex argument.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "stawsim/core.hpp"

namespace stawsim::specfun {

namespace detail {

// Start order for the backward (Miller) recurrence. Values seeded this far
// above both the target order and the turning point have decayed well below
// double precision relative to anything we keep.
inline int recurrence_start(int n_needed, double x) {
    int turn = static_cast<int>(std::ceil(x));
    int pad = static_cast<int>(std::ceil(14.0 * std::cbrt(x + 1.0))) + 40;
    return std::max(n_needed, turn) + pad;
}

// Shared descent. Walks f_{k-1} = (2k/x) f_k - f_{k+1} from `start` down to
// zero, accumulating the Parseval sum (magnitude) and the plain Miller sum
// (sign). Stores f_k for k <= store_max into out[k] when out != nullptr,
// and captures f at `capture` order. Rescales when values threaten overflow.
struct miller_descent {
    double captured = 0.0;
    double parseval = 0.0; // f0^2 + 2 sum_{k>=1} f_k^2
    double miller = 0.0;   // f0 + 2 sum_{k even >= 2} f_k

    void run(double x, int start, int capture, int store_max, double* out) {
        double fp = 0.0;   // f_{k+1}
        double f = 1e-30;  // f_k, arbitrary seed
        parseval = 2.0 * f * f;
        if (start % 2 == 0) miller = 2.0 * f;
        if (capture == start) captured = f;
        if (out && start <= store_max) out[start] = f;

        for (int k = start; k >= 1; --k) {
            double fm = (2.0 * k / x) * f - fp;
            fp = f;
            f = fm;
            int kk = k - 1; // order of f now
            if (kk == capture) captured = f;
            if (out && kk <= store_max) out[kk] = f;
            if (kk > 0) {
                parseval += 2.0 * f * f;
                if (kk % 2 == 0) miller += 2.0 * f;
            } else {
                parseval += f * f;
                miller += f;
            }
            // threshold guards the squared Parseval accumulation, not just f
            if (std::abs(f) > 1e130) {
                const double s = 1e-130;
                f *= s;
                fp *= s;
                captured *= s;
                parseval *= s * s;
                miller *= s;
                if (out) {
                    for (int j = kk; j <= std::min(start, store_max); ++j) out[j] *= s;
                }
            }
        }
    }
};

} // namespace detail

/// J_n over the full symmetric order range -n_max..n_max at fixed argument.
struct BesselArray {
    int n_max = 0;
    double argument = 0.0;
    std::vector<double> values; // index n + n_max

    double operator[](int n) const { return values[static_cast<size_t>(n + n_max)]; }
};

/// All of J_{-n_max}(x) .. J_{n_max}(x). Backward recurrence normalized by
/// the Parseval sum sum_k J_k^2 = 1; the plain Miller sum fixes the sign.
inline BesselArray bessel_j_array(int n_max, double x) {
    if (n_max < 0) throw std::invalid_argument("bessel_j_array: n_max must be >= 0");
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("bessel_j_array: argument must be finite and >= 0");

    BesselArray out;
    out.n_max = n_max;
    out.argument = x;
    out.values.assign(static_cast<size_t>(2 * n_max + 1), 0.0);
    if (x == 0.0) {
        out.values[static_cast<size_t>(n_max)] = 1.0;
        return out;
    }

    int start = detail::recurrence_start(n_max, x);
    std::vector<double> pos(static_cast<size_t>(std::min(start, n_max) + 1), 0.0);
    detail::miller_descent d;
    d.run(x, start, -1, n_max, pos.data());

    double scale = std::sqrt(d.parseval);
    if (d.miller < 0.0) scale = -scale;
    for (int n = 0; n <= n_max; ++n) {
        double v = (n < static_cast<int>(pos.size())) ? pos[static_cast<size_t>(n)] / scale : 0.0;
        out.values[static_cast<size_t>(n_max + n)] = v;
        out.values[static_cast<size_t>(n_max - n)] = (n % 2 == 0) ? v : -v;
    }
    return out;
}

/// Single value J_n(x), n of either sign. O(1) memory regardless of order.
inline double bessel_j(long n, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j: argument must be finite");
    if (x < 0.0) throw std::invalid_argument("bessel_j: argument must be >= 0");
    if (std::labs(n) > 1000000L) throw std::invalid_argument("bessel_j: order out of supported range");

    long na = std::labs(n);
    double refl = (n < 0 && (na % 2 == 1)) ? -1.0 : 1.0; // J_{-n} = (-1)^n J_n
    if (x == 0.0) return na == 0 ? 1.0 : 0.0;

    int start = detail::recurrence_start(static_cast<int>(na), x);
    detail::miller_descent d;
    d.run(x, start, static_cast<int>(na), -1, nullptr);

    double scale = std::sqrt(d.parseval);
    if (d.miller < 0.0) scale = -scale;
    return refl * d.captured / scale;
}

namespace detail {

inline constexpr double airy_ai0 = 0.3550280538878172392601;    // Ai(0)
inline constexpr double airy_aip0 = -0.2588194037928067984052;  // Ai'(0)

// Maclaurin series for Ai and Ai'. Accurate while the condition number
// e^{(2/3)|z|^{3/2}(1+cos(3 arg z/2))} stays small; the dispatcher keeps it
// away from the decaying sector at larger |z|.
inline void airy_series(cplx z, cplx& ai, cplx& aip) {
    const cplx z3 = z * z * z;
    cplx f = 1.0, tf = 1.0;        // sum_k (1/3)_k 3^k z^{3k} / (3k)!
    cplx g = z, tg = z;            // sum_k (2/3)_k 3^k z^{3k+1} / (3k+1)!
    cplx fp = 0.0, tfp;            // f'
    cplx gp = 1.0, tgp = 1.0;      // g'
    tfp = 0.5 * z * z;
    fp = tfp;
    for (int k = 1; k < 200; ++k) {
        double k3 = 3.0 * k;
        tf *= z3 / ((k3 - 1.0) * k3);
        tg *= z3 / (k3 * (k3 + 1.0));
        tfp *= z3 / (k3 * (k3 + 2.0));
        tgp *= z3 / ((k3 - 2.0) * k3);
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        double biggest = std::max(std::max(std::abs(tf), std::abs(tg)),
                                  std::max(std::abs(tfp), std::abs(tgp)));
        if (biggest < 1e-18 * (std::abs(f) + std::abs(g) + 1e-300)) break;
    }
    ai = airy_ai0 * f + airy_aip0 * g;
    aip = airy_ai0 * fp + airy_aip0 * gp;
}

// Poincare expansion, |arg z| <= 2pi/3. Coefficients c_k follow
// c_k = c_{k-1} (6k-5)(6k-1) / (72 k).
inline void airy_asym_direct(cplx z, cplx& ai, cplx& aip) {
    const cplx sz = std::sqrt(z);
    const cplx zeta = (2.0 / 3.0) * z * sz;
    const cplx izeta = 1.0 / zeta;

    cplx sa = 1.0, sap = 1.0;
    double ck = 1.0;
    cplx pk = 1.0;
    double prev = 1e308;
    for (int k = 1; k <= 60; ++k) {
        ck *= (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k);
        double dk = ck * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        pk *= -izeta;
        double mag = ck * std::abs(pk);
        if (mag > prev) break; // asymptotic tail started growing
        prev = mag;
        sa += ck * pk;
        sap += dk * pk;
        if (mag < 1e-18) break;
    }
    const cplx zq = std::sqrt(sz); // z^{1/4}
    const cplx pref = std::exp(-zeta) / (2.0 * std::sqrt(pi));
    ai = pref / zq * sa;
    aip = -pref * zq * sap;
}

// Connection onto |arg| <= 2pi/3 sectors:
//   Ai(z) = -[e^{-2pi i/3} Ai(z e^{-2pi i/3}) + e^{+2pi i/3} Ai(z e^{+2pi i/3})]
inline void airy_asym(cplx z, cplx& ai, cplx& aip) {
    if (std::abs(std::arg(z)) <= 2.0 * pi / 3.0 + 1e-12) {
        airy_asym_direct(z, ai, aip);
        return;
    }
    const cplx rp(-0.5, 0.8660254037844386468); // e^{+2pi i/3}
    const cplx rm = std::conj(rp);
    cplx am, amp, ap, app;
    airy_asym_direct(z * rm, am, amp);
    airy_asym_direct(z * rp, ap, app);
    ai = -(rm * am + rp * ap);
    aip = -(rm * rm * amp + rp * rp * app);
}

// Taylor stepping of w'' = z w along the ray arg z = const, inward from an
// anchor radius where the asymptotic expansion is at machine precision.
// Inward steps are stable: the anchor value is absolutely tiny wherever the
// recessive/dominant contrast is large.
inline void airy_step_from_anchor(cplx z, cplx& ai, cplx& aip) {
    const double r = std::abs(z);
    const double anchor_r = 12.0;
    const cplx dir = z / r;
    cplx a = anchor_r * dir;
    cplx y, yp;
    airy_asym(a, y, yp);

    int nsteps = static_cast<int>(std::ceil((anchor_r - r) / 0.75));
    const cplx delta = (z - a) / static_cast<double>(nsteps);
    for (int s = 0; s < nsteps; ++s) {
        cplx t0 = y, t1 = yp, t2 = 0.5 * a * y;
        cplx sum = t0 + delta * (t1 + delta * t2);
        cplx dsum = t1 + 2.0 * t2 * delta;
        cplx p = delta * delta; // delta^{k+1} entering iteration k
        cplx tkm1 = t0, tk = t1, tkp1 = t2;
        for (int k = 1; k <= 80; ++k) {
            // t_{k+2} = (a t_k + t_{k-1}) / ((k+1)(k+2))
            cplx tkp2 = (a * tk + tkm1) / static_cast<double>((k + 1) * (k + 2));
            dsum += static_cast<double>(k + 2) * tkp2 * p;
            p *= delta; // delta^{k+2}
            sum += tkp2 * p;
            tkm1 = tk;
            tk = tkp1;
            tkp1 = tkp2;
            if (std::abs(tkp2) * std::abs(p) < 1e-20 * (std::abs(sum) + 1e-300) && k > 8) break;
        }
        y = sum;
        yp = dsum;
        a += delta;
    }
    ai = y;
    aip = yp;
}

inline void airy_pair(cplx z, cplx& ai, cplx& aip) {
    const double r = std::abs(z);
    if (r <= 4.0) {
        airy_series(z, ai, aip);
    } else if (r <= 9.0) {
        // Series condition number is exp((2/3)|z|^{3/2} (1 + cos(3 arg z / 2))).
        // Where cancellation would cost more than ~3 digits, step in from the
        // asymptotic anchor instead; that band has little recessive/dominant
        // contrast, so inward stepping holds machine accuracy there.
        double cond_ln = (2.0 / 3.0) * r * std::sqrt(r) *
                         (1.0 + std::cos(1.5 * std::abs(std::arg(z))));
        if (cond_ln <= 8.5) airy_series(z, ai, aip);
        else airy_step_from_anchor(z, ai, aip);
    } else {
        airy_asym(z, ai, aip);
    }
}

} // namespace detail

/// Airy function of the first kind, complex argument.
inline cplx airy_ai(cplx z) {
    if (!is_finite(z)) throw std::invalid_argument("airy_ai: argument must be finite");
    cplx ai, aip;
    detail::airy_pair(z, ai, aip);
    return ai;
}

/// Derivative Ai'(z); used by the same regimes as airy_ai.
inline cplx airy_ai_prime(cplx z) {
    if (!is_finite(z)) throw std::invalid_argument("airy_ai_prime: argument must be finite");
    cplx ai, aip;
    detail::airy_pair(z, ai, aip);
    return aip;
}

} // namespace stawsim::specfun
