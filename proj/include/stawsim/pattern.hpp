#pragma once

#include <cmath>
#include <map>

#include "stawsim/core.hpp"

namespace stawsim {

/// Diffraction probabilities over photon-momentum transfer n, plus the
/// truncation bookkeeping needed to account for the (tiny) mass outside
/// the computed support.
struct DiffractionPattern {
    std::map<int, double> probabilities; // n -> W_n
    int truncation_bound = 0;            // support used: |n| <= truncation_bound
    double dropped_mass = 0.0;           // input mass minus sum of W_n

    double w(int n) const {
        auto it = probabilities.find(n);
        return it == probabilities.end() ? 0.0 : it->second;
    }

    double total() const {
        double s = 0.0;
        for (const auto& [n, w] : probabilities) s += w;
        return s;
    }

    void renormalize() {
        double s = total();
        if (s <= 0.0) throw std::invalid_argument("DiffractionPattern: cannot renormalize empty pattern");
        for (auto& [n, w] : probabilities) w /= s;
        dropped_mass = 0.0;
    }

    /// First moment sum_n n W_n, in units of one photon momentum.
    double first_moment() const {
        double s = 0.0;
        for (const auto& [n, w] : probabilities) s += n * w;
        return s;
    }

    double forward_fraction() const {
        double s = 0.0;
        for (const auto& [n, w] : probabilities)
            if (n > 0) s += w;
        return s;
    }

    /// Lattice site of the largest probability, refined by quadratic
    /// interpolation through the three values around the maximum.
    double peak_site_interpolated() const {
        int best = 0;
        double wb = -1.0;
        for (const auto& [n, w] : probabilities)
            if (w > wb) { wb = w; best = n; }
        // adjacent populated sites are 2 apart on even-only patterns
        int step = probabilities.count(best + 1) || probabilities.count(best - 1) ? 1 : 2;
        double y1 = w(best - step), y2 = wb, y3 = w(best + step);
        double den = y1 - 2.0 * y2 + y3;
        if (den == 0.0) return best;
        return best + step * 0.5 * (y1 - y3) / den;
    }
};

} // namespace stawsim
