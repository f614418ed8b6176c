#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace stawsim {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Thrown when a request belongs to a different physical regime
/// (e.g. asking for an adiabatic interaction parameter at zero detuning).
class regime_error : public std::runtime_error {
public:
    explicit regime_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a numerical-quality monitor trips (norm drift, lattice
/// truncation). The message names the failed monitor.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// i^e for integer e of either sign.
inline cplx ipow(long e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

} // namespace stawsim
