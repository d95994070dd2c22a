#pragma once

#include <cmath>
#include <complex>
#include <array>
#include <stdexcept>
#include <string>

namespace darkgate {

using cplx = std::complex<double>;
using Vec3c = std::array<cplx, 3>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Invalid run specification or malformed input file. CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure at run time: lost cyclicity, open Bloch path,
/// degenerate kernel. CLI exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Wrap an angle into (-pi, pi]. All reported angles use this convention.
inline double wrap_angle(double x) {
    double y = std::remainder(x, two_pi);
    if (y <= -pi) y += two_pi;
    return y;
}

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline bool is_finite(const Vec3c& v) {
    return is_finite(v[0]) && is_finite(v[1]) && is_finite(v[2]);
}

} // namespace darkgate
