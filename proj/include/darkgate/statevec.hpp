#pragma once

#include <cmath>
#include <string>

#include "darkgate/common.hpp"

namespace darkgate {

/// Which truncated three-ket subspace the amplitudes refer to.
enum class Subspace : unsigned char { unprimed, primed };

inline const char* to_string(Subspace s) {
    return s == Subspace::primed ? "primed" : "unprimed";
}

/// State vector over one truncated subspace. Basis order is fixed:
///   index 0 = |e1 g2 0>-type, 1 = |g1 e2 0>-type, 2 = |g1 g2 1>-type,
/// so "the photonic component" is always amps[2].
struct StateVector {
    Vec3c amps{};
    Subspace basis_tag = Subspace::unprimed;
};

namespace detail {

inline void require_same_basis(const StateVector& a, const StateVector& b) {
    if (a.basis_tag != b.basis_tag) {
        throw std::invalid_argument(std::string("basis tag mismatch: ") +
                                    to_string(a.basis_tag) + " vs " + to_string(b.basis_tag));
    }
}

} // namespace detail

/// <a|b> with conjugation on a. Both states must live in the same subspace.
inline cplx inner(const StateVector& a, const StateVector& b) {
    detail::require_same_basis(a, b);
    cplx acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += std::conj(a.amps[i]) * b.amps[i];
    return acc;
}

inline double norm_squared(const StateVector& v) {
    double acc = 0.0;
    for (const cplx& a : v.amps) acc += std::norm(a);
    return acc;
}

inline double norm(const StateVector& v) { return std::sqrt(norm_squared(v)); }

inline StateVector normalize(const StateVector& v) {
    double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("normalize: zero or non-finite state vector");
    }
    StateVector out = v;
    for (cplx& a : out.amps) a /= n;
    return out;
}

/// arg<a|b> in (-pi, pi]. Requires |<a|b>| > 1e-6; the phase of a
/// near-orthogonal pair is meaningless.
inline double overlap_phase(const StateVector& a, const StateVector& b) {
    cplx ov = inner(a, b);
    if (std::abs(ov) <= 1e-6) {
        throw numeric_error("overlap_phase: inputs are near-orthogonal, phase undefined");
    }
    return wrap_angle(std::arg(ov));
}

/// |<a|b>|^2, insensitive to global phases on either argument.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner(a, b));
}

} // namespace darkgate
