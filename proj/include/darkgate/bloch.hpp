#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "darkgate/common.hpp"
#include "darkgate/model.hpp"
#include "darkgate/statevec.hpp"

namespace darkgate {

struct BlochVector {
    double nx = 0.0;
    double ny = 0.0;
    double nz = 1.0;
};

namespace detail {

inline double dot(const BlochVector& a, const BlochVector& b) {
    return a.nx * b.nx + a.ny * b.ny + a.nz * b.nz;
}

inline BlochVector cross(const BlochVector& a, const BlochVector& b) {
    return {a.ny * b.nz - a.nz * b.ny, a.nz * b.nx - a.nx * b.nz, a.nx * b.ny - a.ny * b.nx};
}

inline double bloch_norm(const BlochVector& a) { return std::sqrt(dot(a, a)); }

inline BlochVector normalized(const BlochVector& a) {
    double n = bloch_norm(a);
    if (!(n > 0.0)) throw std::invalid_argument("bloch: cannot normalize zero vector");
    return {a.nx / n, a.ny / n, a.nz / n};
}

/// Angle subtended by two unit vectors, robust near 0 and pi.
inline double angle_between(const BlochVector& a, const BlochVector& b) {
    return std::atan2(bloch_norm(cross(a, b)), dot(a, b));
}

/// Geodesic interpolation between unit vectors (u in [0, 1]).
inline BlochVector slerp(const BlochVector& a, const BlochVector& b, double u) {
    double ang = angle_between(a, b);
    if (ang < 1e-12) return a;
    double sa = std::sin((1.0 - u) * ang) / std::sin(ang);
    double sb = std::sin(u * ang) / std::sin(ang);
    return {sa * a.nx + sb * b.nx, sa * a.ny + sb * b.ny, sa * a.nz + sb * b.nz};
}

} // namespace detail

/// Time-ordered path of unit Bloch vectors. times may be empty (index
/// parameterization) or match samples in length.
struct BlochPath {
    std::vector<BlochVector> samples;
    std::vector<double> times;

    /// Great-circle angle between the first and last sample.
    double closure_gap() const {
        if (samples.size() < 2) return 0.0;
        return detail::angle_between(samples.front(), samples.back());
    }
};

/// Bloch mapping n = <psi|sigma|psi> of the renormalized two-component
/// restriction to basis slots (0, 1). The population outside those slots
/// must not exceed tol.
inline BlochVector project(const StateVector& psi, double tol = 1e-2) {
    double n2 = norm_squared(psi);
    if (!(n2 > 0.0)) throw std::invalid_argument("project: zero state");
    double pop01 = std::norm(psi.amps[0]) + std::norm(psi.amps[1]);
    if (pop01 < (1.0 - tol) * n2) {
        throw numeric_error("project: population outside the two-level subspace exceeds tol");
    }
    cplx a0 = psi.amps[0];
    cplx a1 = psi.amps[1];
    cplx c = std::conj(a0) * a1;
    return {2.0 * c.real() / pop01, 2.0 * c.imag() / pop01,
            (std::norm(a0) - std::norm(a1)) / pop01};
}

inline BlochPath project_path(const std::vector<StateVector>& states,
                              const std::vector<double>& times, double tol = 1e-2) {
    BlochPath path;
    path.samples.reserve(states.size());
    for (const StateVector& s : states) path.samples.push_back(project(s, tol));
    path.times = times;
    return path;
}

/// Closed-form dark-state path: n = (sin 2t, 0, cos 2t) unprimed and
/// n = (-c_a sin 2t', 0, cos 2t') primed.
inline BlochPath dark_path(const BranchId& branch, const std::vector<double>& theta_samples) {
    branch.validate();
    BlochPath path;
    path.samples.reserve(theta_samples.size());
    double sx = branch.primed ? -branch.sign() : 1.0;
    for (double th : theta_samples) {
        path.samples.push_back({sx * std::sin(2.0 * th), 0.0, std::cos(2.0 * th)});
    }
    return path;
}

namespace detail {

/// Signed area of the spherical triangle (a, b, c) via Van Oosterom-Strackee:
/// tan(Omega/2) = a.(b x c) / (1 + a.b + b.c + c.a). Positive when (a, b, c)
/// run counterclockwise seen from outside the sphere.
inline bool triangle_excess(const BlochVector& a, const BlochVector& b, const BlochVector& c,
                            double& out) {
    double num = dot(a, cross(b, c));
    double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    if (std::abs(den) < 1e-9 && std::abs(num) < 1e-9) return false;
    out = 2.0 * std::atan2(num, den);
    return true;
}

inline bool fan_area(const std::vector<BlochVector>& pts, const BlochVector& axis, double& out) {
    double total = 0.0;
    std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
        double tri = 0.0;
        if (!triangle_excess(axis, pts[i], pts[(i + 1) % m], tri)) return false;
        total += tri;
    }
    out = total;
    return true;
}

} // namespace detail

/// Oriented solid angle of a closed Bloch path, in steradians, reported in
/// (-4 pi, 4 pi). Counterclockwise-seen-from-outside is positive, matching
/// geometric_phase = -solid_angle / 2 (mod 2 pi) for two-level evolutions.
///
/// Triangle-fan algorithm: signed excesses of (axis, n_i, n_i+1) summed
/// around the loop; exact for geodesic polygons, robust at the poles. The
/// fan axis is the sample centroid, falling back to the loop's area vector
/// (great circles average to zero) and then to a direction orthogonal to
/// the first sample. Segments are subdivided so every triangle side along
/// the path stays below pi/64; a closing geodesic segment covers chord gaps
/// below the closure tolerance.
inline double solid_angle(const BlochPath& path) {
    const std::vector<BlochVector>& raw = path.samples;
    if (raw.size() < 3) return 0.0;
    if (path.closure_gap() >= 1e-3) {
        throw numeric_error("solid_angle: path is not closed (gap " +
                            std::to_string(path.closure_gap()) + " rad)");
    }

    std::vector<BlochVector> pts;
    pts.reserve(raw.size());
    const double max_step = pi / 64.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        BlochVector a = detail::normalized(raw[i]);
        BlochVector b = detail::normalized(raw[(i + 1) % raw.size()]);
        double ang = detail::angle_between(a, b);
        if (ang >= pi - 1e-9) {
            throw numeric_error("solid_angle: consecutive samples are antipodal; "
                                "path is too sparse to orient");
        }
        pts.push_back(a);
        if (ang > max_step) {
            int extra = static_cast<int>(std::ceil(ang / max_step)) - 1;
            for (int k = 1; k <= extra; ++k) {
                pts.push_back(detail::slerp(a, b, static_cast<double>(k) / (extra + 1)));
            }
        }
    }

    // Degenerate (single-point) paths enclose nothing.
    double spread = 0.0;
    for (const BlochVector& p : pts) spread = std::max(spread, detail::angle_between(pts[0], p));
    if (spread < 1e-12) return 0.0;

    std::vector<BlochVector> axes;
    BlochVector mean{0.0, 0.0, 0.0};
    for (const BlochVector& p : pts) {
        mean.nx += p.nx;
        mean.ny += p.ny;
        mean.nz += p.nz;
    }
    if (detail::bloch_norm(mean) > 1e-6 * static_cast<double>(pts.size())) {
        axes.push_back(detail::normalized(mean));
    }
    BlochVector area{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        BlochVector c = detail::cross(pts[i], pts[(i + 1) % pts.size()]);
        area.nx += c.nx;
        area.ny += c.ny;
        area.nz += c.nz;
    }
    if (detail::bloch_norm(area) > 1e-9) {
        axes.push_back(detail::normalized(area));
    }
    BlochVector seed = std::abs(pts[0].nx) < 0.9 ? BlochVector{1.0, 0.0, 0.0}
                                                 : BlochVector{0.0, 1.0, 0.0};
    BlochVector ortho = detail::cross(pts[0], seed);
    axes.push_back(detail::normalized(ortho));
    axes.push_back(detail::normalized(detail::cross(pts[0], ortho)));

    for (const BlochVector& axis : axes) {
        double total = 0.0;
        if (detail::fan_area(pts, axis, total)) {
            return std::fmod(total, 4.0 * pi);
        }
    }
    throw numeric_error("solid_angle: no well-conditioned fan axis found");
}

/// Path with reversed traversal order (flips the solid angle sign).
inline BlochPath reversed(const BlochPath& path) {
    BlochPath out = path;
    std::reverse(out.samples.begin(), out.samples.end());
    std::reverse(out.times.begin(), out.times.end());
    return out;
}

/// Geodesic closure: append the first sample so the loop closes exactly.
/// This is how projectively-cyclic evolutions enter solid_angle: an
/// almost-cyclic run ends within ~sqrt(leakage) of its start, and the
/// Aharonov-Anandan construction closes that residual gap along the
/// shortest geodesic. The thin closing sliver changes the area at
/// O(gap^2).
inline BlochPath closed(const BlochPath& path) {
    BlochPath out = path;
    if (!out.samples.empty() && out.closure_gap() > 0.0) {
        out.samples.push_back(out.samples.front());
        if (!out.times.empty()) out.times.push_back(out.times.back());
    }
    return out;
}

} // namespace darkgate
