#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "darkgate/common.hpp"
#include "darkgate/statevec.hpp"

namespace darkgate {

/// The three coupling strengths, angular frequencies with hbar = 1.
/// lambda2 only enters the unprimed Hamiltonian, lambda3 only the primed one.
struct CouplingSet {
    cplx lambda1{};
    cplx lambda2{};
    cplx lambda3{};
};

inline CouplingSet scaled(const CouplingSet& c, double factor) {
    return {factor * c.lambda1, factor * c.lambda2, factor * c.lambda3};
}

/// One of the four dark branches: alpha in {1, 2}, primed or not.
/// The branch sign is c_1 = -1, c_2 = +1.
struct BranchId {
    int alpha = 1;
    bool primed = false;

    double sign() const { return alpha == 1 ? -1.0 : 1.0; }
    Subspace subspace() const { return primed ? Subspace::primed : Subspace::unprimed; }

    std::string label() const {
        return "D" + std::to_string(alpha) + (primed ? "p" : "");
    }

    void validate() const {
        if (alpha != 1 && alpha != 2) {
            throw std::invalid_argument("BranchId: alpha must be 1 or 2");
        }
    }

    friend bool operator==(const BranchId&, const BranchId&) = default;
};

namespace branches {
inline constexpr BranchId d1{1, false};
inline constexpr BranchId d2{2, false};
inline constexpr BranchId d1_primed{1, true};
inline constexpr BranchId d2_primed{2, true};
} // namespace branches

/// Fixed branch order used for the gate diagonal: (D1, D2, D1', D2').
inline constexpr std::array<BranchId, 4> gate_branch_order() {
    return {branches::d1, branches::d2, branches::d1_primed, branches::d2_primed};
}

/// Dense 3x3 complex matrix, row-major. Model-built instances are Hermitian
/// with an identically zero diagonal.
class Hamiltonian3 {
public:
    Hamiltonian3() = default;

    cplx& operator()(int r, int c) { return m_[3 * r + c]; }
    const cplx& operator()(int r, int c) const { return m_[3 * r + c]; }

    Vec3c apply(const Vec3c& v) const {
        Vec3c out{};
        for (int r = 0; r < 3; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < 3; ++c) acc += m_[3 * r + c] * v[c];
            out[r] = acc;
        }
        return out;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const cplx& z : m_) acc += std::norm(z);
        return std::sqrt(acc);
    }

    bool hermitian(double tol = 1e-12) const {
        double scale = std::max(1.0, frobenius_norm());
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol * scale) return false;
            }
        }
        return true;
    }

    Hamiltonian3& shift_diagonal(double e) {
        for (int i = 0; i < 3; ++i) m_[4 * i] += e;
        return *this;
    }

    friend Hamiltonian3 operator+(Hamiltonian3 a, const Hamiltonian3& b) {
        for (int i = 0; i < 9; ++i) a.m_[i] += b.m_[i];
        return a;
    }

private:
    std::array<cplx, 9> m_{};
};

/// Real spectrum (ascending) and orthonormal eigenvectors of a Hermitian 3x3.
struct Eigensystem3 {
    std::array<double, 3> values{};
    std::array<Vec3c, 3> vectors{};
};

/// Truncated-subspace Hamiltonian for one branch:
///   unprimed: rows ((0,0,l1),(0,0,-l2),(l1*,-l2*,0))
///   primed:   rows ((0,0,l1),(0,0,c_a l3),(l1*, c_a l3*, 0))
inline Hamiltonian3 build_h(const BranchId& branch, const CouplingSet& c) {
    branch.validate();
    Hamiltonian3 h;
    cplx upper = branch.primed ? branch.sign() * c.lambda3 : -c.lambda2;
    h(0, 2) = c.lambda1;
    h(1, 2) = upper;
    h(2, 0) = std::conj(c.lambda1);
    h(2, 1) = std::conj(upper);
    return h;
}

/// Mixing angle in [0, pi/2]: atan2(|l1|, |l2|) unprimed, atan2(|l1|, |l3|) primed.
inline double mixing_angle(const BranchId& branch, const CouplingSet& c) {
    branch.validate();
    double a = std::abs(c.lambda1);
    double b = std::abs(branch.primed ? c.lambda3 : c.lambda2);
    if (a == 0.0 && b == 0.0) {
        throw std::invalid_argument("mixing_angle: all relevant couplings are zero");
    }
    return std::atan2(a, b);
}

/// Zero-energy kernel state of build_h(branch, c). The photonic component
/// (index 2) is exactly zero. Gauge: overall phase chosen so the second
/// component is real nonnegative; when lambda1 = 0 that component vanishes
/// and the first component is made real positive instead.
///
/// For real nonnegative couplings this reproduces the closed forms
/// (cos t, sin t, 0) and (-c_a cos t', sin t', 0) with tan t = l1/l2,
/// tan t' = l1/l3 (up to a global sign for the alpha = 2 primed branch at
/// exactly t' = 0, where the fallback fixes the sign to +1).
inline StateVector dark_state(const BranchId& branch, const CouplingSet& c) {
    branch.validate();
    cplx other = branch.primed ? -branch.sign() * std::conj(c.lambda3) : std::conj(c.lambda2);
    cplx first = std::conj(c.lambda1);
    double n = std::sqrt(std::norm(other) + std::norm(first));
    if (!(n > 0.0)) {
        throw std::invalid_argument("dark_state: degenerate kernel, all relevant couplings are zero");
    }
    Vec3c w{other / n, first / n, cplx{0.0, 0.0}};
    int anchor = (std::abs(w[1]) > 0.0) ? 1 : 0;
    double mag = std::abs(w[anchor]);
    cplx phase = std::conj(w[anchor]) / mag;
    w[0] *= phase;
    w[1] *= phase;
    w[anchor] = mag; // gauge slot exactly real nonnegative
    w[2] = cplx{0.0, 0.0};
    return StateVector{w, branch.subspace()};
}

namespace detail {

inline Vec3c cross_bilinear(const Vec3c& a, const Vec3c& b) {
    return Vec3c{a[1] * b[2] - a[2] * b[1],
                 a[2] * b[0] - a[0] * b[2],
                 a[0] * b[1] - a[1] * b[0]};
}

inline double vec_norm(const Vec3c& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

inline cplx vec_dot(const Vec3c& a, const Vec3c& b) { // conj on a
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

/// Eigenvalues of a Hermitian 3x3 by the trigonometric solution of the
/// characteristic cubic. Returned ascending.
inline std::array<double, 3> hermitian_eigenvalues(const Hamiltonian3& h) {
    double m = (h(0, 0).real() + h(1, 1).real() + h(2, 2).real()) / 3.0;
    // K = H - m I; p = tr(K^2)/6, q = det(K)/2
    Hamiltonian3 k = h;
    k.shift_diagonal(-m);
    double p = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) p += std::norm(k(r, c));
    p /= 6.0;
    cplx det = k(0, 0) * (k(1, 1) * k(2, 2) - k(1, 2) * k(2, 1)) -
               k(0, 1) * (k(1, 0) * k(2, 2) - k(1, 2) * k(2, 0)) +
               k(0, 2) * (k(1, 0) * k(2, 1) - k(1, 1) * k(2, 0));
    double q = det.real() / 2.0;
    if (p <= 0.0) return {m, m, m};
    double sp = std::sqrt(p);
    double disc = std::max(p * p * p - q * q, 0.0);
    double phi = std::atan2(std::sqrt(disc), q) / 3.0;
    std::array<double, 3> ev{m + 2.0 * sp * std::cos(phi + 2.0 * pi / 3.0),
                             m + 2.0 * sp * std::cos(phi - 2.0 * pi / 3.0),
                             m + 2.0 * sp * std::cos(phi)};
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Kernel direction of (H - lambda I), assuming rank 2: the bilinear cross
/// product of two independent rows is annihilated by all three.
inline bool kernel_vector(const Hamiltonian3& h, double lambda, Vec3c& out, double scale) {
    std::array<Vec3c, 3> rows;
    for (int r = 0; r < 3; ++r) {
        rows[r] = {h(r, 0), h(r, 1), h(r, 2)};
        rows[r][r] -= lambda;
    }
    Vec3c best{};
    double best_norm = 0.0;
    for (int i = 0; i < 3; ++i) {
        Vec3c cand = cross_bilinear(rows[i], rows[(i + 1) % 3]);
        double n = vec_norm(cand);
        if (n > best_norm) {
            best_norm = n;
            best = cand;
        }
    }
    if (best_norm <= 1e-13 * scale * scale) return false;
    for (cplx& z : best) z /= best_norm;
    out = best;
    return true;
}

/// Cyclic complex Jacobi diagonalization. Unconditionally convergent;
/// used when the closed-form route loses accuracy (degenerate spectra).
inline Eigensystem3 jacobi_eigensystem(Hamiltonian3 a) {
    std::array<Vec3c, 3> v{Vec3c{1.0, 0.0, 0.0}, Vec3c{0.0, 1.0, 0.0}, Vec3c{0.0, 0.0, 1.0}};
    double scale = std::max(a.frobenius_norm(), 1e-300);
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = std::sqrt(std::norm(a(0, 1)) + std::norm(a(0, 2)) + std::norm(a(1, 2)));
        if (off <= 1e-16 * scale) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                cplx apq = a(p, q);
                if (std::abs(apq) == 0.0) continue;
                double phase_angle = std::arg(apq);
                double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * std::abs(apq));
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double cth = 1.0 / std::sqrt(1.0 + t * t);
                double sth = t * cth;
                cplx s = sth * std::exp(cplx(0.0, phase_angle));
                // unitary J: J(p,p)=c, J(p,q)=s, J(q,p)=-conj(s), J(q,q)=c; A <- J^H A J
                Hamiltonian3 an = a;
                for (int r = 0; r < 3; ++r) {
                    cplx arp = a(r, p), arq = a(r, q);
                    an(r, p) = cth * arp - std::conj(s) * arq;
                    an(r, q) = s * arp + cth * arq;
                }
                a = an;
                for (int r = 0; r < 3; ++r) {
                    cplx apr = a(p, r), aqr = a(q, r);
                    an(p, r) = cth * apr - s * aqr;
                    an(q, r) = std::conj(s) * apr + cth * aqr;
                }
                a = an;
                for (int r = 0; r < 3; ++r) {
                    cplx vp = v[r][p], vq = v[r][q];
                    v[r][p] = cth * vp - std::conj(s) * vq;
                    v[r][q] = s * vp + cth * vq;
                }
            }
        }
    }
    Eigensystem3 es;
    std::array<int, 3> order{0, 1, 2};
    std::array<double, 3> diag{a(0, 0).real(), a(1, 1).real(), a(2, 2).real()};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] < diag[j]; });
    for (int k = 0; k < 3; ++k) {
        es.values[k] = diag[order[k]];
        for (int r = 0; r < 3; ++r) es.vectors[k][r] = v[r][order[k]];
    }
    return es;
}

inline double eigen_residual(const Hamiltonian3& h, const Eigensystem3& es) {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        Vec3c hv = h.apply(es.vectors[k]);
        double r = 0.0;
        for (int i = 0; i < 3; ++i) r += std::norm(hv[i] - es.values[k] * es.vectors[k][i]);
        worst = std::max(worst, std::sqrt(r));
        for (int j = 0; j < 3; ++j) {
            double g = std::abs(vec_dot(es.vectors[k], es.vectors[j]) - (k == j ? 1.0 : 0.0));
            worst = std::max(worst, g);
        }
    }
    return worst;
}

} // namespace detail

/// Full eigensystem of a Hermitian 3x3. Closed-form trigonometric
/// eigenvalues with cross-product eigenvectors; accepted only if the
/// residuals meet the contract, otherwise a Jacobi pass takes over.
inline Eigensystem3 eigensystem(const Hamiltonian3& h) {
    if (!h.hermitian()) {
        throw std::invalid_argument("eigensystem: input is not Hermitian");
    }
    double scale = h.frobenius_norm();
    if (scale <= 1e-300) {
        Eigensystem3 es;
        es.values = {0.0, 0.0, 0.0};
        es.vectors = {Vec3c{1.0, 0.0, 0.0}, Vec3c{0.0, 1.0, 0.0}, Vec3c{0.0, 0.0, 1.0}};
        return es;
    }

    Eigensystem3 es;
    es.values = detail::hermitian_eigenvalues(h);
    bool ok = true;
    for (int k = 0; k < 3 && ok; ++k) {
        Vec3c v;
        if (!detail::kernel_vector(h, es.values[k], v, scale)) {
            ok = false;
            break;
        }
        // Gram-Schmidt against previously accepted vectors; guards repeated roots.
        for (int j = 0; j < k; ++j) {
            cplx proj = detail::vec_dot(es.vectors[j], v);
            for (int i = 0; i < 3; ++i) v[i] -= proj * es.vectors[j][i];
        }
        double n = detail::vec_norm(v);
        if (n <= 1e-8) {
            ok = false;
            break;
        }
        for (cplx& z : v) z /= n;
        es.vectors[k] = v;
    }
    if (ok && detail::eigen_residual(h, es) < 1e-11 * std::max(1.0, scale)) {
        return es;
    }
    return detail::jacobi_eigensystem(h);
}

/// Largest |eigenvalue|. For model-built matrices this is
/// sqrt(|l1|^2 + |l2 or l3|^2).
inline double spectral_radius(const Hamiltonian3& h) {
    auto ev = detail::hermitian_eigenvalues(h);
    return std::max(std::abs(ev[0]), std::abs(ev[2]));
}

} // namespace darkgate
