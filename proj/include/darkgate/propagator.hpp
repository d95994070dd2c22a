#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "darkgate/common.hpp"
#include "darkgate/model.hpp"
#include "darkgate/pulses.hpp"
#include "darkgate/statevec.hpp"

namespace darkgate {

struct IntegratorConfig {
    int steps_per_stage = 2000;
    bool renormalize_each_step = true;
    int record_stride = 1;

    void validate() const {
        if (steps_per_stage < 100) {
            throw config_error("IntegratorConfig: steps_per_stage must be >= 100");
        }
        if (record_stride < 1) {
            throw config_error("IntegratorConfig: record_stride must be >= 1");
        }
    }
};

/// Time-sampled history of one evolution. leakage is 1 - |<ref(t)|psi(t)>|^2
/// against the governing instantaneous dark state for schedule-driven runs;
/// general-Hamiltonian runs without a reference section record the photonic
/// (third-component) population instead.
struct TrajectoryRecord {
    BranchId branch{};
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<CouplingSet> couplings;
    std::vector<double> energy_expect;
    std::vector<double> dyn_phase_acc;
    std::vector<double> leakage;

    const StateVector& initial_state() const { return states.front(); }
    const StateVector& final_state() const { return states.back(); }
    double final_leakage() const { return leakage.back(); }
};

/// Cyclic-evolution phase decomposition:
/// geometric_phase = wrap(total_phase - dynamic_phase). The dynamic phase is
/// kept as an unwrapped real so the subtraction cannot alias mod 2 pi.
struct PhaseReport {
    double total_phase = 0.0;
    double dynamic_phase = 0.0;
    double geometric_phase = 0.0;
    double cyclicity_fidelity = 0.0;
};

using HamiltonianFn = std::function<Hamiltonian3(double)>;
using SectionFn = std::function<StateVector(double)>;

namespace detail {

inline Vec3c rk4_rhs(const Hamiltonian3& h, const Vec3c& psi) {
    Vec3c hv = h.apply(psi);
    const cplx minus_i(0.0, -1.0);
    return {minus_i * hv[0], minus_i * hv[1], minus_i * hv[2]};
}

inline Vec3c axpy(const Vec3c& x, double a, const Vec3c& y) {
    return {x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]};
}

inline double ref_leakage(const SectionFn& ref, double t, const StateVector& psi) {
    if (ref) {
        StateVector d = ref(t);
        return std::max(0.0, 1.0 - fidelity(d, psi) / norm_squared(psi));
    }
    return std::norm(psi.amps[2]) / norm_squared(psi);
}

/// h * g_max < 0.1 guard: the fixed step must resolve the fastest phase.
inline void check_step_size(const std::function<double(double)>& gap_fn, double window, double h) {
    double gmax = 0.0;
    const int probes = 512;
    for (int i = 0; i <= probes; ++i) {
        gmax = std::max(gmax, gap_fn(window * i / probes));
    }
    if (h * gmax >= 0.1) {
        throw config_error("IntegratorConfig: step size h*g_max = " + std::to_string(h * gmax) +
                           " violates h*g_max < 0.1; increase steps_per_stage");
    }
}

} // namespace detail

/// Integrate i dpsi/dt = H(t) psi over [0, window] with the classical
/// fixed-step fourth-order Runge-Kutta scheme, sampling H at the substep
/// midpoints. Samples are recorded every record_stride steps (the final
/// step is always recorded); energy and the running dynamic phase are
/// accumulated by the trapezoid rule over recorded samples.
inline TrajectoryRecord evolve(const HamiltonianFn& hfn, double window, const StateVector& psi0,
                               const IntegratorConfig& cfg, const SectionFn& reference = {},
                               BranchId branch = {}) {
    cfg.validate();
    if (!(window > 0.0) || !std::isfinite(window)) {
        throw config_error("evolve: window must be positive and finite");
    }
    const int total_steps = 2 * cfg.steps_per_stage;
    const double h = window / total_steps;
    detail::check_step_size([&](double t) { return spectral_radius(hfn(t)); }, window, h);
    if (std::abs(norm(psi0) - 1.0) > 1e-6) {
        throw std::invalid_argument("evolve: initial state must be normalized");
    }

    TrajectoryRecord rec;
    rec.branch = branch;
    std::size_t reserve = static_cast<std::size_t>(total_steps / cfg.record_stride) + 2;
    rec.times.reserve(reserve);
    rec.states.reserve(reserve);
    rec.energy_expect.reserve(reserve);
    rec.dyn_phase_acc.reserve(reserve);
    rec.leakage.reserve(reserve);

    StateVector psi = psi0;
    auto energy_at = [&](double t, const StateVector& s) {
        Vec3c hv = hfn(t).apply(s.amps);
        cplx e = std::conj(s.amps[0]) * hv[0] + std::conj(s.amps[1]) * hv[1] +
                 std::conj(s.amps[2]) * hv[2];
        return e.real() / norm_squared(s);
    };

    double dyn_acc = 0.0;
    double last_rec_t = 0.0;
    double last_rec_e = energy_at(0.0, psi);
    auto record = [&](double t, double e) {
        dyn_acc += -0.5 * (last_rec_e + e) * (t - last_rec_t);
        last_rec_t = t;
        last_rec_e = e;
        rec.times.push_back(t);
        rec.states.push_back(psi);
        rec.couplings.push_back(CouplingSet{});
        rec.energy_expect.push_back(e);
        rec.dyn_phase_acc.push_back(dyn_acc);
        rec.leakage.push_back(detail::ref_leakage(reference, t, psi));
    };

    rec.times.push_back(0.0);
    rec.states.push_back(psi);
    rec.couplings.push_back(CouplingSet{});
    rec.energy_expect.push_back(last_rec_e);
    rec.dyn_phase_acc.push_back(0.0);
    rec.leakage.push_back(detail::ref_leakage(reference, 0.0, psi));

    for (int k = 0; k < total_steps; ++k) {
        double t = k * h;
        Hamiltonian3 h0 = hfn(t);
        Hamiltonian3 hm = hfn(t + 0.5 * h);
        Hamiltonian3 h1 = hfn(t + h);
        Vec3c k1 = detail::rk4_rhs(h0, psi.amps);
        Vec3c k2 = detail::rk4_rhs(hm, detail::axpy(psi.amps, 0.5 * h, k1));
        Vec3c k3 = detail::rk4_rhs(hm, detail::axpy(psi.amps, 0.5 * h, k2));
        Vec3c k4 = detail::rk4_rhs(h1, detail::axpy(psi.amps, h, k3));
        for (int i = 0; i < 3; ++i) {
            psi.amps[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (cfg.renormalize_each_step) {
            double n = norm(psi);
            for (cplx& a : psi.amps) a /= n;
        }
        if (!is_finite(psi.amps)) {
            throw numeric_error("evolve: state became non-finite at t = " + std::to_string(t + h));
        }
        bool last = (k + 1 == total_steps);
        if ((k + 1) % cfg.record_stride == 0 || last) {
            double tk = last ? window : (k + 1) * h;
            record(tk, energy_at(tk, psi));
        }
    }
    return rec;
}

/// Schedule-driven evolution: H(t) from the schedule's governing branch,
/// leakage against its instantaneous dark state, couplings recorded.
inline TrajectoryRecord evolve(const PulseSchedule& s, const StateVector& psi0,
                               const IntegratorConfig& cfg) {
    TrajectoryRecord rec = evolve([&](double t) { return s.hamiltonian(t); }, s.window(), psi0, cfg,
                                  [&](double t) { return s.dark(t); }, s.branch());
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        rec.couplings[i] = s.sample(rec.times[i]);
    }
    return rec;
}

/// -∫ <psi|H|psi> dt over the recorded samples (trapezoid), as an unwrapped
/// real number.
inline double dynamic_phase(const TrajectoryRecord& traj) {
    if (traj.times.empty()) {
        throw std::invalid_argument("dynamic_phase: empty trajectory");
    }
    return traj.dyn_phase_acc.back();
}

/// (arg<psi(0)|psi(end)>, |<psi(0)|psi(end)>|^2). The caller decides whether
/// the cyclicity fidelity is acceptable.
inline std::pair<double, double> total_phase(const TrajectoryRecord& traj) {
    if (traj.states.size() < 2) {
        throw std::invalid_argument("total_phase: trajectory has fewer than two samples");
    }
    cplx ov = inner(traj.initial_state(), traj.final_state());
    if (std::abs(ov) <= 1e-6) {
        throw numeric_error("total_phase: initial/final overlap is near zero, phase undefined");
    }
    return {wrap_angle(std::arg(ov)), std::norm(ov)};
}

/// Aharonov-Anandan decomposition: the remnant after removing the dynamic
/// phase from the total phase of a (projectively) cyclic evolution.
inline PhaseReport aa_phase(const TrajectoryRecord& traj, double min_cyclicity = 0.99) {
    auto [total, cyc] = total_phase(traj);
    if (cyc < min_cyclicity) {
        throw numeric_error("aa_phase: evolution is not cyclic (fidelity " + std::to_string(cyc) +
                            " < " + std::to_string(min_cyclicity) + ")");
    }
    PhaseReport rep;
    rep.total_phase = total;
    rep.dynamic_phase = dynamic_phase(traj);
    rep.geometric_phase = wrap_angle(rep.total_phase - rep.dynamic_phase);
    rep.cyclicity_fidelity = cyc;
    return rep;
}

} // namespace darkgate
