#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "darkgate/bloch.hpp"
#include "darkgate/common.hpp"
#include "darkgate/model.hpp"
#include "darkgate/propagator.hpp"
#include "darkgate/pulses.hpp"
#include "darkgate/random.hpp"

namespace darkgate {

/// Everything the gate analysis needs to know about one branch run.
struct BranchPhaseReport {
    BranchId branch{};
    PhaseReport phases{};
    double solid_angle = 0.0;
    double leakage_final = 0.0;
    double closure_gap = 0.0;
};

/// Diagonal gate over the four dark branches, ordered (D1, D2, D1', D2').
struct GateMatrix {
    std::array<cplx, 4> diag{cplx{1.0}, cplx{1.0}, cplx{1.0}, cplx{1.0}};
};

/// diag(1, 1, -1, -1): the ideal conditional phase pattern (0, 0, pi, pi).
inline GateMatrix ideal_gate() {
    return GateMatrix{{cplx{1.0}, cplx{1.0}, cplx{-1.0}, cplx{-1.0}}};
}

/// Cyclicity each branch must reach before its phase enters the gate.
inline constexpr double gate_min_cyclicity = 0.999;

/// Bloch-path projection tolerance for gate runs.
inline constexpr double gate_projection_tol = 0.05;

/// Evolve one branch through the protocol from its t = 0 dark state and
/// collect phases, Bloch-path solid angle and leakage.
inline BranchPhaseReport run_branch(const PulseSchedule& schedule, const IntegratorConfig& cfg,
                                    double min_cyclicity = gate_min_cyclicity) {
    StateVector psi0 = dark_state(schedule.branch(), schedule.sample(0.0));
    TrajectoryRecord traj = evolve(schedule, psi0, cfg);
    BranchPhaseReport rep;
    rep.branch = schedule.branch();
    try {
        rep.phases = aa_phase(traj, min_cyclicity);
    } catch (const numeric_error& e) {
        throw numeric_error("branch " + schedule.branch().label() + ": " + e.what());
    }
    BlochPath path = project_path(traj.states, traj.times, gate_projection_tol);
    rep.closure_gap = path.closure_gap(); // residual gap before geodesic closure
    rep.solid_angle = solid_angle(closed(path));
    rep.leakage_final = traj.final_leakage();
    return rep;
}

/// Run all four dark branches through the protocol. Branch order matches
/// gate_branch_order(); a branch that fails the gate-level cyclicity raises
/// a numeric_error naming it.
inline std::array<BranchPhaseReport, 4> run_gate(const ProtocolSpec& spec,
                                                 const IntegratorConfig& cfg) {
    spec.validate();
    cfg.validate();
    std::array<BranchPhaseReport, 4> reports;
    int i = 0;
    for (const BranchId& b : gate_branch_order()) {
        reports[i++] = run_branch(default_gate_protocol(spec, b), cfg);
    }
    return reports;
}

/// Diagonal of e^{i total_phase} per branch, in fixed order. The total
/// phase (not the geometric part alone) is what a physical run applies.
inline GateMatrix assemble_gate(std::span<const BranchPhaseReport> reports) {
    GateMatrix g;
    std::array<bool, 4> seen{};
    const auto order = gate_branch_order();
    for (const BranchPhaseReport& rep : reports) {
        for (int k = 0; k < 4; ++k) {
            if (rep.branch == order[k]) {
                g.diag[k] = std::exp(cplx(0.0, rep.phases.total_phase));
                seen[k] = true;
            }
        }
    }
    for (int k = 0; k < 4; ++k) {
        if (!seen[k]) {
            throw std::invalid_argument("assemble_gate: missing branch " + order[k].label());
        }
    }
    return g;
}

/// |sum_k conj(target_k) g_k|^2 / 16: squared normalized trace overlap,
/// insensitive to a global phase on either gate.
inline double gate_fidelity(const GateMatrix& g, const GateMatrix& target) {
    cplx acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += std::conj(target.diag[k]) * g.diag[k];
    return std::norm(acc) / 16.0;
}

/// Dynamical-phase control for robustness contrasts: -∫ gap(t) dt, the
/// unwrapped phase a bright eigenstate of the same schedule would
/// accumulate. Composite Simpson over n panels (n made even).
inline double bright_dynamic_phase(const PulseSchedule& s, int panels = 4096) {
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    double w = s.window();
    double h = w / panels;
    double acc = s.gap(0.0) + s.gap(w);
    for (int i = 1; i < panels; ++i) {
        acc += s.gap(i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    }
    return -acc * h / 3.0;
}

struct SweepStats {
    double mean = 0.0;
    double stddev = 0.0;
    double max = 0.0;
};

struct SweepCellResult {
    double amp_rel_sigma = 0.0;
    double timing_rel_sigma = 0.0;
    double offset_sigma = 0.0;
    int trials = 0;
    SweepStats gp_dev;      // max over branches of |wrap(geometric - target)|
    SweepStats leakage;     // max over branches of final leakage
    SweepStats control_dev; // |bright control - unperturbed control|
};

struct SweepResult {
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<SweepCellResult> cells;
};

namespace detail {

inline SweepStats stats_of(const std::vector<double>& xs) {
    SweepStats s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(xs.size()));
    return s;
}

} // namespace detail

/// Monte Carlo robustness sweep: for every grid cell, `trials` noise
/// realizations are drawn (per-trial seed derived from (seed, cell, trial),
/// so results are independent of execution order), the same realization is
/// applied to all four branch schedules, and deviation statistics are
/// aggregated. The geometric target is pi for primed branches and 0 for
/// unprimed ones. Trials never throw: a trial that loses cyclicity still
/// contributes its wrapped AA deviation.
inline SweepResult robustness_sweep(const ProtocolSpec& spec, const IntegratorConfig& cfg,
                                    const NoiseGrid& grid, int trials, std::uint64_t seed) {
    spec.validate();
    cfg.validate();
    if (trials < 1) throw config_error("robustness_sweep: trials must be >= 1");

    SweepResult result;
    result.seed = seed;
    result.trials = trials;

    const double control_ideal =
        bright_dynamic_phase(default_gate_protocol(spec, branches::d1_primed));

    std::uint64_t cell_index = 0;
    for (double sa : grid.amp_sigmas) {
        for (double st : grid.timing_sigmas) {
            for (double so : grid.offset_sigmas) {
                SweepCellResult cell;
                cell.amp_rel_sigma = sa;
                cell.timing_rel_sigma = st;
                cell.offset_sigma = so;
                cell.trials = trials;
                std::vector<double> gp_devs, leaks, ctrl_devs;
                gp_devs.reserve(trials);
                leaks.reserve(trials);
                ctrl_devs.reserve(trials);
                for (int trial = 0; trial < trials; ++trial) {
                    NoiseSpec ns{sa, st, so, derive_seed(seed, cell_index, trial)};
                    double gp_dev = 0.0;
                    double leak = 0.0;
                    for (const BranchId& b : gate_branch_order()) {
                        PulseSchedule sched = perturb(default_gate_protocol(spec, b), ns);
                        StateVector psi0 = dark_state(b, sched.sample(0.0));
                        TrajectoryRecord traj = evolve(sched, psi0, cfg);
                        auto [total, cyc] = total_phase(traj);
                        double gp = wrap_angle(total - dynamic_phase(traj));
                        double target = b.primed ? pi : 0.0;
                        gp_dev = std::max(gp_dev, std::abs(wrap_angle(gp - target)));
                        leak = std::max(leak, traj.final_leakage());
                    }
                    PulseSchedule ctrl_sched =
                        perturb(default_gate_protocol(spec, branches::d1_primed), ns);
                    double ctrl = bright_dynamic_phase(ctrl_sched);
                    gp_devs.push_back(gp_dev);
                    leaks.push_back(leak);
                    ctrl_devs.push_back(std::abs(ctrl - control_ideal));
                }
                cell.gp_dev = detail::stats_of(gp_devs);
                cell.leakage = detail::stats_of(leaks);
                cell.control_dev = detail::stats_of(ctrl_devs);
                result.cells.push_back(cell);
                ++cell_index;
            }
        }
    }
    return result;
}

/// Deterministic global-amplitude-scaling contrast: scales every coupling
/// by each factor and reports the worst geometric-phase deviation from the
/// ideal pattern next to the bright-eigenstate dynamical control phase,
/// which tracks the factor linearly.
struct ScalingContrastRow {
    double factor = 1.0;
    double gp_dev = 0.0;
    double control_phase = 0.0;
};

inline std::vector<ScalingContrastRow> scaling_contrast(const ProtocolSpec& spec,
                                                        const IntegratorConfig& cfg,
                                                        const std::vector<double>& factors) {
    std::vector<ScalingContrastRow> rows;
    rows.reserve(factors.size());
    for (double f : factors) {
        ProtocolSpec s = scaled(spec, f);
        ScalingContrastRow row;
        row.factor = f;
        for (const BranchId& b : gate_branch_order()) {
            PulseSchedule sched = default_gate_protocol(s, b);
            StateVector psi0 = dark_state(b, sched.sample(0.0));
            TrajectoryRecord traj = evolve(sched, psi0, cfg);
            auto [total, cyc] = total_phase(traj);
            double gp = wrap_angle(total - dynamic_phase(traj));
            double target = b.primed ? pi : 0.0;
            row.gp_dev = std::max(row.gp_dev, std::abs(wrap_angle(gp - target)));
        }
        row.control_phase = bright_dynamic_phase(default_gate_protocol(s, branches::d1_primed));
        rows.push_back(row);
    }
    return rows;
}

/// Closed-form dark path of a schedule (mixing angle + governing branch at
/// n uniformly spaced times), for export next to simulated paths.
inline BlochPath protocol_dark_path(const PulseSchedule& s, int n_samples) {
    BlochPath path;
    path.samples.reserve(n_samples);
    path.times.reserve(n_samples);
    double w = s.window();
    for (int i = 0; i < n_samples; ++i) {
        double t = w * i / (n_samples - 1);
        double th = s.mixing(t);
        BranchId g = s.governing(t);
        double sx = g.primed ? -g.sign() : 1.0;
        path.samples.push_back({sx * std::sin(2.0 * th), 0.0, std::cos(2.0 * th)});
        path.times.push_back(t);
    }
    return path;
}

} // namespace darkgate
