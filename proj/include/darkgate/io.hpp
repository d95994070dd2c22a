#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "darkgate/bloch.hpp"
#include "darkgate/config.hpp"
#include "darkgate/gate.hpp"
#include "darkgate/propagator.hpp"

namespace darkgate {

// CSV artifacts: decimal values at 17 significant digits, newline-terminated
// rows, one `# config_hash=... seed=...` header line. Identical inputs must
// produce byte-identical bodies.

inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void write_artifact_header(std::ostream& out, std::uint64_t cfg_hash, std::uint64_t seed) {
    out << "# config_hash=" << hash_hex(cfg_hash) << " seed=" << seed << "\n";
}

inline void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj,
                                 std::uint64_t cfg_hash, std::uint64_t seed) {
    write_artifact_header(out, cfg_hash, seed);
    out << "t,re_a0,im_a0,re_a1,im_a1,re_a2,im_a2,energy_expect,dyn_phase_acc,leakage\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Vec3c& a = traj.states[i].amps;
        out << fmt17(traj.times[i]);
        for (int k = 0; k < 3; ++k) {
            out << ',' << fmt17(a[k].real()) << ',' << fmt17(a[k].imag());
        }
        out << ',' << fmt17(traj.energy_expect[i]) << ',' << fmt17(traj.dyn_phase_acc[i]) << ','
            << fmt17(traj.leakage[i]) << "\n";
    }
}

inline void write_bloch_csv(std::ostream& out, const BlochPath& path, std::uint64_t cfg_hash,
                            std::uint64_t seed) {
    write_artifact_header(out, cfg_hash, seed);
    out << "t,nx,ny,nz\n";
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        double t = path.times.empty() ? static_cast<double>(i) : path.times[i];
        const BlochVector& n = path.samples[i];
        out << fmt17(t) << ',' << fmt17(n.nx) << ',' << fmt17(n.ny) << ',' << fmt17(n.nz) << "\n";
    }
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& sweep, std::uint64_t cfg_hash) {
    write_artifact_header(out, cfg_hash, sweep.seed);
    out << "amp_rel_sigma,timing_rel_sigma,offset_sigma,trials,"
           "gp_dev_mean,gp_dev_std,gp_dev_max,"
           "leak_mean,leak_std,leak_max,"
           "ctrl_dev_mean,ctrl_dev_std,ctrl_dev_max\n";
    for (const SweepCellResult& c : sweep.cells) {
        out << fmt17(c.amp_rel_sigma) << ',' << fmt17(c.timing_rel_sigma) << ','
            << fmt17(c.offset_sigma) << ',' << c.trials << ',' << fmt17(c.gp_dev.mean) << ','
            << fmt17(c.gp_dev.stddev) << ',' << fmt17(c.gp_dev.max) << ',' << fmt17(c.leakage.mean)
            << ',' << fmt17(c.leakage.stddev) << ',' << fmt17(c.leakage.max) << ','
            << fmt17(c.control_dev.mean) << ',' << fmt17(c.control_dev.stddev) << ','
            << fmt17(c.control_dev.max) << "\n";
    }
}

/// Machine-readable gate report. The config hash and seed lead the document
/// (JSON cannot carry the CSV comment header).
inline nlohmann::json gate_report_json(std::span<const BranchPhaseReport> reports,
                                       const GateMatrix& gate, double fidelity_vs_ideal,
                                       std::uint64_t cfg_hash, std::uint64_t seed) {
    nlohmann::json doc;
    doc["config_hash"] = hash_hex(cfg_hash);
    doc["seed"] = seed;
    nlohmann::json br = nlohmann::json::object();
    for (const BranchPhaseReport& r : reports) {
        br[r.branch.label()] = {
            {"total_phase", r.phases.total_phase},
            {"dynamic_phase", r.phases.dynamic_phase},
            {"geometric_phase", r.phases.geometric_phase},
            {"cyclicity_fidelity", r.phases.cyclicity_fidelity},
            {"solid_angle", r.solid_angle},
            {"leakage_final", r.leakage_final},
            {"closure_gap", r.closure_gap},
        };
    }
    doc["branches"] = br;
    nlohmann::json diag = nlohmann::json::array();
    for (const cplx& z : gate.diag) {
        diag.push_back({{"re", z.real()}, {"im", z.imag()}});
    }
    doc["gate"] = {{"diag", diag}, {"fidelity_vs_ideal", fidelity_vs_ideal}};
    return doc;
}

} // namespace darkgate
