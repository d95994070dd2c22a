// Command-line front end: gate runs, robustness sweeps and Bloch-path
// exports driven by a key = value run manifest.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure
// (lost cyclicity / open path).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "darkgate/darkgate.hpp"

namespace fs = std::filesystem;
using namespace darkgate;

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

RunConfig load_and_override(const CliOptions& opt) {
    RunConfig cfg = load_config(opt.config_path);
    if (opt.out_dir) cfg.out_dir = *opt.out_dir;
    if (opt.seed) {
        cfg.seed = *opt.seed;
        cfg.noise.seed = *opt.seed;
    }
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw config_error("cannot write '" + p.string() + "'");
    return out;
}

int cmd_run(const CliOptions& opt) {
    RunConfig cfg = load_and_override(opt);
    std::uint64_t hash = config_hash(cfg);
    fs::create_directories(cfg.out_dir);

    auto reports = run_gate(cfg.protocol, cfg.integrator);
    GateMatrix gate = assemble_gate(reports);
    double fid = gate_fidelity(gate, ideal_gate());

    for (const BranchId& b : gate_branch_order()) {
        PulseSchedule sched = default_gate_protocol(cfg.protocol, b);
        StateVector psi0 = dark_state(b, sched.sample(0.0));
        TrajectoryRecord traj = evolve(sched, psi0, cfg.integrator);
        auto traj_out = open_out(fs::path(cfg.out_dir) / ("traj_" + b.label() + ".csv"));
        write_trajectory_csv(traj_out, traj, hash, cfg.seed);
        BlochPath sim = project_path(traj.states, traj.times, gate_projection_tol);
        auto bloch_out = open_out(fs::path(cfg.out_dir) / ("bloch_" + b.label() + "_sim.csv"));
        write_bloch_csv(bloch_out, sim, hash, cfg.seed);
    }

    auto report_out = open_out(fs::path(cfg.out_dir) / "gate_report.json");
    report_out << gate_report_json(reports, gate, fid, hash, cfg.seed).dump(2) << "\n";

    if (!opt.quiet) {
        std::cout << "gate report (" << cfg.out_dir << "/gate_report.json)\n";
        for (const BranchPhaseReport& r : reports) {
            std::cout << "  " << r.branch.label() << ": geometric=" << r.phases.geometric_phase
                      << " dynamic=" << r.phases.dynamic_phase
                      << " solid_angle=" << r.solid_angle << " leakage=" << r.leakage_final
                      << "\n";
        }
        std::cout << "  fidelity vs diag(1,1,-1,-1): " << fid << "\n";
    }
    return 0;
}

int cmd_sweep(const CliOptions& opt) {
    RunConfig cfg = load_and_override(opt);
    std::uint64_t hash = config_hash(cfg);
    fs::create_directories(cfg.out_dir);

    SweepResult sweep = robustness_sweep(cfg.protocol, cfg.integrator, cfg.grid(), cfg.trials,
                                         cfg.seed);
    auto out = open_out(fs::path(cfg.out_dir) / "sweep.csv");
    write_sweep_csv(out, sweep, hash);

    if (!opt.quiet) {
        std::cout << "sweep: " << sweep.cells.size() << " cells x " << sweep.trials
                  << " trials -> " << cfg.out_dir << "/sweep.csv\n";
    }
    return 0;
}

int cmd_bloch(const CliOptions& opt) {
    RunConfig cfg = load_and_override(opt);
    std::uint64_t hash = config_hash(cfg);
    fs::create_directories(cfg.out_dir);

    for (const BranchId& b : gate_branch_order()) {
        PulseSchedule sched = default_gate_protocol(cfg.protocol, b);
        StateVector psi0 = dark_state(b, sched.sample(0.0));
        TrajectoryRecord traj = evolve(sched, psi0, cfg.integrator);
        BlochPath sim = project_path(traj.states, traj.times, gate_projection_tol);
        BlochPath ideal = protocol_dark_path(sched, static_cast<int>(sim.samples.size()));
        auto sim_out = open_out(fs::path(cfg.out_dir) / ("bloch_" + b.label() + "_sim.csv"));
        write_bloch_csv(sim_out, sim, hash, cfg.seed);
        auto ideal_out = open_out(fs::path(cfg.out_dir) / ("bloch_" + b.label() + "_ideal.csv"));
        write_bloch_csv(ideal_out, ideal, hash, cfg.seed);
    }

    if (!opt.quiet) {
        std::cout << "bloch paths written to " << cfg.out_dir << "/bloch_<branch>_{sim,ideal}.csv\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adiabatic dark-state conditional phase gate simulator"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string out_dir_flag;
    std::uint64_t seed_flag = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "run manifest (key = value)")
            ->required();
        sub->add_option("--out", out_dir_flag, "output directory (overrides out_dir)");
        sub->add_option("--seed", seed_flag, "seed override");
        sub->add_flag("--quiet", opt.quiet, "suppress the stdout summary");
    };

    CLI::App* run = app.add_subcommand("run", "run the four-branch gate and write the report");
    CLI::App* sweep = app.add_subcommand("sweep", "noise-grid robustness sweep");
    CLI::App* bloch = app.add_subcommand("bloch", "export closed-form and simulated Bloch paths");
    add_common(run);
    add_common(sweep);
    add_common(bloch);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->count("--out") || sweep->count("--out") || bloch->count("--out")) {
            opt.out_dir = out_dir_flag;
        }
        if (run->count("--seed") || sweep->count("--seed") || bloch->count("--seed")) {
            opt.seed = seed_flag;
        }
        if (app.got_subcommand(run)) return cmd_run(opt);
        if (app.got_subcommand(sweep)) return cmd_sweep(opt);
        return cmd_bloch(opt);
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const config_error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
