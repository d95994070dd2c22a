#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "darkgate/common.hpp"
#include "darkgate/propagator.hpp"
#include "darkgate/pulses.hpp"

namespace darkgate {

/// Validated run manifest. One plain-text `key = value` file drives runs,
/// sweeps and path exports (see README for the key list); flags may
/// override individual keys.
struct RunConfig {
    ProtocolSpec protocol;
    std::string profile_csv; // required when protocol.profile == sampled
    IntegratorConfig integrator{20000, true, 10};
    NoiseSpec noise;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    // sweep section
    std::vector<double> sweep_amp_sigmas{0.0};
    std::vector<double> sweep_timing_sigmas{0.0};
    std::vector<double> sweep_offset_sigmas{0.0};
    int trials = 8;

    NoiseGrid grid() const { return {sweep_amp_sigmas, sweep_timing_sigmas, sweep_offset_sigmas}; }

    void validate() const {
        protocol.validate();
        integrator.validate();
        noise.validate();
        if (trials < 1) throw config_error("config: trials must be >= 1");
        if (out_dir.empty()) throw config_error("config: out_dir must not be empty");
        for (const auto* v : {&sweep_amp_sigmas, &sweep_timing_sigmas, &sweep_offset_sigmas}) {
            if (v->empty()) throw config_error("config: sweep sigma lists must not be empty");
            for (double x : *v) {
                if (x < 0.0 || !std::isfinite(x)) {
                    throw config_error("config: sweep sigmas must be nonnegative and finite");
                }
            }
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double x = std::stod(value, &used);
        if (detail::trim(value.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw config_error("config: key '" + key + "' expects a number, got '" + value + "'");
}

inline std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        std::int64_t x = std::stoll(value, &used);
        if (detail::trim(value.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw config_error("config: key '" + key + "' expects an integer, got '" + value + "'");
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        std::uint64_t x = std::stoull(value, &used);
        if (detail::trim(value.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw config_error("config: key '" + key + "' expects an unsigned integer, got '" + value + "'");
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw config_error("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw config_error("config: key '" + key + "' expects a number list");
    return out;
}

inline std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace detail

/// Parse a `key = value` manifest. Unknown keys are rejected so typos fail
/// loudly; '#' starts a comment.
inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("config: line " + std::to_string(lineno) + " is not 'key = value'");
        }
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key == "omega_peak") cfg.protocol.omega_peak = detail::parse_double(key, value);
        else if (key == "stage_duration") cfg.protocol.stage_duration = detail::parse_double(key, value);
        else if (key == "lambda2_hold") cfg.protocol.lambda2_hold = detail::parse_double(key, value);
        else if (key == "profile") cfg.protocol.profile = profile_from_string(value);
        else if (key == "profile_csv") cfg.profile_csv = value;
        else if (key == "steps_per_stage") cfg.integrator.steps_per_stage = static_cast<int>(detail::parse_int(key, value));
        else if (key == "renormalize") cfg.integrator.renormalize_each_step = detail::parse_bool(key, value);
        else if (key == "record_stride") cfg.integrator.record_stride = static_cast<int>(detail::parse_int(key, value));
        else if (key == "amp_rel_sigma") cfg.noise.amp_rel_sigma = detail::parse_double(key, value);
        else if (key == "timing_rel_sigma") cfg.noise.timing_rel_sigma = detail::parse_double(key, value);
        else if (key == "offset_sigma") cfg.noise.offset_sigma = detail::parse_double(key, value);
        else if (key == "seed") cfg.seed = detail::parse_u64(key, value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "trials") cfg.trials = static_cast<int>(detail::parse_int(key, value));
        else if (key == "sweep_amp_sigmas") cfg.sweep_amp_sigmas = detail::parse_double_list(key, value);
        else if (key == "sweep_timing_sigmas") cfg.sweep_timing_sigmas = detail::parse_double_list(key, value);
        else if (key == "sweep_offset_sigmas") cfg.sweep_offset_sigmas = detail::parse_double_list(key, value);
        else throw config_error("config: unknown key '" + key + "' at line " + std::to_string(lineno));
    }
    cfg.noise.seed = cfg.seed;
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot read '" + path + "'");
    RunConfig cfg = parse_config(in);
    if (cfg.protocol.profile == Profile::sampled) {
        if (cfg.profile_csv.empty()) {
            throw config_error("config: profile = sampled requires profile_csv");
        }
        std::ifstream csv(cfg.profile_csv);
        if (!csv) throw config_error("config: cannot read profile_csv '" + cfg.profile_csv + "'");
        cfg.protocol.samples = load_sampled_profile(csv);
    }
    return cfg;
}

/// Canonical serialization: fixed key order, 17 significant digits.
/// parse(serialize(c)) reproduces every validated field of c.
inline std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    auto list = [](const std::vector<double>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ", ";
            s += detail::format_g17(xs[i]);
        }
        return s;
    };
    out << "omega_peak = " << detail::format_g17(cfg.protocol.omega_peak) << "\n";
    out << "stage_duration = " << detail::format_g17(cfg.protocol.stage_duration) << "\n";
    if (cfg.protocol.lambda2_hold) {
        out << "lambda2_hold = " << detail::format_g17(*cfg.protocol.lambda2_hold) << "\n";
    }
    out << "profile = " << to_string(cfg.protocol.profile) << "\n";
    if (!cfg.profile_csv.empty()) out << "profile_csv = " << cfg.profile_csv << "\n";
    out << "steps_per_stage = " << cfg.integrator.steps_per_stage << "\n";
    out << "renormalize = " << (cfg.integrator.renormalize_each_step ? "true" : "false") << "\n";
    out << "record_stride = " << cfg.integrator.record_stride << "\n";
    out << "amp_rel_sigma = " << detail::format_g17(cfg.noise.amp_rel_sigma) << "\n";
    out << "timing_rel_sigma = " << detail::format_g17(cfg.noise.timing_rel_sigma) << "\n";
    out << "offset_sigma = " << detail::format_g17(cfg.noise.offset_sigma) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    out << "trials = " << cfg.trials << "\n";
    out << "sweep_amp_sigmas = " << list(cfg.sweep_amp_sigmas) << "\n";
    out << "sweep_timing_sigmas = " << list(cfg.sweep_timing_sigmas) << "\n";
    out << "sweep_offset_sigmas = " << list(cfg.sweep_offset_sigmas) << "\n";
    return out.str();
}

/// FNV-1a 64-bit hash of the canonical serialization; stamped on every
/// output artifact together with the seed.
inline std::uint64_t config_hash(const RunConfig& cfg) {
    std::string s = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace darkgate
