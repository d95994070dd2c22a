#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "darkgate/common.hpp"
#include "darkgate/model.hpp"
#include "darkgate/random.hpp"

namespace darkgate {

enum class Profile : unsigned char { trig, linear, sampled };

inline const char* to_string(Profile p) {
    switch (p) {
        case Profile::trig: return "trig";
        case Profile::linear: return "linear";
        case Profile::sampled: return "sampled";
    }
    return "?";
}

inline Profile profile_from_string(const std::string& s) {
    if (s == "trig") return Profile::trig;
    if (s == "linear") return Profile::linear;
    if (s == "sampled") return Profile::sampled;
    throw config_error("unknown profile '" + s + "' (expected trig|linear|sampled)");
}

/// One tabulated channel: (t, value) pairs, strictly increasing t,
/// linearly interpolated.
struct SampledChannel {
    std::vector<double> t;
    std::vector<double> v;

    double eval(double x) const {
        auto it = std::upper_bound(t.begin(), t.end(), x);
        if (it == t.begin()) return v.front();
        if (it == t.end()) return v.back();
        std::size_t hi = static_cast<std::size_t>(it - t.begin());
        std::size_t lo = hi - 1;
        double u = (x - t[lo]) / (t[hi] - t[lo]);
        return v[lo] + u * (v[hi] - v[lo]);
    }
};

struct SampledProfile {
    SampledChannel lambda1, lambda2, lambda3;
};

/// Two-stage gate protocol parameters. The window is [0, 2T]: the primed
/// mixing angle runs 0 -> pi/2 during stage one and back to 0 during stage
/// two; lambda2 is held constant at lambda2_hold (default: omega_peak).
struct ProtocolSpec {
    double omega_peak = 1.0;
    double stage_duration = 200.0;
    Profile profile = Profile::trig;
    std::optional<double> lambda2_hold;
    std::optional<SampledProfile> samples;

    double hold2() const { return lambda2_hold.value_or(omega_peak); }

    void validate() const {
        if (!(omega_peak > 0.0) || !std::isfinite(omega_peak)) {
            throw config_error("ProtocolSpec: omega_peak must be positive and finite");
        }
        if (!(stage_duration > 0.0) || !std::isfinite(stage_duration)) {
            throw config_error("ProtocolSpec: stage_duration must be positive and finite");
        }
        if (lambda2_hold && (!(*lambda2_hold >= 0.0) || !std::isfinite(*lambda2_hold))) {
            throw config_error("ProtocolSpec: lambda2_hold must be nonnegative and finite");
        }
        if (profile == Profile::sampled) {
            if (!samples || samples->lambda1.t.empty() || samples->lambda2.t.empty() ||
                samples->lambda3.t.empty()) {
                throw config_error("ProtocolSpec: sampled profile requires sample tables");
            }
            for (const SampledChannel* ch : {&samples->lambda1, &samples->lambda2, &samples->lambda3}) {
                if (ch->t.size() != ch->v.size() || ch->t.size() < 2 ||
                    !std::is_sorted(ch->t.begin(), ch->t.end()) ||
                    ch->t.front() > 0.0 || ch->t.back() < 2.0 * stage_duration) {
                    throw config_error("ProtocolSpec: sampled channels must cover [0, 2T] with "
                                       "increasing times");
                }
            }
        }
    }
};

inline ProtocolSpec scaled(const ProtocolSpec& spec, double amplitude_factor) {
    ProtocolSpec out = spec;
    out.omega_peak *= amplitude_factor;
    if (out.lambda2_hold) *out.lambda2_hold *= amplitude_factor;
    else out.lambda2_hold = spec.hold2() * amplitude_factor;
    if (out.samples) {
        for (SampledChannel* ch : {&out.samples->lambda1, &out.samples->lambda2, &out.samples->lambda3}) {
            for (double& x : ch->v) x *= amplitude_factor;
        }
    }
    return out;
}

/// Quasi-static control-error model: one multiplicative factor per channel,
/// one stage-duration factor, one additive offset per channel, all frozen
/// over the run. Deterministic under fixed seed.
struct NoiseSpec {
    double amp_rel_sigma = 0.0;
    double timing_rel_sigma = 0.0;
    double offset_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (amp_rel_sigma < 0.0 || timing_rel_sigma < 0.0 || offset_sigma < 0.0) {
            throw config_error("NoiseSpec: sigmas must be nonnegative");
        }
    }
};

struct NoiseRealization {
    std::array<double, 3> amp_factor{1.0, 1.0, 1.0};
    double time_factor = 1.0;
    std::array<double, 3> offset{0.0, 0.0, 0.0};
};

/// Cartesian grid of noise sigmas for robustness sweeps.
struct NoiseGrid {
    std::vector<double> amp_sigmas{0.0};
    std::vector<double> timing_sigmas{0.0};
    std::vector<double> offset_sigmas{0.0};
};

/// Immutable time-dependent coupling schedule for one branch over
/// [0, window()]. Perturbed copies carry a frozen noise realization.
///
/// For primed-gate runs the Hamiltonian branch sign is stage-dependent:
/// stage one is governed by the alpha = 1 sign, stage two by alpha = 2
/// (the couplings themselves are branch-independent).
class PulseSchedule {
public:
    PulseSchedule(ProtocolSpec spec, BranchId branch)
        : spec_(std::move(spec)), branch_(branch) {
        branch_.validate();
        spec_.validate();
    }

    const BranchId& branch() const { return branch_; }
    const ProtocolSpec& protocol() const { return spec_; }
    const NoiseRealization& noise() const { return noise_; }

    double stage_boundary() const { return spec_.stage_duration * noise_.time_factor; }
    double window() const { return 2.0 * stage_boundary(); }

    /// Couplings at time t in [0, window()].
    CouplingSet sample(double t) const {
        double w = window();
        double slack = 1e-9 * std::max(1.0, w);
        if (t < -slack || t > w + slack) {
            throw std::out_of_range("PulseSchedule::sample: t outside [0, window]");
        }
        double tb = std::clamp(t / noise_.time_factor, 0.0, 2.0 * spec_.stage_duration);
        CouplingSet base = base_couplings(tb);
        return CouplingSet{
            noise_.amp_factor[0] * base.lambda1 + noise_.offset[0],
            noise_.amp_factor[1] * base.lambda2 + noise_.offset[1],
            noise_.amp_factor[2] * base.lambda3 + noise_.offset[2],
        };
    }

    /// Branch whose sign governs the Hamiltonian at time t.
    BranchId governing(double t) const {
        if (!branch_.primed) return branch_;
        return BranchId{t <= stage_boundary() ? 1 : 2, true};
    }

    Hamiltonian3 hamiltonian(double t) const { return build_h(governing(t), sample(t)); }

    StateVector dark(double t) const { return dark_state(governing(t), sample(t)); }

    double mixing(double t) const { return mixing_angle(governing(t), sample(t)); }

    /// Instantaneous spectral radius sqrt(|l1|^2 + |l2 or l3|^2).
    double gap(double t) const {
        CouplingSet c = sample(t);
        double other = std::abs(branch_.primed ? c.lambda3 : c.lambda2);
        return std::hypot(std::abs(c.lambda1), other);
    }

    friend PulseSchedule perturb(const PulseSchedule& s, const NoiseSpec& n);

private:
    CouplingSet base_couplings(double t) const {
        double T = spec_.stage_duration;
        double omega = spec_.omega_peak;
        double l2 = spec_.hold2();
        switch (spec_.profile) {
            case Profile::trig: {
                double u = (t <= T) ? pi * t / (2.0 * T) : pi * (t - T) / (2.0 * T);
                double l1 = (t <= T) ? omega * std::sin(u) : omega * std::cos(u);
                double l3 = (t <= T) ? omega * std::cos(u) : omega * std::sin(u);
                return {l1, l2, l3};
            }
            case Profile::linear: {
                double u = (t <= T) ? t / T : (t - T) / T;
                double l1 = (t <= T) ? omega * u : omega * (1.0 - u);
                double l3 = (t <= T) ? omega * (1.0 - u) : omega * u;
                return {l1, l2, l3};
            }
            case Profile::sampled:
                return {spec_.samples->lambda1.eval(t), spec_.samples->lambda2.eval(t),
                        spec_.samples->lambda3.eval(t)};
        }
        throw std::logic_error("unreachable profile");
    }

    ProtocolSpec spec_;
    BranchId branch_;
    NoiseRealization noise_;
};

/// Schedule implementing the two-stage protocol for one branch. With the
/// trig profile the primed mixing angle is exactly linear in t:
/// theta'(t) = pi t / 2T on stage one, mirrored on stage two.
inline PulseSchedule default_gate_protocol(const ProtocolSpec& spec, BranchId branch) {
    return PulseSchedule(spec, branch);
}

/// Free-function mirror of PulseSchedule::sample.
inline CouplingSet sample(const PulseSchedule& s, double t) { return s.sample(t); }

/// Noise-perturbed copy of a schedule. Draw order is fixed (three amplitude
/// factors, one duration factor, three offsets) and every Gaussian is
/// consumed even for zero sigmas, so zeroing one sigma does not shift the
/// rest of the stream. The duration factor is clamped to >= 0.05 so extreme
/// draws cannot produce an empty or reversed window.
inline PulseSchedule perturb(const PulseSchedule& s, const NoiseSpec& n) {
    n.validate();
    Rng rng(n.seed);
    PulseSchedule out = s;
    NoiseRealization r = s.noise_;
    for (int i = 0; i < 3; ++i) r.amp_factor[i] *= 1.0 + n.amp_rel_sigma * rng.gaussian();
    r.time_factor *= std::max(1.0 + n.timing_rel_sigma * rng.gaussian(), 0.05);
    for (int i = 0; i < 3; ++i) r.offset[i] += n.offset_sigma * rng.gaussian();
    out.noise_ = r;
    return out;
}

/// Sampled-profile loader: CSV rows t1,v1,t2,v2,t3,v3 (one time/value pair
/// per channel so channels may use different grids). '#' lines and a
/// non-numeric header row are skipped.
inline SampledProfile load_sampled_profile(std::istream& in) {
    SampledProfile p;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::array<double, 6> cols{};
        std::size_t pos = 0;
        bool numeric = true;
        for (int i = 0; i < 6; ++i) {
            std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos);
            try {
                std::size_t used = 0;
                cols[i] = std::stod(cell, &used);
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
            if (comma == std::string::npos) {
                if (i != 5) numeric = false;
                break;
            }
            pos = comma + 1;
        }
        if (!numeric) {
            if (lineno == 1) continue; // header row
            throw config_error("sampled profile: malformed row at line " + std::to_string(lineno));
        }
        p.lambda1.t.push_back(cols[0]);
        p.lambda1.v.push_back(cols[1]);
        p.lambda2.t.push_back(cols[2]);
        p.lambda2.v.push_back(cols[3]);
        p.lambda3.t.push_back(cols[4]);
        p.lambda3.v.push_back(cols[5]);
    }
    if (p.lambda1.t.size() < 2) {
        throw config_error("sampled profile: need at least two rows");
    }
    return p;
}

} // namespace darkgate
