#pragma once

#include <cstdint>
#include <vector>

#include "linamp/fock.hpp"
#include "linamp/lindblad.hpp"

namespace linamp {

struct TrajectoryConfig {
    long n_traj = 1;
    std::uint64_t seed = 0;
    double t = 0.0;
    bool norm_threshold_sampling = true; // the only sampler implemented
    long max_jumps = 1'000'000;
};

struct TrajectoryStats {
    long n_traj = 0;
    double t = 0.0;
    double mean_n = 0.0;
    double stderr_n = 0.0; // NaN when n_traj == 1
    Cplx mean_amp;
    double stderr_amp = 0.0;
    std::vector<long long> jump_counts; // aligned with spec.terms
};

struct JumpEvent {
    long trajectory;
    double time;
    int term; // index into spec.terms
};

// Monte Carlo wave-function unraveling of the master equation. Every jump
// operator is a ladder power, so L+L is diagonal and the no-jump propagator
// exp(-D tau) is exact; jump times come from the norm-threshold (waiting
// time) rule, solving |psi(tau)|^2 = u by fixed-count bisection so runs are
// bit-reproducible. Trajectory j draws from an independent SplitMix64
// substream seeded with mix(seed ^ (j+1) * 0x9E3779B97F4A7C15); statistics
// are reduced in trajectory order.
TrajectoryStats run_trajectories(const LindbladSpec& spec, const Vector& psi0,
                                 const TrajectoryConfig& cfg,
                                 std::vector<JumpEvent>* jump_log = nullptr);

} // namespace linamp
