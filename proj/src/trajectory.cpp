#include "linamp/trajectory.hpp"

#include <cmath>

namespace linamp {

namespace {

using Eigen::VectorXd;

std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Fully specified generator so identical seeds give identical streams on any
// platform (std distributions are not bit-portable).
struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() { return splitmix_finalize(s += 0x9E3779B97F4A7C15ULL); }
    // uniform on the open interval (0, 1)
    double uniform() { return (double(next() >> 12) + 0.5) * 0x1.0p-52; }
};

struct TermData {
    double rate;
    JumpTerm::Op op;
    int k;
    VectorXd w; // <i| a^k |i+k>
};

// |psi(tau)|^2 over the active support after drift exp(-D tau).
double survival(const Vector& psi, const VectorXd& decay, int lo, int hi, double tau) {
    double s = 0.0;
    for (int i = lo; i <= hi; ++i) s += std::norm(psi(i)) * std::exp(-2.0 * decay(i) * tau);
    return s;
}

} // namespace

TrajectoryStats run_trajectories(const LindbladSpec& spec, const Vector& psi0,
                                 const TrajectoryConfig& cfg, std::vector<JumpEvent>* jump_log) {
    spec.validate();
    if (cfg.n_traj < 1) throw DomainError("run_trajectories: n_traj must be >= 1");
    if (!(cfg.t >= 0.0)) throw DomainError("run_trajectories: t must be >= 0");
    if (!cfg.norm_threshold_sampling)
        throw Unsupported("run_trajectories: only norm-threshold jump sampling is implemented");
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw DomainError("run_trajectories: psi0 must be normalized");

    const int dim = static_cast<int>(psi0.size());
    const int n_terms = static_cast<int>(spec.terms.size());
    const int tail_from = dim - tail_levels(dim);

    // D = (1/2) sum_k rate_k L+L is diagonal for ladder-power jumps.
    VectorXd decay = VectorXd::Zero(dim);
    std::vector<TermData> terms;
    for (const auto& jt : spec.terms) {
        TermData td;
        td.rate = jt.rate;
        td.op = jt.op;
        td.k = jt.power;
        td.w = VectorXd(std::max(0, dim - jt.power));
        for (int i = 0; i + jt.power < dim; ++i) {
            double prod = 1.0;
            for (int l = 1; l <= jt.power; ++l) prod *= double(i + l);
            td.w(i) = std::sqrt(prod);
        }
        for (int i = 0; i + jt.power < dim; ++i) {
            if (jt.op == JumpTerm::Op::lower)
                decay(i + jt.power) += 0.5 * jt.rate * td.w(i) * td.w(i);
            else
                decay(i) += 0.5 * jt.rate * td.w(i) * td.w(i);
        }
        terms.push_back(std::move(td));
    }

    std::vector<double> n_samples(cfg.n_traj);
    std::vector<Cplx> amp_samples(cfg.n_traj);
    std::vector<long long> jump_counts(n_terms, 0);

    Vector psi(dim), scratch(dim);
    for (long j = 0; j < cfg.n_traj; ++j) {
        SplitMix64 rng{splitmix_finalize(cfg.seed ^ (0x9E3779B97F4A7C15ULL * std::uint64_t(j + 1)))};
        psi = psi0;
        int lo = 0, hi = dim - 1;
        while (lo < hi && psi(lo) == Cplx(0.0)) ++lo;
        while (hi > lo && psi(hi) == Cplx(0.0)) --hi;

        double remaining = cfg.t;
        long jumps = 0;
        while (remaining > 0.0) {
            const double u = rng.uniform();
            if (survival(psi, decay, lo, hi, remaining) >= u) {
                for (int i = lo; i <= hi; ++i) psi(i) *= std::exp(-decay(i) * remaining);
                break;
            }
            // Norm threshold crossed inside the window: bisect the jump time.
            // Fixed iteration count keeps runs bit-identical.
            double a = 0.0, b = remaining;
            for (int it = 0; it < 64; ++it) {
                const double mid = 0.5 * (a + b);
                (survival(psi, decay, lo, hi, mid) >= u ? a : b) = mid;
            }
            const double tau = 0.5 * (a + b);
            for (int i = lo; i <= hi; ++i) psi(i) *= std::exp(-decay(i) * tau);
            remaining -= tau;

            // Channel selection with weights rate_k |L_k psi|^2.
            double total = 0.0;
            std::vector<double> weights(n_terms, 0.0);
            for (int kidx = 0; kidx < n_terms; ++kidx) {
                const auto& td = terms[kidx];
                double wsum = 0.0;
                if (td.op == JumpTerm::Op::lower) {
                    for (int i = std::max(lo - td.k, 0); i <= hi - td.k && i + td.k < dim; ++i)
                        wsum += td.w(i) * td.w(i) * std::norm(psi(i + td.k));
                } else {
                    for (int i = lo; i <= hi && i + td.k < dim; ++i)
                        wsum += td.w(i) * td.w(i) * std::norm(psi(i));
                }
                weights[kidx] = td.rate * wsum;
                total += weights[kidx];
            }
            if (total <= 0.0) {
                // No channel can fire (e.g. truncated top); finish the window.
                for (int i = lo; i <= hi; ++i) psi(i) *= std::exp(-decay(i) * remaining);
                remaining = 0.0;
                break;
            }
            double pick = rng.uniform() * total;
            int chosen = n_terms - 1;
            for (int kidx = 0; kidx < n_terms; ++kidx) {
                if (pick < weights[kidx]) { chosen = kidx; break; }
                pick -= weights[kidx];
            }

            const auto& td = terms[chosen];
            scratch.setZero();
            int nlo, nhi;
            if (td.op == JumpTerm::Op::lower) {
                nlo = std::max(lo - td.k, 0);
                nhi = std::min(hi - td.k, dim - 1 - td.k);
                for (int i = nlo; i <= nhi; ++i) scratch(i) = td.w(i) * psi(i + td.k);
            } else {
                nlo = std::min(lo + td.k, dim - 1);
                nhi = std::min(hi + td.k, dim - 1);
                for (int i = lo; i <= hi && i + td.k < dim; ++i)
                    scratch(i + td.k) = td.w(i) * psi(i);
            }
            psi.swap(scratch);
            lo = std::min(nlo, dim - 1);
            hi = std::max(nhi, lo);
            while (lo < hi && psi(lo) == Cplx(0.0)) ++lo;
            while (hi > lo && psi(hi) == Cplx(0.0)) --hi;
            psi /= psi.segment(lo, hi - lo + 1).norm();

            ++jump_counts[chosen];
            if (jump_log) jump_log->push_back({j, cfg.t - remaining, chosen});
            if (++jumps > cfg.max_jumps)
                throw GuardExceeded("run_trajectories: trajectory " + std::to_string(j) +
                                    " exceeded max_jumps (runaway heating)");
            double tail = 0.0;
            for (int i = std::max(lo, tail_from); i <= hi; ++i) tail += std::norm(psi(i));
            if (tail >= 1e-6)
                throw TruncationError("run_trajectories: trajectory " + std::to_string(j) +
                                      " reached the top Fock levels (tail " +
                                      std::to_string(tail) + "); increase dim");
        }
        // Renormalize after the final no-jump segment.
        psi /= psi.segment(lo, hi - lo + 1).norm();

        double n_est = 0.0;
        Cplx amp_est(0.0);
        for (int i = lo; i <= hi; ++i) n_est += double(i) * std::norm(psi(i));
        for (int i = lo; i <= std::min(hi, dim - 2); ++i)
            amp_est += std::sqrt(double(i + 1)) * std::conj(psi(i)) * psi(i + 1);
        n_samples[j] = n_est;
        amp_samples[j] = amp_est;
    }

    TrajectoryStats stats;
    stats.n_traj = cfg.n_traj;
    stats.t = cfg.t;
    stats.jump_counts = std::move(jump_counts);

    double nsum = 0.0;
    Cplx asum(0.0);
    for (long j = 0; j < cfg.n_traj; ++j) {
        nsum += n_samples[j];
        asum += amp_samples[j];
    }
    stats.mean_n = nsum / double(cfg.n_traj);
    stats.mean_amp = asum / double(cfg.n_traj);

    if (cfg.n_traj > 1) {
        double var_n = 0.0, var_a = 0.0;
        for (long j = 0; j < cfg.n_traj; ++j) {
            var_n += (n_samples[j] - stats.mean_n) * (n_samples[j] - stats.mean_n);
            var_a += std::norm(amp_samples[j] - stats.mean_amp);
        }
        var_n /= double(cfg.n_traj - 1);
        var_a /= double(cfg.n_traj - 1);
        stats.stderr_n = std::sqrt(var_n / double(cfg.n_traj));
        stats.stderr_amp = std::sqrt(var_a / double(cfg.n_traj));
    } else {
        stats.stderr_n = std::numeric_limits<double>::quiet_NaN();
        stats.stderr_amp = std::numeric_limits<double>::quiet_NaN();
    }
    return stats;
}

} // namespace linamp
