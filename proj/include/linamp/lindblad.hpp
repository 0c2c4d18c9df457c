#pragma once

#include <limits>
#include <vector>

#include "linamp/fock.hpp"

namespace linamp {

// One dissipator D[L] with L = a^power (lower) or a+^power (raise).
struct JumpTerm {
    enum class Op { lower, raise };
    double rate = 0.0;
    Op op = Op::lower;
    int power = 1;
};

struct LindbladSpec {
    std::vector<JumpTerm> terms;

    void validate() const;
    // Largest level shift any term can produce (max power over terms).
    int max_power() const;
};

struct EvolveConfig {
    enum class Method { adaptive_rk, dense_expm };
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    Method method = Method::adaptive_rk;
};

// Truncation guard applied to evolved states (construction uses 1e-8).
constexpr double kEvolveTailTol = 1e-6;

// dL/dt in Lindblad form, applied matrix-free: no superoperator is built.
// rho need not be a valid state (used on integrator stages).
Matrix rhs(const LindbladSpec& spec, const Matrix& rho);

// Same generator restricted to a diagonal state: the populations follow a
// classical birth-death equation; every term couples diagonals to diagonals.
Eigen::VectorXd rhs_diagonal(const LindbladSpec& spec, const Eigen::VectorXd& p);

DensityMatrix evolve(const DensityMatrix& rho0, const LindbladSpec& spec, double t,
                     const EvolveConfig& cfg = {});

// Trace distance between evolve(phase_shift(rho, phi)) and
// phase_shift(evolve(rho), phi).
double phase_covariance_residual(const LindbladSpec& spec, const DensityMatrix& rho, double phi,
                                 double t, const EvolveConfig& cfg = {});

struct PhaseInsensitivityReport {
    std::vector<double> phis;
    std::vector<double> g; // <x_phi(t)> / <x_phi(0)>, NaN where <x_phi(0)> ~ 0
    std::vector<double> N; // Var x_phi(t) - g^2 Var x_phi(0)
};

// Gain and added-noise tables over a quadrature-angle grid. The noise figure
// is defined through variances, N = Var x_phi(t) - g^2 Var x_phi(0); because
// the amplitude gain is exact this equals the raw-second-moment version
// <x^2>(t) - g^2 <x^2>(0) as well.
PhaseInsensitivityReport phase_insensitivity_report(const LindbladSpec& spec,
                                                    const DensityMatrix& rho0, double t,
                                                    std::span<const double> phi_grid,
                                                    const EvolveConfig& cfg = {});

} // namespace linamp
