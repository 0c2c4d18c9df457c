#pragma once

#include <variant>

#include "linamp/fock.hpp"
#include "linamp/lindblad.hpp"

namespace linamp {

// kappa_up D[a+] + kappa_down D[a], kappa_up > kappa_down >= 0.
struct A1Params {
    double kappa_up;
    double kappa_down;
};

// (gamma/2)(D[a^2] + D[a+^2]), gamma > 0.
struct A2Params {
    double gamma;
};

// (gamma/9)(D[a^3] + D[a+^3]) + gamma D[a^2], gamma > 0.
struct A3Params {
    double gamma;
};

// kappa_raise D[a+^2] + kappa_lower D[a^2].
struct TwoPhotonParams {
    double kappa_raise;
    double kappa_lower;
};

using AmplifierKind = std::variant<A1Params, A2Params, A3Params, TwoPhotonParams>;

struct MomentPrediction {
    Cplx mean_amp;
    double mean_n;          // lower bound when lower_bound_only
    bool lower_bound_only;  // three-photon family: no closed form, bound only
    double gain;
};

LindbladSpec to_spec(const AmplifierKind& kind);

// Amplitude gain g(t). The unbalanced two-photon family has no closed-form
// amplitude gain; Unsupported is thrown there.
double gain(const AmplifierKind& kind, double t);

MomentPrediction predict_moments(const AmplifierKind& kind, double t, Cplx in_amp, double in_n);

// Analytic d<n>/dt evaluated at the given moments.
double moment_ode_rhs(const AmplifierKind& kind, const MomentReport& m);

// Loose truncation floor: dim >= max(20, ceil(8 g^4 (n_in+1))) for the
// two-photon families, g^6 for the three-photon one. This targets keeping the
// tail guard quiet at moderate times; tight moment tolerances need far more
// (the tail guard stays authoritative either way).
int suggested_dim(const AmplifierKind& kind, double t, double n_in);

} // namespace linamp
