#include "linamp/amplifiers.hpp"

#include <algorithm>
#include <cmath>

namespace linamp {

namespace {

void validate(const AmplifierKind& kind) {
    if (const auto* a1 = std::get_if<A1Params>(&kind)) {
        if (!(a1->kappa_up > a1->kappa_down && a1->kappa_down >= 0.0))
            throw DomainError("A1 requires kappa_up > kappa_down >= 0");
    } else if (const auto* a2 = std::get_if<A2Params>(&kind)) {
        if (!(a2->gamma > 0.0)) throw DomainError("A2 requires gamma > 0");
    } else if (const auto* a3 = std::get_if<A3Params>(&kind)) {
        if (!(a3->gamma > 0.0)) throw DomainError("A3 requires gamma > 0");
    } else {
        const auto& tp = std::get<TwoPhotonParams>(kind);
        if (!(tp.kappa_raise >= 0.0 && tp.kappa_lower >= 0.0))
            throw DomainError("TwoPhoton requires kappa_raise, kappa_lower >= 0");
    }
}

} // namespace

LindbladSpec to_spec(const AmplifierKind& kind) {
    validate(kind);
    using Op = JumpTerm::Op;
    LindbladSpec spec;
    if (const auto* a1 = std::get_if<A1Params>(&kind)) {
        spec.terms = {{a1->kappa_up, Op::raise, 1}, {a1->kappa_down, Op::lower, 1}};
    } else if (const auto* a2 = std::get_if<A2Params>(&kind)) {
        spec.terms = {{a2->gamma / 2.0, Op::lower, 2}, {a2->gamma / 2.0, Op::raise, 2}};
    } else if (const auto* a3 = std::get_if<A3Params>(&kind)) {
        spec.terms = {{a3->gamma / 9.0, Op::lower, 3},
                      {a3->gamma / 9.0, Op::raise, 3},
                      {a3->gamma, Op::lower, 2}};
    } else {
        const auto& tp = std::get<TwoPhotonParams>(kind);
        spec.terms = {{tp.kappa_raise, Op::raise, 2}, {tp.kappa_lower, Op::lower, 2}};
    }
    return spec;
}

double gain(const AmplifierKind& kind, double t) {
    validate(kind);
    if (!(t >= 0.0)) throw DomainError("gain: t must be >= 0");
    if (const auto* a1 = std::get_if<A1Params>(&kind))
        return std::exp(0.5 * (a1->kappa_up - a1->kappa_down) * t);
    if (const auto* a2 = std::get_if<A2Params>(&kind)) return std::exp(a2->gamma * t);
    if (const auto* a3 = std::get_if<A3Params>(&kind)) return std::exp(a3->gamma * t);
    const auto& tp = std::get<TwoPhotonParams>(kind);
    if (tp.kappa_raise != tp.kappa_lower)
        throw Unsupported("gain: no closed-form amplitude gain for the unbalanced two-photon "
                          "family");
    return std::exp(2.0 * tp.kappa_raise * t); // balanced case, gamma = 2 kappa
}

MomentPrediction predict_moments(const AmplifierKind& kind, double t, Cplx in_amp, double in_n) {
    if (!(in_n >= 0.0)) throw DomainError("predict_moments: in_n must be >= 0");
    const double g = gain(kind, t); // validates kind and t
    MomentPrediction out;
    out.gain = g;
    out.mean_amp = g * in_amp;
    out.lower_bound_only = false;
    if (const auto* a1 = std::get_if<A1Params>(&kind)) {
        const double g2 = g * g;
        out.mean_n = g2 * in_n + (g2 - 1.0) * a1->kappa_up / (a1->kappa_up - a1->kappa_down);
    } else if (std::holds_alternative<A2Params>(kind) ||
               std::holds_alternative<TwoPhotonParams>(kind)) {
        const double g4 = std::pow(g, 4);
        out.mean_n = g4 * in_n + (g4 - 1.0) / 2.0;
    } else {
        const double g6 = std::pow(g, 6);
        out.mean_n = g6 * in_n + (g6 - 1.0) / 3.0;
        out.lower_bound_only = true;
    }
    return out;
}

double moment_ode_rhs(const AmplifierKind& kind, const MomentReport& m) {
    validate(kind);
    if (const auto* a1 = std::get_if<A1Params>(&kind))
        return (a1->kappa_up - a1->kappa_down) * m.mean_n + a1->kappa_up;
    if (const auto* a2 = std::get_if<A2Params>(&kind))
        return 4.0 * a2->gamma * m.mean_n + 2.0 * a2->gamma;
    if (const auto* tp = std::get_if<TwoPhotonParams>(&kind))
        return 2.0 * (tp->kappa_raise - tp->kappa_lower) * m.mean_a2norm +
               8.0 * tp->kappa_raise * m.mean_n + 4.0 * tp->kappa_raise;
    // Three-photon family, from the generator:
    //   (gamma/9)(D+[a^3] + D+[a+^3]) n = (gamma/3)(a^3 a+^3 - a+^3 a^3)
    //                                   = (gamma/3)(9 a+^2 a^2 + 18 n + 6),
    //   gamma D+[a^2] n = -2 gamma a+^2 a^2,
    // so d<n>/dt = gamma (<a+^2 a^2> + 6 <n> + 2). Dropping the nonnegative
    // first term recovers the g^6 n + (g^6-1)/3 lower bound.
    const auto& a3 = std::get<A3Params>(kind);
    return a3.gamma * (m.mean_a2norm + 6.0 * m.mean_n + 2.0);
}

int suggested_dim(const AmplifierKind& kind, double t, double n_in) {
    const int floor_dim = 20;
    double scale = 1.0;
    if (std::holds_alternative<A3Params>(kind)) {
        scale = std::pow(gain(kind, t), 6);
    } else if (const auto* tp = std::get_if<TwoPhotonParams>(&kind)) {
        // No closed gain in the unbalanced case; use the balanced-rate proxy.
        scale = std::exp(8.0 * std::max(tp->kappa_raise, tp->kappa_lower) * t);
    } else {
        scale = std::pow(gain(kind, t), 4);
    }
    const double d = 8.0 * scale * (n_in + 1.0);
    return std::max(floor_dim, static_cast<int>(std::ceil(d)));
}

} // namespace linamp
