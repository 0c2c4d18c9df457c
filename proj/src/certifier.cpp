#include "linamp/certifier.hpp"

#include <algorithm>
#include <cmath>

namespace linamp {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::SIMULABLE_NECESSARY: return "SIMULABLE_NECESSARY";
        case Verdict::NOT_SIMULABLE: return "NOT_SIMULABLE";
        case Verdict::TRIVIAL_IDENTITY: return "TRIVIAL_IDENTITY";
        default: return "INCONSISTENT_GAIN";
    }
}

double estimate_gain(std::span<const MomentRecord> records, double tol) {
    constexpr double kAmpFloor = 1e-9;
    std::vector<double> gains;
    for (const auto& r : records) {
        if (std::abs(r.in_amp) <= kAmpFloor) continue;
        const Cplx g = r.out_amp / r.in_amp;
        if (std::abs(g.imag()) > tol * std::abs(g))
            throw NotPhasePreserving("estimate_gain: record '" + r.label + "' gives gain " +
                                     std::to_string(g.real()) + " + " +
                                     std::to_string(g.imag()) + "i");
        if (g.real() <= 0.0)
            throw NotPhasePreserving("estimate_gain: record '" + r.label +
                                     "' gives non-positive gain");
        gains.push_back(g.real());
    }
    if (gains.empty())
        throw NoAmplitudeRecord("estimate_gain: need at least one record with |<a>_in| > 1e-9");

    const auto [lo, hi] = std::minmax_element(gains.begin(), gains.end());
    double mean = 0.0;
    for (double g : gains) mean += g;
    mean /= double(gains.size());
    if ((*hi - *lo) > tol * std::abs(mean))
        throw InconsistentGain("estimate_gain: gain spread " + std::to_string(*hi - *lo) +
                               " across records exceeds tol");
    return mean;
}

CertificationResult certify(std::span<const MomentRecord> records, double g, double tol) {
    if (records.empty()) throw DomainError("certify: no records");
    for (const auto& r : records)
        if (r.in_n < 0.0 || r.out_n < 0.0)
            throw DomainError("certify: photon numbers must be >= 0");

    CertificationResult res;
    res.g_est = g;

    if (std::abs(g - 1.0) <= tol) {
        res.verdict = Verdict::TRIVIAL_IDENTITY;
        return res;
    }
    if (g < 1.0) throw DomainError("certify: g < 1 is not an amplifier");

    const double g2 = g * g;
    double beta_min = 0.0, beta_max = 0.0, beta_mean = 0.0;
    size_t imin = 0, imax = 0;
    for (size_t i = 0; i < records.size(); ++i) {
        const double beta = (records[i].out_n - g2 * records[i].in_n) / (g2 - 1.0);
        res.bbdag_required.push_back(beta);
        beta_mean += beta;
        if (i == 0 || beta < beta_min) { beta_min = beta; imin = i; }
        if (i == 0 || beta > beta_max) { beta_max = beta; imax = i; }
    }
    beta_mean /= double(records.size());
    res.spread = beta_max - beta_min;

    const bool spread_bad = res.spread > tol * (1.0 + std::abs(beta_mean));
    const bool subvacuum = beta_mean < 1.0 - tol; // <b b+> = <b+ b> + 1 >= 1
    if (spread_bad || subvacuum) {
        res.verdict = Verdict::NOT_SIMULABLE;
        res.witness = std::make_pair(records[imin].label, records[imax].label);
    } else {
        res.verdict = Verdict::SIMULABLE_NECESSARY;
    }
    return res;
}

CertificationResult certify_records(std::span<const MomentRecord> records, double tol) {
    double g;
    try {
        g = estimate_gain(records, tol);
    } catch (const InconsistentGain&) {
        CertificationResult res;
        res.verdict = Verdict::INCONSISTENT_GAIN;
        return res;
    }
    return certify(records, g, tol);
}

RegionTable forbidden_region(double gamma, double t, std::span<const double> n_in_grid,
                             std::span<const double> bbdag_list) {
    if (!(gamma > 0.0) || !(t > 0.0)) throw DomainError("forbidden_region: need gamma t > 0");
    for (double b : bbdag_list)
        if (b < 1.0) throw DomainError("forbidden_region: <b b+> must be >= 1");
    for (double n : n_in_grid)
        if (n < 0.0) throw DomainError("forbidden_region: n_in must be >= 0");

    RegionTable tab;
    tab.g = std::exp(gamma * t);
    const double g2 = tab.g * tab.g;
    const double g6 = g2 * g2 * g2;
    tab.bbdag_list.assign(bbdag_list.begin(), bbdag_list.end());
    tab.n_in.assign(n_in_grid.begin(), n_in_grid.end());

    // Crossing of the paramp line with the lower-bound line: beyond n* the
    // paramp output is stuck below every attainable three-photon output.
    for (double b : bbdag_list) tab.n_star.push_back(((g2 - 1.0) * b - (g6 - 1.0) / 3.0) / (g6 - g2));

    for (double n : n_in_grid) tab.lb.push_back(g6 * n + (g6 - 1.0) / 3.0);
    for (double b : bbdag_list) {
        std::vector<double> line;
        line.reserve(n_in_grid.size());
        for (double n : n_in_grid) line.push_back(g2 * n + (g2 - 1.0) * b);
        tab.paramp.push_back(std::move(line));
    }
    return tab;
}

} // namespace linamp
