#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linamp/fock.hpp"

namespace linamp {

struct MomentRecord {
    std::string label;
    Cplx in_amp;
    double in_n = 0.0;
    Cplx out_amp;
    double out_n = 0.0;
};

enum class Verdict {
    SIMULABLE_NECESSARY, // first two moments matchable by some paramp
    NOT_SIMULABLE,       // no paramp reproduces these moments
    TRIVIAL_IDENTITY,    // g = 1, nothing amplified
    INCONSISTENT_GAIN,   // amplitude records disagree on g
};

const char* verdict_name(Verdict v);

struct CertificationResult {
    Verdict verdict;
    double g_est = 0.0;
    std::vector<double> bbdag_required; // per record: (out_n - g^2 in_n)/(g^2 - 1)
    double spread = 0.0;
    std::optional<std::pair<std::string, std::string>> witness;
};

// Amplitude gain from records with |in_amp| > 1e-9. Checks the gain is real
// positive (|Im g| <= tol |g|) and consistent across records (relative spread
// <= tol). Throws NoAmplitudeRecord / NotPhasePreserving / InconsistentGain.
double estimate_gain(std::span<const MomentRecord> records, double tol = 1e-6);

// Necessary-condition test on the first two moments: a paramp matching the
// amplitude gain must have G = g and <b> = 0, which forces a single idler
// value <b b+> = (out_n - g^2 in_n)/(g^2 - 1) per record. The records are
// simulable (necessary sense) only if those values agree and are >= 1
// ([b, b+] = 1 forbids a sub-vacuum idler). A single record degrades to the
// one-point check.
CertificationResult certify(std::span<const MomentRecord> records, double g, double tol = 1e-6);

// estimate_gain + certify, mapping InconsistentGain into a verdict.
CertificationResult certify_records(std::span<const MomentRecord> records, double tol = 1e-6);

// Three-photon forbidden region: rows over n_in of the lower bound
// lb = g^6 n_in + (g^6-1)/3 against the paramp lines
// g^2 n_in + (g^2-1) <b b+>, with the crossing points n* per <b b+>.
struct RegionTable {
    double g = 1.0;
    std::vector<double> bbdag_list;
    std::vector<double> n_star;           // per bbdag
    std::vector<double> n_in;             // grid
    std::vector<double> lb;               // per grid point
    std::vector<std::vector<double>> paramp; // [bbdag][grid point]
};

RegionTable forbidden_region(double gamma, double t, std::span<const double> n_in_grid,
                             std::span<const double> bbdag_list);

} // namespace linamp
