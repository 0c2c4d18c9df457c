#pragma once

#include "linamp/fock.hpp"

namespace linamp {

struct ParampSpec {
    double gain_G = 1.0;      // G = cosh r, r >= 0
    StateKind sigma = Vacuum{};
    int dim_a = 32;
    int dim_b = 32;

    void validate() const;
};

// Two-mode squeeze S = exp[r (a b - a+ b+)] on the product space (A major,
// index = n_a * dim_b + n_b). The generator conserves n_a - n_b, so S is
// assembled from per-sector exponentials; the result equals the dense matrix
// exponential to roundoff. Materializing the product-space matrix is capped
// at dim_a * dim_b <= 4096; apply_paramp never builds it.
MatrixOperator squeeze_unitary(double r, int dim_a, int dim_b);

// Tr_B[ S (rho_in (x) sigma) S+ ] without forming product-space matrices.
DensityMatrix apply_paramp(const DensityMatrix& rho_in, const ParampSpec& spec);

// First-moment predictions:
//   mean_amp = G <a>_in + sqrt(G^2-1) <b>_sigma
//   mean_n   = G^2 <n>_in + (G^2-1) <b b+>_sigma
struct ParampPrediction {
    Cplx mean_amp;
    double mean_n;
};
ParampPrediction paramp_predict(Cplx in_amp, double in_n, const ParampSpec& spec);

// <b> and <b b+> of an idler state.
Cplx sigma_mean_b(const StateKind& sigma);
double sigma_mean_bbdag(const StateKind& sigma);

} // namespace linamp
