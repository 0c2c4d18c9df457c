#include "linamp/paramp.hpp"

#include <cmath>
#include <vector>

namespace linamp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Exponentials of the squeeze generator restricted to the sectors
// d = n_a - n_b. Within a sector, ordered by j (the smaller of the two mode
// indices), the generator is the real antisymmetric tridiagonal
//   T[j+1, j] = -c_j,  T[j, j+1] = +c_j,  c_j = r sqrt((na_j + 1)(nb_j + 1)).
// With D = diag(i^j), T = D^{-1} (-i S_tri) D for the real symmetric
// tridiagonal S_tri[j+1, j] = c_j, so exp(T) = Re[i^{q-p} (V e^{-i L} V^T)]
// from the tridiagonal eigendecomposition S_tri = V L V^T.
struct SqueezeSectors {
    int dim_a, dim_b;
    std::vector<MatrixXd> blocks; // index d + dim_b - 1

    const MatrixXd& block(int d) const { return blocks[d + dim_b - 1]; }

    // (n_a, n_b) of sector coordinate j.
    static int na_of(int d, int j) { return d >= 0 ? j + d : j; }
    static int nb_of(int d, int j) { return d >= 0 ? j : j - d; }

    int sector_size(int d) const {
        return d >= 0 ? std::min(dim_a - d, dim_b) : std::min(dim_a, dim_b + d);
    }
};

MatrixXd sector_exponential(double r, int d, int m) {
    if (m == 1) return MatrixXd::Ones(1, 1);
    VectorXd sub(m - 1);
    for (int j = 0; j + 1 < m; ++j) {
        const double na = SqueezeSectors::na_of(d, j);
        const double nb = SqueezeSectors::nb_of(d, j);
        sub(j) = r * std::sqrt((na + 1.0) * (nb + 1.0));
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    es.computeFromTridiagonal(VectorXd::Zero(m), sub, Eigen::ComputeEigenvectors);
    const MatrixXd& v = es.eigenvectors();
    const VectorXd& lam = es.eigenvalues();

    Matrix phases = (Cplx(0.0, -1.0) * lam.cast<Cplx>()).array().exp().matrix().asDiagonal();
    Matrix f = v.cast<Cplx>() * phases * v.transpose().cast<Cplx>();

    MatrixXd out(m, m);
    for (int q = 0; q < m; ++q)
        for (int p = 0; p < m; ++p) {
            switch (((q - p) % 4 + 4) % 4) { // Re[i^{q-p} f]
                case 0: out(p, q) = f(p, q).real(); break;
                case 1: out(p, q) = -f(p, q).imag(); break;
                case 2: out(p, q) = -f(p, q).real(); break;
                default: out(p, q) = f(p, q).imag(); break;
            }
        }
    return out;
}

SqueezeSectors build_sectors(double r, int dim_a, int dim_b) {
    SqueezeSectors s;
    s.dim_a = dim_a;
    s.dim_b = dim_b;
    s.blocks.resize(dim_a + dim_b - 1);
    for (int d = -(dim_b - 1); d <= dim_a - 1; ++d) {
        const int m = s.sector_size(d);
        s.blocks[d + dim_b - 1] = sector_exponential(r, d, m);
    }
    return s;
}

// Kraus diagonal for idler transition m -> mp: k[i] = <i, mp | S | i - off, m>
// over output indices i, with off = mp - m. Entries are read from the sector
// blocks; rows outside a sector are zero.
VectorXd kraus_diagonal(const SqueezeSectors& s, int m, int mp, int& lo_out) {
    const int off = mp - m;
    const int lo = std::max(0, off);
    const int hi = std::min(s.dim_a - 1, s.dim_a - 1 + off);
    lo_out = lo;
    VectorXd k = VectorXd::Zero(hi - lo + 1);
    for (int i = lo; i <= hi; ++i) {
        const int n = i - off; // input A index
        const int d = n - m;   // conserved n_a - n_b
        const MatrixXd& blk = s.block(d);
        const int j = d >= 0 ? m : n;
        const int jp = d >= 0 ? mp : i;
        if (j < blk.cols() && jp < blk.rows()) k(i - lo) = blk(jp, j);
    }
    return k;
}

// rho_out += sum_m q_m K rho K+ for diagonal sigma, grouped by offset:
// out[i,j] += W[i,j] rho[i-off, j-off], W[i,j] = sum_m q_m k_i k_j.
Matrix apply_diagonal_sigma(const SqueezeSectors& s, const Matrix& rho, const VectorXd& q) {
    constexpr double kWeightCut = 1e-18;
    const int da = s.dim_a, db = s.dim_b;
    Matrix out = Matrix::Zero(da, da);
    MatrixXd w(da, da);
    for (int off = -(db - 1); off <= db - 1; ++off) {
        const int lo = std::max(0, off);
        const int len = da - std::abs(off);
        if (len <= 0) continue;
        w.topLeftCorner(len, len).setZero();
        bool any = false;
        for (int m = std::max(0, -off); m < db && m + off < db; ++m) {
            const int mp = m + off;
            if (q(m) < kWeightCut) continue;
            int klo = 0;
            const VectorXd k = kraus_diagonal(s, m, mp, klo);
            w.topLeftCorner(len, len).noalias() += q(m) * (k * k.transpose());
            any = true;
        }
        if (!any) continue;
        for (int j = 0; j < len; ++j)
            for (int i = 0; i < len; ++i)
                out(i + lo, j + lo) += w(i, j) * rho(i + lo - off, j + lo - off);
    }
    return out;
}

// Coherent sigma is rank one: one Kraus operator per output idler level mp,
// B_mp = sum_m beta_m K_{mp,m}, applied through its nonzero diagonals.
Matrix apply_coherent_sigma(const SqueezeSectors& s, const Matrix& rho, const Vector& beta) {
    constexpr double kAmpCut = 1e-16;
    const int da = s.dim_a, db = s.dim_b;
    Matrix out = Matrix::Zero(da, da);
    Matrix tmp(da, da);
    for (int mp = 0; mp < db; ++mp) {
        // tmp = B rho, one nonzero diagonal of B at a time
        tmp.setZero();
        bool any = false;
        for (int m = 0; m < db; ++m) {
            if (std::abs(beta(m)) < kAmpCut) continue;
            const int off = mp - m;
            const int lo = std::max(0, off);
            const int len = da - std::abs(off);
            if (len <= 0) continue;
            int klo = 0;
            const VectorXd k = kraus_diagonal(s, m, mp, klo);
            any = true;
            for (int j = 0; j < da; ++j)
                for (int i = 0; i < len; ++i)
                    tmp(i + lo, j) += beta(m) * k(i) * rho(i + lo - off, j);
        }
        if (!any) continue;
        // out += tmp B+: out(:, jj) += conj(B[jj, j]) tmp(:, j) with jj = j + off
        for (int m = 0; m < db; ++m) {
            if (std::abs(beta(m)) < kAmpCut) continue;
            const int off = mp - m;
            const int lo = std::max(0, off);
            const int len = da - std::abs(off);
            if (len <= 0) continue;
            int klo = 0;
            const VectorXd k = kraus_diagonal(s, m, mp, klo);
            for (int jj = lo; jj < lo + len; ++jj)
                out.col(jj) += std::conj(beta(m)) * k(jj - lo) * tmp.col(jj - off);
        }
    }
    return out;
}

} // namespace

void ParampSpec::validate() const {
    if (!(gain_G >= 1.0)) throw DomainError("ParampSpec: gain_G must be >= 1");
    if (dim_a < 2 || dim_b < 2) throw DomainError("ParampSpec: dims must be >= 2");
    if (std::holds_alternative<Thermal>(sigma) && std::get<Thermal>(sigma).nbar < 0.0)
        throw DomainError("ParampSpec: thermal nbar must be >= 0");
}

MatrixOperator squeeze_unitary(double r, int dim_a, int dim_b) {
    if (!(r >= 0.0)) throw DomainError("squeeze_unitary: r must be >= 0");
    if (dim_a < 2 || dim_b < 2) throw DomainError("squeeze_unitary: dims must be >= 2");
    if (dim_a * dim_b > 4096)
        throw DomainError("squeeze_unitary: product dim > 4096 would materialize a huge dense "
                          "matrix; apply_paramp handles larger spaces without it");
    const SqueezeSectors s = build_sectors(r, dim_a, dim_b);
    Matrix out = Matrix::Zero(dim_a * dim_b, dim_a * dim_b);
    for (int d = -(dim_b - 1); d <= dim_a - 1; ++d) {
        const MatrixXd& blk = s.block(d);
        const int m = static_cast<int>(blk.rows());
        for (int jp = 0; jp < m; ++jp)
            for (int j = 0; j < m; ++j) {
                const int row = SqueezeSectors::na_of(d, jp) * dim_b + SqueezeSectors::nb_of(d, jp);
                const int col = SqueezeSectors::na_of(d, j) * dim_b + SqueezeSectors::nb_of(d, j);
                out(row, col) = blk(jp, j);
            }
    }
    return MatrixOperator(FockSpace(dim_a * dim_b), std::move(out));
}

DensityMatrix apply_paramp(const DensityMatrix& rho_in, const ParampSpec& spec) {
    spec.validate();
    if (rho_in.dim() != spec.dim_a)
        throw DimensionMismatch("apply_paramp: rho_in dim != spec.dim_a");

    const double r = std::acosh(spec.gain_G);
    const SqueezeSectors sectors = build_sectors(r, spec.dim_a, spec.dim_b);

    Matrix out;
    if (std::holds_alternative<Coherent>(spec.sigma)) {
        const Vector beta =
            make_pure_state(spec.sigma, FockSpace(spec.dim_b)); // tail-checked
        out = apply_coherent_sigma(sectors, rho_in.entries(), beta);
    } else {
        const DensityMatrix sigma = make_state(spec.sigma, FockSpace(spec.dim_b));
        const VectorXd q = sigma.entries().diagonal().real();
        out = apply_diagonal_sigma(sectors, rho_in.entries(), q);
    }

    out = (out + out.adjoint().eval()) / 2.0;
    DensityMatrix result = DensityMatrix::create(rho_in.space(), std::move(out));
    if (result.tail_mass() >= 1e-6)
        throw TruncationError("apply_paramp: output tail_mass " +
                              std::to_string(result.tail_mass()) + " at dim_a " +
                              std::to_string(spec.dim_a) + "; increase dims");
    return result;
}

Cplx sigma_mean_b(const StateKind& sigma) {
    if (const auto* c = std::get_if<Coherent>(&sigma)) return c->alpha;
    return Cplx(0.0, 0.0);
}

double sigma_mean_bbdag(const StateKind& sigma) {
    // <b b+> = <n>_sigma + 1
    if (std::holds_alternative<Vacuum>(sigma)) return 1.0;
    if (const auto* f = std::get_if<Fock>(&sigma)) return double(f->n) + 1.0;
    if (const auto* c = std::get_if<Coherent>(&sigma)) return std::norm(c->alpha) + 1.0;
    const auto& th = std::get<Thermal>(sigma);
    if (th.nbar < 0.0) throw DomainError("sigma_mean_bbdag: thermal nbar must be >= 0");
    return th.nbar + 1.0;
}

ParampPrediction paramp_predict(Cplx in_amp, double in_n, const ParampSpec& spec) {
    spec.validate();
    if (!(in_n >= 0.0)) throw DomainError("paramp_predict: in_n must be >= 0");
    const double G = spec.gain_G;
    const double root = std::sqrt(G * G - 1.0);
    ParampPrediction out;
    out.mean_amp = G * in_amp + root * sigma_mean_b(spec.sigma);
    out.mean_n = G * G * in_n + (G * G - 1.0) * sigma_mean_bbdag(spec.sigma);
    return out;
}

} // namespace linamp
