#include "linamp/lindblad.hpp"

#include <cmath>

#include "linamp/expm.hpp"

namespace linamp {

namespace {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::VectorXd;

// w(i) = <i| a^k |i+k> = sqrt((i+1)(i+2)...(i+k)), i = 0 .. dim-1-k.
VectorXd ladder_weights(int dim, int k) {
    const int m = dim - k;
    VectorXd w(m > 0 ? m : 0);
    for (int i = 0; i < m; ++i) {
        double prod = 1.0;
        for (int l = 1; l <= k; ++l) prod *= double(i + l);
        w(i) = std::sqrt(prod);
    }
    return w;
}

// Diagonal of L+L on the full space.
VectorXd ldagl_diag(int dim, const JumpTerm& term) {
    VectorXd d = VectorXd::Zero(dim);
    const VectorXd w = ladder_weights(dim, term.power);
    const int m = static_cast<int>(w.size());
    if (term.op == JumpTerm::Op::lower) {
        for (int i = 0; i < m; ++i) d(i + term.power) = w(i) * w(i); // n(n-1)...(n-k+1)
    } else {
        for (int i = 0; i < m; ++i) d(i) = w(i) * w(i); // (n+1)...(n+k)
    }
    return d;
}

// Per-spec structures hoisted out of the integration loop.
struct CompiledSpec {
    struct Term {
        double rate;
        JumpTerm::Op op;
        int k;
        ArrayXcd w_col;               // weights as column array (complex for cwise ops)
        Eigen::Array<Cplx, 1, -1> w_row;
        ArrayXd w2;                   // squared weights (diagonal path)
    };
    std::vector<Term> terms;
    ArrayXcd decay_col;               // (1/2) sum_k rate_k diag(L+L)
    Eigen::Array<Cplx, 1, -1> decay_row;
    ArrayXd decay_real;
    int dim = 0;
};

CompiledSpec compile_spec(const LindbladSpec& spec, int dim) {
    CompiledSpec cs;
    cs.dim = dim;
    VectorXd total_decay = VectorXd::Zero(dim);
    for (const auto& term : spec.terms) {
        total_decay += (0.5 * term.rate) * ldagl_diag(dim, term);
        if (term.rate == 0.0 || dim - term.power <= 0) continue;
        const VectorXd w = ladder_weights(dim, term.power);
        CompiledSpec::Term t;
        t.rate = term.rate;
        t.op = term.op;
        t.k = term.power;
        t.w_col = w.array().cast<Cplx>();
        t.w_row = t.w_col.transpose();
        t.w2 = w.array().square();
        cs.terms.push_back(std::move(t));
    }
    cs.decay_real = total_decay.array();
    cs.decay_col = total_decay.array().cast<Cplx>();
    cs.decay_row = cs.decay_col.transpose();
    return cs;
}

// drho = sum_k rate_k L rho L+  -  (D_i + D_j) o rho, D = (1/2) sum rate L+L.
Matrix apply_rhs(const CompiledSpec& cs, const Matrix& rho) {
    const int dim = cs.dim;
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& t : cs.terms) {
        const int m = dim - t.k;
        if (t.op == JumpTerm::Op::lower) {
            Matrix tmp = rho.bottomRightCorner(m, m);
            tmp.array().colwise() *= t.w_col;
            tmp.array().rowwise() *= t.w_row;
            out.topLeftCorner(m, m) += t.rate * tmp;
        } else {
            Matrix tmp = rho.topLeftCorner(m, m);
            tmp.array().colwise() *= t.w_col;
            tmp.array().rowwise() *= t.w_row;
            out.bottomRightCorner(m, m) += t.rate * tmp;
        }
    }
    out.array() -= rho.array().colwise() * cs.decay_col;
    out.array() -= rho.array().rowwise() * cs.decay_row;
    return out;
}

// Populations of a diagonal state follow a classical birth-death equation.
VectorXd apply_rhs_diagonal(const CompiledSpec& cs, const VectorXd& p) {
    const int dim = cs.dim;
    VectorXd out = VectorXd::Zero(dim);
    for (const auto& t : cs.terms) {
        const int m = dim - t.k;
        if (t.op == JumpTerm::Op::lower)
            out.head(m).array() += t.rate * t.w2 * p.tail(m).array();
        else
            out.tail(m).array() += t.rate * t.w2 * p.head(m).array();
    }
    out.array() -= 2.0 * cs.decay_real * p.array();
    return out;
}

struct Dp45Controls {
    double rel_tol, abs_tol, max_step;
};

// Dormand-Prince 5(4) with the standard embedded error estimate and FSAL.
// Works on any Eigen dense type with elementwise array ops. on_accept may
// throw to abort (used for the truncation guard).
template <typename State, typename Rhs, typename OnAccept>
State integrate_dp45(State y, double t_end, Rhs f, const Dp45Controls& ctl, OnAccept on_accept) {
    if (t_end == 0.0) return y;

    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    // y5 - y4hat coefficients (e2 = 0)
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = 0.0;
    State k1 = f(y);
    double h = std::min({t_end, ctl.max_step, 1e-3 * t_end + 1e-12});
    long rejected_in_row = 0;
    long total_steps = 0;

    while (t < t_end) {
        h = std::min(h, t_end - t);
        if (!(h > 0.0) || h < 1e-15 * std::max(1.0, t_end))
            throw ToleranceError("evolve: step size underflow at t=" + std::to_string(t));
        if (++total_steps > 20'000'000)
            throw ToleranceError("evolve: step budget exhausted (generator too stiff for the "
                                 "requested horizon)");

        State k2 = f(y + (h * a21) * k1);
        State k3 = f(y + (h * a31) * k1 + (h * a32) * k2);
        State k4 = f(y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3);
        State k5 = f(y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4);
        State k6 = f(y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 + (h * a64) * k4 +
                     (h * a65) * k5);
        State y_new =
            y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 + (h * b6) * k6;
        State k7 = f(y_new);
        State err = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
                    (h * e6) * k6 + (h * e7) * k7;

        const auto scale =
            (ctl.abs_tol + ctl.rel_tol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array());
        const double err_norm = std::sqrt((err.cwiseAbs().array() / scale).square().mean());

        if (err_norm <= 1.0) {
            t += h;
            y.swap(y_new);
            k1.swap(k7); // FSAL
            on_accept(y, t);
            rejected_in_row = 0;
        } else if (++rejected_in_row > 200) {
            throw ToleranceError("evolve: persistent step rejection");
        }
        const double factor = 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, factor));
        h = std::min(h, ctl.max_step);
    }
    return y;
}

double diag_tail(const Matrix& rho) {
    const int dim = static_cast<int>(rho.rows());
    double tail = 0.0;
    for (int i = dim - tail_levels(dim); i < dim; ++i) tail += rho(i, i).real();
    return tail;
}

double diag_tail(const VectorXd& p) {
    const int dim = static_cast<int>(p.size());
    return p.tail(tail_levels(dim)).sum();
}

bool exactly_diagonal(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (i != j && m(i, j) != Cplx(0.0, 0.0)) return false;
    return true;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix ladder_power_matrix(int dim, const JumpTerm& term) {
    Matrix L = Matrix::Zero(dim, dim);
    const VectorXd w = ladder_weights(dim, term.power);
    for (int i = 0; i < w.size(); ++i) {
        if (term.op == JumpTerm::Op::lower)
            L(i, i + term.power) = w(i);
        else
            L(i + term.power, i) = w(i);
    }
    return L;
}

DensityMatrix evolve_dense_expm(const DensityMatrix& rho0, const LindbladSpec& spec, double t) {
    const int dim = rho0.dim();
    if (dim > 64)
        throw DomainError("evolve(dense_expm): superoperator path is limited to dim <= 64");
    const int n2 = dim * dim;
    const Matrix ident = Matrix::Identity(dim, dim);

    // vec is column-major: vec(A rho B) = (B^T (x) A) vec(rho).
    Matrix super = Matrix::Zero(n2, n2);
    for (const auto& term : spec.terms) {
        const Matrix L = ladder_power_matrix(dim, term);
        const Matrix LdL = L.adjoint() * L;
        super += term.rate * (kron(L.conjugate(), L) - 0.5 * kron(ident, LdL) -
                              0.5 * kron(LdL.transpose(), ident));
    }

    Matrix prop = expm(super * t);
    Eigen::Map<const Vector> v0(rho0.entries().data(), n2);
    Vector vt = prop * v0;
    Matrix out = Eigen::Map<const Matrix>(vt.data(), dim, dim);
    out = (out + out.adjoint().eval()) / 2.0; // scrub roundoff asymmetry
    DensityMatrix result = DensityMatrix::create(rho0.space(), std::move(out));
    if (result.tail_mass() >= kEvolveTailTol)
        throw TruncationError("evolve: tail_mass " + std::to_string(result.tail_mass()) +
                              " at dim " + std::to_string(dim));
    return result;
}

} // namespace

void LindbladSpec::validate() const {
    if (terms.empty()) throw DomainError("LindbladSpec: term list must be nonempty");
    for (const auto& t : terms) {
        if (!(t.rate >= 0.0) || !std::isfinite(t.rate))
            throw DomainError("LindbladSpec: rates must be finite and >= 0");
        if (t.power < 1 || t.power > 3)
            throw DomainError("LindbladSpec: ladder power must be in {1,2,3}");
    }
}

int LindbladSpec::max_power() const {
    int p = 1;
    for (const auto& t : terms) p = std::max(p, t.power);
    return p;
}

Matrix rhs(const LindbladSpec& spec, const Matrix& rho) {
    spec.validate();
    if (rho.rows() != rho.cols()) throw DimensionMismatch("rhs: rho must be square");
    return apply_rhs(compile_spec(spec, static_cast<int>(rho.rows())), rho);
}

Eigen::VectorXd rhs_diagonal(const LindbladSpec& spec, const Eigen::VectorXd& p) {
    spec.validate();
    return apply_rhs_diagonal(compile_spec(spec, static_cast<int>(p.size())), p);
}

DensityMatrix evolve(const DensityMatrix& rho0, const LindbladSpec& spec, double t,
                     const EvolveConfig& cfg) {
    spec.validate();
    if (!(t >= 0.0)) throw DomainError("evolve: t must be >= 0");
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0))
        throw DomainError("evolve: rel_tol must lie in (0, 1)");
    if (t == 0.0) return rho0;
    if (cfg.method == EvolveConfig::Method::dense_expm)
        return evolve_dense_expm(rho0, spec, t);

    const Dp45Controls ctl{cfg.rel_tol, cfg.abs_tol, cfg.max_step};
    const int dim = rho0.dim();
    const CompiledSpec cs = compile_spec(spec, dim);

    auto tail_guard = [&](double tail, double at) {
        if (tail >= kEvolveTailTol)
            throw TruncationError("evolve: tail_mass " + std::to_string(tail) + " at t=" +
                                  std::to_string(at) + ", dim " + std::to_string(dim) +
                                  " cannot hold the heated state");
    };

    Matrix out;
    if (exactly_diagonal(rho0.entries())) {
        // Populations close on themselves for pure ladder-power dissipators.
        VectorXd p0 = rho0.entries().diagonal().real();
        VectorXd pt = integrate_dp45(
            std::move(p0), t, [&](const VectorXd& p) { return apply_rhs_diagonal(cs, p); }, ctl,
            [&](const VectorXd& p, double at) { tail_guard(diag_tail(p), at); });
        out = Matrix::Zero(dim, dim);
        out.diagonal() = pt.cast<Cplx>();
    } else {
        out = integrate_dp45(
            Matrix(rho0.entries()), t, [&](const Matrix& r) { return apply_rhs(cs, r); }, ctl,
            [&](const Matrix& r, double at) { tail_guard(diag_tail(r), at); });
        out = (out + out.adjoint().eval()) / 2.0; // scrub roundoff asymmetry
    }

    DensityMatrix result = DensityMatrix::create(rho0.space(), std::move(out));
    tail_guard(result.tail_mass(), t);
    return result;
}

double phase_covariance_residual(const LindbladSpec& spec, const DensityMatrix& rho, double phi,
                                 double t, const EvolveConfig& cfg) {
    DensityMatrix lhs = evolve(phase_shift(rho, phi), spec, t, cfg);
    DensityMatrix rhs_state = phase_shift(evolve(rho, spec, t, cfg), phi);
    return trace_distance(lhs, rhs_state);
}

PhaseInsensitivityReport phase_insensitivity_report(const LindbladSpec& spec,
                                                    const DensityMatrix& rho0, double t,
                                                    std::span<const double> phi_grid,
                                                    const EvolveConfig& cfg) {
    constexpr double kDegenerateTol = 1e-9;
    const MomentReport m0 = moments(rho0, phi_grid);
    const DensityMatrix rho_t = evolve(rho0, spec, t, cfg);
    const MomentReport mt = moments(rho_t, phi_grid);

    PhaseInsensitivityReport rep;
    bool any_valid = false;
    for (size_t i = 0; i < phi_grid.size(); ++i) {
        const double x0 = m0.quad_mean[i].second;
        const double xt = mt.quad_mean[i].second;
        rep.phis.push_back(phi_grid[i]);
        if (std::abs(x0) < kDegenerateTol) {
            rep.g.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.N.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        any_valid = true;
        const double g = xt / x0;
        rep.g.push_back(g);
        rep.N.push_back(mt.quad_var[i].second - g * g * m0.quad_var[i].second);
    }
    if (!any_valid)
        throw DegenerateInput("phase_insensitivity_report: <x_phi(0)> vanishes on the whole "
                              "grid; use an input with nonzero amplitude");
    return rep;
}

} // namespace linamp
