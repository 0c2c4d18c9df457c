#include "linamp/fock.hpp"

#include <cmath>

namespace linamp {

namespace {

double tail_of_diagonal(const Matrix& m) {
    const int dim = static_cast<int>(m.rows());
    const int k = tail_levels(dim);
    double tail = 0.0;
    for (int i = dim - k; i < dim; ++i) tail += m(i, i).real();
    return tail;
}

bool is_exactly_diagonal(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (i != j && m(i, j) != Cplx(0.0, 0.0)) return false;
    return true;
}

} // namespace

DensityMatrix DensityMatrix::create(FockSpace space, Matrix entries) {
    if (entries.rows() != space.dim || entries.cols() != space.dim)
        throw DimensionMismatch("DensityMatrix: entries shape does not match space dim");

    const double herm = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermTol)
        throw InvariantViolation("DensityMatrix: hermiticity defect " + std::to_string(herm));

    const double tr_dev = std::abs(entries.trace() - Cplx(1.0));
    if (tr_dev > kTraceTol)
        throw InvariantViolation("DensityMatrix: trace deviates from 1 by " + std::to_string(tr_dev));

    // Diagonal states (fock/thermal and diagonal-path evolution outputs) have
    // their spectrum on the diagonal; skip the dense eigensolver for those.
    double min_eig;
    if (is_exactly_diagonal(entries)) {
        min_eig = entries.diagonal().real().minCoeff();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es;
        es.compute((entries + entries.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
        min_eig = es.eigenvalues().minCoeff();
    }
    if (min_eig < kPsdTol)
        throw InvariantViolation("DensityMatrix: min eigenvalue " + std::to_string(min_eig));

    const double tail = tail_of_diagonal(entries);
    return DensityMatrix(space, std::move(entries), tail);
}

std::pair<MatrixOperator, MatrixOperator> build_ladder(FockSpace space) {
    Matrix a = Matrix::Zero(space.dim, space.dim);
    for (int i = 0; i + 1 < space.dim; ++i) a(i, i + 1) = std::sqrt(double(i + 1));
    Matrix ad = a.adjoint();
    return {MatrixOperator(space, std::move(a)), MatrixOperator(space, std::move(ad))};
}

MatrixOperator number_op(FockSpace space) {
    Matrix n = Matrix::Zero(space.dim, space.dim);
    for (int i = 0; i < space.dim; ++i) n(i, i) = double(i);
    return MatrixOperator(space, std::move(n));
}

MatrixOperator quadrature_op(FockSpace space, double phi) {
    auto [a, ad] = build_ladder(space);
    const Cplx e = std::exp(Cplx(0.0, -phi));
    Matrix x = (e * a.entries() + std::conj(e) * ad.entries()) / std::sqrt(2.0);
    return MatrixOperator(space, std::move(x));
}

Vector coherent_amplitudes(Cplx alpha, int dim) {
    Vector c(dim);
    c(0) = 1.0;
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    c *= std::exp(-std::norm(alpha) / 2.0);
    c /= c.norm();
    return c;
}

DensityMatrix make_state(const StateKind& kind, FockSpace space) {
    constexpr double kBuildTailTol = 1e-8;
    const int dim = space.dim;

    Matrix rho = Matrix::Zero(dim, dim);
    if (std::holds_alternative<Vacuum>(kind)) {
        rho(0, 0) = 1.0;
    } else if (const auto* f = std::get_if<Fock>(&kind)) {
        if (f->n < 0) throw DomainError("make_state: fock n must be >= 0");
        if (f->n >= dim)
            throw DomainError("make_state: fock n=" + std::to_string(f->n) +
                              " does not fit dim=" + std::to_string(dim));
        rho(f->n, f->n) = 1.0;
    } else if (const auto* c = std::get_if<Coherent>(&kind)) {
        Vector amp = coherent_amplitudes(c->alpha, dim);
        rho = amp * amp.adjoint();
    } else {
        const auto& th = std::get<Thermal>(kind);
        if (th.nbar < 0.0) throw DomainError("make_state: thermal nbar must be >= 0");
        if (th.nbar == 0.0) {
            rho(0, 0) = 1.0;
        } else {
            const double q = th.nbar / (th.nbar + 1.0);
            double w = 1.0, sum = 0.0;
            for (int i = 0; i < dim; ++i, w *= q) {
                rho(i, i) = w;
                sum += w;
            }
            rho /= sum; // renormalize the truncated geometric weights
        }
    }

    DensityMatrix out = DensityMatrix::create(space, std::move(rho));
    if (out.tail_mass() >= kBuildTailTol)
        throw TruncationError("make_state: tail_mass " + std::to_string(out.tail_mass()) +
                              " at dim " + std::to_string(dim) + "; increase dim");
    return out;
}

Vector make_pure_state(const StateKind& kind, FockSpace space) {
    constexpr double kBuildTailTol = 1e-8;
    const int dim = space.dim;
    Vector psi = Vector::Zero(dim);
    if (std::holds_alternative<Vacuum>(kind)) {
        psi(0) = 1.0;
    } else if (const auto* f = std::get_if<Fock>(&kind)) {
        if (f->n < 0 || f->n >= dim) throw DomainError("make_pure_state: fock n out of range");
        psi(f->n) = 1.0;
    } else if (const auto* c = std::get_if<Coherent>(&kind)) {
        psi = coherent_amplitudes(c->alpha, dim);
    } else {
        throw DomainError("make_pure_state: thermal states are not pure");
    }
    double tail = 0.0;
    for (int i = dim - tail_levels(dim); i < dim; ++i) tail += std::norm(psi(i));
    if (tail >= kBuildTailTol)
        throw TruncationError("make_pure_state: tail_mass " + std::to_string(tail));
    return psi;
}

MomentReport moments(const DensityMatrix& rho, std::span<const double> phi_grid) {
    const Matrix& r = rho.entries();
    const int dim = rho.dim();

    // <a>   = sum sqrt(n+1) rho(n+1, n)
    // <a^2> = sum sqrt((n+1)(n+2)) rho(n+2, n)
    Cplx a1(0.0), a2(0.0);
    for (int n = 0; n + 1 < dim; ++n) a1 += std::sqrt(double(n + 1)) * r(n + 1, n);
    for (int n = 0; n + 2 < dim; ++n) a2 += std::sqrt(double((n + 1) * (n + 2))) * r(n + 2, n);

    double n1 = 0.0, n2 = 0.0, a2n = 0.0;
    for (int n = 0; n < dim; ++n) {
        const double p = r(n, n).real();
        n1 += double(n) * p;
        n2 += double(n) * double(n) * p;
        a2n += double(n) * double(n - 1) * p;
    }

    MomentReport rep;
    rep.mean_amp = a1;
    rep.mean_n = n1;
    rep.mean_n2 = n2;
    rep.mean_a2norm = a2n;
    rep.tail_mass = rho.tail_mass();
    rep.quad_mean.reserve(phi_grid.size());
    rep.quad_var.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        const Cplx e = std::exp(Cplx(0.0, -phi));
        // <x_phi> = sqrt(2) Re(e^{-i phi} <a>), <x_phi^2> = Re(e^{-2i phi} <a^2>) + <n> + 1/2
        const double xm = std::sqrt(2.0) * (e * a1).real();
        const double x2 = (e * e * a2).real() + n1 + 0.5;
        rep.quad_mean.emplace_back(phi, xm);
        rep.quad_var.emplace_back(phi, x2 - xm * xm);
    }
    return rep;
}

DensityMatrix tensor(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
    const int da = rho_a.dim(), db = rho_b.dim();
    Matrix out(da * db, da * db);
    for (int ia = 0; ia < da; ++ia)
        for (int ja = 0; ja < da; ++ja)
            out.block(ia * db, ja * db, db, db) = rho_a.entries()(ia, ja) * rho_b.entries();
    return DensityMatrix::create(FockSpace(da * db), std::move(out));
}

DensityMatrix partial_trace_b(const DensityMatrix& rho_ab, int dim_a, int dim_b) {
    if (rho_ab.dim() != dim_a * dim_b)
        throw DimensionMismatch("partial_trace_b: dim_a * dim_b != product dim");
    Matrix out = Matrix::Zero(dim_a, dim_a);
    const Matrix& r = rho_ab.entries();
    for (int ia = 0; ia < dim_a; ++ia)
        for (int ja = 0; ja < dim_a; ++ja) {
            Cplx s(0.0);
            for (int k = 0; k < dim_b; ++k) s += r(ia * dim_b + k, ja * dim_b + k);
            out(ia, ja) = s;
        }
    return DensityMatrix::create(FockSpace(dim_a), std::move(out));
}

DensityMatrix phase_shift(const DensityMatrix& rho, double phi) {
    const int dim = rho.dim();
    Matrix out(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
            out(i, j) = rho.entries()(i, j) * std::exp(Cplx(0.0, -phi * double(i - j)));
    return DensityMatrix::create(rho.space(), std::move(out));
}

double trace_distance(const Matrix& a, const Matrix& b) {
    Matrix d = a - b;
    d = (d + d.adjoint().eval()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("trace_distance: dims differ");
    return trace_distance(a.entries(), b.entries());
}

} // namespace linamp
