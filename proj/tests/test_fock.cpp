#include <doctest.h>

#include <cmath>
#include <random>

#include "linamp/fock.hpp"

using namespace linamp;

namespace {

// Independent coherent-state coefficients for oracle comparisons: direct
// factorial evaluation in extended precision, no shared code with the library
// recurrence.
Eigen::VectorXcd coherent_oracle(Cplx alpha, int dim) {
    Eigen::VectorXcd c(dim);
    long double fact = 1.0L;
    for (int n = 0; n < dim; ++n) {
        if (n > 0) fact *= n;
        const std::complex<long double> al(alpha.real(), alpha.imag());
        std::complex<long double> an = std::pow(al, n);
        c(n) = Cplx(double((an / std::sqrt(fact)).real()), double((an / std::sqrt(fact)).imag()));
    }
    c /= c.norm();
    return c;
}

DensityMatrix random_pure_state(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Vector psi(dim);
    for (int i = 0; i < dim; ++i) psi(i) = Cplx(gauss(rng), gauss(rng));
    // Keep the top tenth empty so construction passes the tail guard.
    for (int i = dim - tail_levels(dim); i < dim; ++i) psi(i) = 0.0;
    psi /= psi.norm();
    return DensityMatrix::create(FockSpace(dim), psi * psi.adjoint());
}

} // namespace

TEST_SUITE("fock") {

TEST_CASE("ladder operators at dim 2 and the truncated commutator") {
    FockSpace sp(2);
    auto [a, ad] = build_ladder(sp);
    CHECK(a.entries()(0, 1) == Cplx(1.0));
    CHECK(a.entries()(0, 0) == Cplx(0.0));
    CHECK(a.entries()(1, 0) == Cplx(0.0));
    CHECK(a.entries()(1, 1) == Cplx(0.0));

    for (int dim : {2, 5, 17}) {
        FockSpace s(dim);
        auto [al, adl] = build_ladder(s);
        Matrix num = adl.entries() * al.entries();
        for (int i = 0; i < dim; ++i) CHECK(num(i, i).real() == doctest::Approx(i).epsilon(1e-14));
        // [a, a+] = 1 except the bottom-right entry, which truncation forces
        // to -(dim-1).
        Matrix comm = al.entries() * adl.entries() - adl.entries() * al.entries();
        for (int i = 0; i + 1 < dim; ++i) CHECK(comm(i, i).real() == doctest::Approx(1.0));
        CHECK(comm(dim - 1, dim - 1).real() == doctest::Approx(-(dim - 1.0)));
    }
}

TEST_CASE("FockSpace rejects dim < 2") {
    CHECK_THROWS_AS(FockSpace(1), DomainError);
    CHECK_THROWS_AS(FockSpace(0), DomainError);
}

TEST_CASE("make_state: coherent(0) degenerates to vacuum") {
    FockSpace sp(12);
    auto vac = make_state(Vacuum{}, sp);
    auto coh = make_state(Coherent{0.0}, sp);
    CHECK(trace_distance(vac, coh) < 1e-14);
}

TEST_CASE("make_state: coherent(1) at dim 40 has mean_n = 1") {
    auto rho = make_state(Coherent{1.0}, FockSpace(40));
    CHECK(moments(rho).mean_n == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("make_state: truncated thermal(2) at dim 60 against a direct geometric sum") {
    const int dim = 60;
    auto rho = make_state(Thermal{2.0}, FockSpace(dim));

    // Oracle: renormalized geometric weights summed in extended precision.
    long double q = 2.0L / 3.0L, w = 1.0L, norm = 0.0L, mean = 0.0L;
    for (int n = 0; n < dim; ++n, w *= q) {
        norm += w;
        mean += n * w;
    }
    const double expected = double(mean / norm);

    const auto m = moments(rho);
    CHECK(m.mean_n == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(m.mean_n - expected) < 1e-12);
    CHECK(rho.entries().diagonal().real().minCoeff() >= 0.0);
}

TEST_CASE("make_state error paths") {
    FockSpace sp(10);
    CHECK_THROWS_AS(make_state(Fock{10}, sp), DomainError);
    CHECK_THROWS_AS(make_state(Fock{-1}, sp), DomainError);
    CHECK_THROWS_AS(make_state(Thermal{-0.5}, sp), DomainError);
    // |alpha|^2 = 25 cannot fit 10 levels.
    CHECK_THROWS_AS(make_state(Coherent{5.0}, sp), TruncationError);
    // A Fock state inside the top tenth is pure tail.
    CHECK_THROWS_AS(make_state(Fock{39}, FockSpace(40)), TruncationError);
}

TEST_CASE("DensityMatrix::create enforces the state invariants") {
    FockSpace sp(2);
    Matrix bad(2, 2);
    bad << Cplx(0.5), Cplx(0.3, 0.1), Cplx(0.3, 0.2), Cplx(0.5);
    CHECK_THROWS_AS(DensityMatrix::create(sp, bad), InvariantViolation); // not Hermitian

    Matrix tr(2, 2);
    tr << 0.7, 0.0, 0.0, 0.5;
    CHECK_THROWS_AS(DensityMatrix::create(sp, tr), InvariantViolation); // trace 1.2

    Matrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix::create(sp, neg), InvariantViolation); // negative eigenvalue
}

TEST_CASE("moments of vacuum and fock(1)") {
    FockSpace sp(16);
    const double phis[] = {0.0, 0.7, 1.9};
    auto mv = moments(make_state(Vacuum{}, sp), phis);
    CHECK(std::abs(mv.mean_amp) < 1e-15);
    CHECK(mv.mean_n == doctest::Approx(0.0));
    for (auto& [phi, var] : mv.quad_var) CHECK(var == doctest::Approx(0.5).epsilon(1e-12));

    auto m1 = moments(make_state(Fock{1}, sp));
    CHECK(m1.mean_n == doctest::Approx(1.0));
    CHECK(m1.mean_n2 == doctest::Approx(1.0));
    CHECK(m1.mean_a2norm == doctest::Approx(0.0)); // a^2 |1> = 0
}

TEST_CASE("moments of coherent(2) against the brute-force expansion") {
    const int dim = 60;
    auto rho = make_state(Coherent{2.0}, FockSpace(dim));
    auto m = moments(rho);
    CHECK(std::abs(m.mean_amp - Cplx(2.0)) < 1e-8);

    Eigen::VectorXcd c = coherent_oracle(2.0, dim);
    Cplx amp(0.0);
    for (int n = 0; n + 1 < dim; ++n) amp += std::conj(c(n)) * c(n + 1) * std::sqrt(n + 1.0);
    CHECK(std::abs(m.mean_amp - amp) < 1e-12);
}

TEST_CASE("variance inequality <n^2> >= <n>^2 across state kinds") {
    FockSpace sp(48);
    for (auto kind : {StateKind{Vacuum{}}, StateKind{Fock{3}}, StateKind{Coherent{Cplx(1.0, 0.5)}},
                      StateKind{Thermal{1.7}}}) {
        auto m = moments(make_state(kind, sp));
        CHECK(m.mean_n2 + 1e-12 >= m.mean_n * m.mean_n);
    }
}

TEST_CASE("tensor: vacuum (x) vacuum and trace multiplicativity") {
    FockSpace sp(6);
    auto v = make_state(Vacuum{}, sp);
    auto vv = tensor(v, v);
    CHECK(vv.entries()(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(vv.entries().trace() - Cplx(1.0)) < 1e-14);

    FockSpace big(40);
    auto th = make_state(Thermal{0.4}, big);
    auto vb = make_state(Vacuum{}, big);
    CHECK(std::abs(tensor(th, vb).entries().trace() - Cplx(1.0)) < 1e-13);
}

TEST_CASE("tensor: fock(1) (x) fock(2) is the product projector, A-major") {
    FockSpace sp(5);
    auto r = tensor(make_state(Fock{1}, sp), make_state(Fock{2}, sp));
    const int idx = 1 * 5 + 2; // A index major
    CHECK(r.entries()(idx, idx).real() == doctest::Approx(1.0));
    auto reduced = partial_trace_b(r, 5, 5);
    CHECK(moments(reduced).mean_n == doctest::Approx(1.0));
}

TEST_CASE("partial_trace_b undoes tensor on random product states") {
    std::mt19937_64 rng(7042);
    for (int trial = 0; trial < 10; ++trial) {
        auto ra = random_pure_state(9, rng);
        auto rb = random_pure_state(7, rng);
        auto back = partial_trace_b(tensor(ra, rb), 9, 7);
        CHECK(trace_distance(back, ra) <= 1e-12);
    }
}

TEST_CASE("partial_trace_b on a correlated diagonal state") {
    // sum p_n |n,n><n,n| reduces to diag(p).
    const int d = 4;
    Matrix big = Matrix::Zero(d * d, d * d);
    const double p[] = {0.4, 0.3, 0.2, 0.1};
    for (int n = 0; n < d; ++n) big(n * d + n, n * d + n) = p[n];
    auto reduced = partial_trace_b(DensityMatrix::create(FockSpace(d * d), big), d, d);
    for (int n = 0; n < d; ++n) CHECK(reduced.entries()(n, n).real() == doctest::Approx(p[n]));
}

TEST_CASE("partial_trace_b rejects mismatched dims") {
    auto v = make_state(Vacuum{}, FockSpace(6));
    CHECK_THROWS_AS(partial_trace_b(v, 2, 4), DimensionMismatch);
}

TEST_CASE("phase_shift basics") {
    FockSpace sp(30);
    auto coh = make_state(Coherent{1.0}, sp);
    CHECK(trace_distance(phase_shift(coh, 0.0), coh) < 1e-14);

    const double phi = 0.9;
    auto shifted = phase_shift(coh, phi);
    CHECK(std::abs(moments(shifted).mean_amp - std::exp(Cplx(0.0, -phi))) < 1e-12);

    auto f2 = make_state(Fock{2}, sp);
    CHECK(trace_distance(phase_shift(f2, 2.3), f2) < 1e-14);
}

TEST_CASE("moments compose with phase_shift: amplitude rotates, photon number fixed") {
    FockSpace sp(40);
    for (auto kind : {StateKind{Coherent{Cplx(0.8, -0.4)}}, StateKind{Thermal{0.6}},
                      StateKind{Fock{2}}}) {
        auto rho = make_state(kind, sp);
        auto m0 = moments(rho);
        for (double phi : {0.0, M_PI / 7, M_PI / 2, 1.0}) {
            auto m = moments(phase_shift(rho, phi));
            CHECK(std::abs(m.mean_amp - m0.mean_amp * std::exp(Cplx(0.0, -phi))) < 1e-12);
            CHECK(m.mean_n == doctest::Approx(m0.mean_n).epsilon(1e-12));
        }
    }
}

TEST_CASE("trace_distance endpoints") {
    FockSpace sp(8);
    auto v = make_state(Vacuum{}, sp);
    auto f = make_state(Fock{1}, sp);
    CHECK(trace_distance(v, v) == doctest::Approx(0.0));
    CHECK(trace_distance(v, f) == doctest::Approx(1.0)); // orthogonal pure states
}

} // TEST_SUITE
