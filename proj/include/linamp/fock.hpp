#pragma once

#include <complex>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "linamp/errors.hpp"

namespace linamp {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Truncated single-mode Fock space, levels 0 .. dim-1.
struct FockSpace {
    int dim;

    explicit FockSpace(int d) : dim(d) {
        if (d < 2) throw DomainError("FockSpace: dim must be >= 2, got " + std::to_string(d));
    }
    friend bool operator==(const FockSpace& a, const FockSpace& b) { return a.dim == b.dim; }
    friend bool operator!=(const FockSpace& a, const FockSpace& b) { return !(a == b); }
};

// Number of levels counted as "tail" for truncation diagnostics: the top
// ceil(dim/10) levels.
inline int tail_levels(int dim) { return (dim + 9) / 10; }

class MatrixOperator {
public:
    MatrixOperator(FockSpace space, Matrix entries) : space_(space), entries_(std::move(entries)) {
        if (entries_.rows() != space_.dim || entries_.cols() != space_.dim)
            throw DimensionMismatch("MatrixOperator: entries shape does not match space dim");
    }

    const FockSpace& space() const { return space_; }
    const Matrix& entries() const { return entries_; }

private:
    FockSpace space_;
    Matrix entries_;
};

// Hermitian, unit-trace, PSD-within-tolerance state. Construction validates:
//   max|rho - rho+| <= 1e-12, |tr rho - 1| <= 1e-9, min eig >= -1e-8.
// Violations throw InvariantViolation; nothing is clipped or repaired.
class DensityMatrix {
public:
    static constexpr double kHermTol = 1e-12;
    static constexpr double kTraceTol = 1e-9;
    static constexpr double kPsdTol = -1e-8;

    static DensityMatrix create(FockSpace space, Matrix entries);

    const FockSpace& space() const { return space_; }
    const Matrix& entries() const { return entries_; }
    int dim() const { return space_.dim; }
    double tail_mass() const { return tail_mass_; }

private:
    DensityMatrix(FockSpace space, Matrix entries, double tail)
        : space_(space), entries_(std::move(entries)), tail_mass_(tail) {}

    FockSpace space_;
    Matrix entries_;
    double tail_mass_;
};

struct Vacuum {};
struct Fock { int n; };
struct Coherent { Cplx alpha; };
struct Thermal { double nbar; };
using StateKind = std::variant<Vacuum, Fock, Coherent, Thermal>;

struct MomentReport {
    Cplx mean_amp;                                    // <a>
    double mean_n;                                    // <n>
    double mean_n2;                                   // <n^2>
    double mean_a2norm;                               // <a+^2 a^2> = <n(n-1)>
    std::vector<std::pair<double, double>> quad_mean; // (phi, <x_phi>)
    std::vector<std::pair<double, double>> quad_var;  // (phi, Var x_phi)
    double tail_mass;
};

// a[i, i+1] = sqrt(i+1); a_dag is its conjugate transpose.
std::pair<MatrixOperator, MatrixOperator> build_ladder(FockSpace space);
MatrixOperator number_op(FockSpace space);

// Quadrature x_phi = (a e^{-i phi} + a+ e^{i phi}) / sqrt(2).
MatrixOperator quadrature_op(FockSpace space, double phi);

// Normalized coherent-state coefficients <n|alpha> on the truncated space,
// renormalized after truncation.
Vector coherent_amplitudes(Cplx alpha, int dim);

// Constructors renormalize after truncation; tail_mass >= 1e-8 is an error.
DensityMatrix make_state(const StateKind& kind, FockSpace space);

// Pure-state version for trajectory initial conditions (thermal is rejected).
Vector make_pure_state(const StateKind& kind, FockSpace space);

MomentReport moments(const DensityMatrix& rho, std::span<const double> phi_grid = {});

// Kronecker product state, A index major: index = i_a * dim_b + i_b.
DensityMatrix tensor(const DensityMatrix& rho_a, const DensityMatrix& rho_b);

DensityMatrix partial_trace_b(const DensityMatrix& rho_ab, int dim_a, int dim_b);

// e^{-i phi n} rho e^{+i phi n}; diagonal entries unchanged.
DensityMatrix phase_shift(const DensityMatrix& rho, double phi);

// (1/2) tr |A - B| over the Hermitized difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const Matrix& a, const Matrix& b);

} // namespace linamp
