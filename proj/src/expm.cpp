#include "linamp/expm.hpp"

#include <array>
#include <cmath>

namespace linamp {

namespace {

// theta_m bounds from Higham, "The scaling and squaring method for the matrix
// exponential revisited" (SIAM J. Matrix Anal. Appl. 26, 2005), Table 2.3.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

Matrix pade_solve(const Matrix& u, const Matrix& v) {
    // r = (v - u)^{-1} (v + u)
    return (v - u).partialPivLu().solve(v + u);
}

Matrix pade_low(const Matrix& a, std::span<const double> b) {
    // odd/even polynomial split: u = A * sum b[2k+1] A^{2k}, v = sum b[2k] A^{2k}
    const int n = static_cast<int>(a.rows());
    const Matrix a2 = a * a;
    Matrix term = Matrix::Identity(n, n);
    Matrix u = b[1] * term, v = b[0] * term;
    for (size_t k = 2; k + 1 < b.size(); k += 2) {
        term = term * a2;
        v += b[k] * term;
        u += b[k + 1] * term;
    }
    u = a * u;
    return pade_solve(u, v);
}

Matrix pade13(const Matrix& a) {
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    const int n = static_cast<int>(a.rows());
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;
    const Matrix ident = Matrix::Identity(n, n);
    Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                    b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
               b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
    return pade_solve(u, v);
}

} // namespace

Matrix expm(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("expm: matrix must be square");
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff(); // 1-norm

    static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
    static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                 25200.0,    1512.0,    56.0,      1.0};
    static constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                                  302702400.0,   30270240.0,   2162160.0,
                                                  110880.0,      3960.0,       90.0,
                                                  1.0};

    if (norm <= kTheta3) return pade_low(a, b3);
    if (norm <= kTheta5) return pade_low(a, b5);
    if (norm <= kTheta7) return pade_low(a, b7);
    if (norm <= kTheta9) return pade_low(a, b9);

    int s = 0;
    double scaled = norm;
    while (scaled > kTheta13) {
        scaled /= 2.0;
        ++s;
    }
    Matrix r = pade13(a / std::pow(2.0, s));
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

} // namespace linamp
