#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>

#include <Eigen/Dense>

namespace qsearch {

using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;

// Pairwise (cascade) summation. Deterministic for a fixed input order.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
    constexpr std::size_t kLeaf = 8;
    if (xs.size() <= kLeaf) {
        T acc{};
        for (const T& x : xs) acc += x;
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

// Squared norm of an amplitude range, summed pairwise.
double pairwise_norm2(std::span<const cplx> amps);

// Wrap an angle into (-pi, pi].
inline double wrap_phase(double a) {
    double r = std::remainder(a, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }
inline double max_abs(const RealMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// max |U^H U - I|
double unitarity_residual(const ComplexMatrix& u);

// exp(-i t H) for Hermitian H, via its eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t);

}  // namespace qsearch
