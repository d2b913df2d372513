#include "qsearch/spin_space.hpp"

#include <cmath>
#include <string>

#include "qsearch/errors.hpp"

namespace qsearch {

namespace {

void check_sector_size(int n) {
    if (n < 1 || n > kMaxSectorQubits) {
        throw domain_error("qubit count must lie in [1, " + std::to_string(kMaxSectorQubits) +
                           "], got " + std::to_string(n));
    }
}

}  // namespace

BinomialWeights binomial_weights(int n) {
    check_sector_size(n);
    BinomialWeights out{n, std::vector<double>(static_cast<std::size_t>(n) + 1)};
    auto& w = out.w;
    w[0] = std::ldexp(1.0, -n);
    for (int s = 0; s < n / 2; ++s) {
        w[s + 1] = w[s] * static_cast<double>(n - s) / static_cast<double>(s + 1);
    }
    for (int s = 0; s <= n / 2; ++s) w[n - s] = w[s];
    return out;
}

BinomialWeights binomial_weights_scaled(int n) {
    if (n < 1 || n > (1 << 24)) {
        throw domain_error("qubit count out of range for scaled weights: " + std::to_string(n));
    }
    BinomialWeights out{n, std::vector<double>(static_cast<std::size_t>(n) + 1)};
    auto& w = out.w;
    const int c = n / 2;
    w[c] = 1.0;
    for (int s = c; s > 0; --s) {
        w[s - 1] = w[s] * static_cast<double>(s) / static_cast<double>(n - s + 1);
    }
    for (int s = 0; s <= c; ++s) w[n - s] = w[s];
    const double total = pairwise_sum<double>(w);
    for (auto& x : w) x /= total;
    return out;
}

RealMatrix collective_x_operator(int n) {
    check_sector_size(n);
    RealMatrix j = RealMatrix::Zero(n + 1, n + 1);
    for (int s = 0; s < n; ++s) {
        const double v = 0.5 * std::sqrt(static_cast<double>(s + 1) * static_cast<double>(n - s));
        j(s, s + 1) = v;
        j(s + 1, s) = v;
    }
    return j;
}

OverlapBasis x_eigenbasis(int n) {
    check_sector_size(n);
    RealVector diag = RealVector::Zero(n + 1);
    RealVector off(n);
    for (int s = 0; s < n; ++s) {
        off(s) = 0.5 * std::sqrt(static_cast<double>(s + 1) * static_cast<double>(n - s));
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) {
        throw numeric_error("tridiagonal eigensolver failed for n = " + std::to_string(n));
    }

    // Eigen returns ascending eigenvalues; column s must carry n/2 - s.
    OverlapBasis basis{n, RealMatrix(n + 1, n + 1), RealVector(n + 1)};
    for (int s = 0; s <= n; ++s) {
        const int src = n - s;
        RealVector col = es.eigenvectors().col(src);
        if (col(0) < 0.0) col = -col;
        basis.K.col(s) = col;
        basis.x_eigenvalues(s) = 0.5 * n - s;
    }
    return basis;
}

}  // namespace qsearch
