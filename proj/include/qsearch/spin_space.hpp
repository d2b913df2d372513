#pragma once

// Symmetric-sector representation of n qubits.
//
// Everything is expressed in the z-aligned basis {|s_z>}, s = 0..n, where
// |s_z> is the (twisted) Dicke state with s flipped qubits relative to the
// marked index j. In that basis |j> = e_0 for every j, and the collective
// operator sum_a S_x^(a) is the tridiagonal matrix J below.

#include <vector>

#include "qsearch/numeric.hpp"

namespace qsearch {

inline constexpr int kMaxSectorQubits = 64;

struct BinomialWeights {
    int n = 0;
    std::vector<double> w;  // w[s] = C(n, s) 2^-n

    double operator[](int s) const { return w[static_cast<std::size_t>(s)]; }
};

struct OverlapBasis {
    int n = 0;
    // Column s holds |s_x> in z-aligned coordinates; K(0, s) = <0_z|s_x> > 0.
    RealMatrix K;
    // Entry s is the sum_a S_x eigenvalue of column s, i.e. n/2 - s.
    RealVector x_eigenvalues;
};

// P_n(s) by the multiplicative recurrence from 2^-n. 1 <= n <= 64.
BinomialWeights binomial_weights(int n);

// Same distribution for large n (no underflow of 2^-n): recurrence outward
// from the central term, mirrored for exact symmetry, then normalized.
BinomialWeights binomial_weights_scaled(int n);

// sum_a S_x^(a) restricted to the symmetric sector, (n+1)x(n+1).
RealMatrix collective_x_operator(int n);

// Eigenbasis of collective_x_operator with columns ordered by descending
// eigenvalue and signs fixed so the first row is positive.
OverlapBasis x_eigenbasis(int n);

}  // namespace qsearch
