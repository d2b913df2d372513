#pragma once

// Numerical companion to the convergence argument for G'O': eigenphases,
// secular relations, the gamma+/- pair and the two-mode model.
//
// Eigenvalues of U = G'O' are written e^{i(gamma + n phi / 2)}.

#include <cstdint>
#include <optional>
#include <vector>

#include "qsearch/numeric.hpp"
#include "qsearch/phase_solver.hpp"
#include "qsearch/reduced_sim.hpp"

namespace qsearch {

// Orthonormal eigenbasis of a unitary (normal) matrix.
struct UnitaryEigensystem {
    std::vector<cplx> eigenvalues;
    ComplexMatrix vectors;
};

// Diagonalizes the Hermitian part (U + U^H)/2, then splits clusters of
// (near-)equal cos(phase) with the anti-Hermitian part after rotating each
// cluster to its mean phase.
UnitaryEigensystem diagonalize_unitary(const ComplexMatrix& u);

struct EigenPair {
    double gamma = 0.0;  // eigenphase minus n phi / 2, wrapped into (-pi, pi]
    cplx eigenvalue;
    ComplexVector vector;
    cplx overlap_z;  // <0_z|psi>
    cplx overlap_x;  // <psi|0_x>
};

struct SpectralReport {
    int n = 0;
    double omega = 0.0;
    double phi = 0.0;
    std::vector<EigenPair> eigenpairs;
    int gamma_plus_idx = -1;
    int gamma_minus_idx = -1;

    const EigenPair& gamma_plus() const { return eigenpairs.at(static_cast<std::size_t>(gamma_plus_idx)); }
    const EigenPair& gamma_minus() const { return eigenpairs.at(static_cast<std::size_t>(gamma_minus_idx)); }
};

SpectralReport eigendecompose_step(const ReducedOperator& u, int n, double omega, double phi);

// Convenience: build G'O' for (n, omega) and decompose it.
SpectralReport spectral_report(int n, const OmegaParam& omega);

struct SecularResiduals {
    // Per eigenpair, scaled as |lhs - rhs| / (1 + sum of |terms|).
    std::vector<double> component;    // eigenvector component relation, max over s
    std::vector<double> eigenvalue;   // 1/(1-e^{iw}) = sum_s P(s)/(1-e^{i(g+s phi)})
    std::vector<double> normalization;
    // max_s |sum_gamma |<s_x|psi_gamma>|^2 rebuilt from the secular formula - 1|
    double completeness = 0.0;

    double max_component() const;
    double max_eigenvalue() const;
    double max_normalization() const;
};

SecularResiduals secular_residuals(const SpectralReport& report);

// Throws verification_failure naming the offending gammas if any residual
// exceeds the threshold.
SecularResiduals verify_secular(const SpectralReport& report, double threshold = 1e-8);

// Scaled residual of the eigenvalue sum rule at an arbitrary gamma.
double secular_eigenvalue_residual(int n, double omega, double phi, double gamma);

struct GammaRow {
    int n = 0;
    double scaled_plus = 0.0;   // 2^{n/2} gamma_+
    double scaled_minus = 0.0;  // 2^{n/2} gamma_-
    double deviation = 0.0;     // max of the two distances to +/- 2 sin(omega/2)
};

std::vector<GammaRow> gamma_asymptotics(const OmegaParam& omega, const std::vector<int>& ns);

struct OverlapRow {
    int n = 0;
    double inv_z2_plus = 0.0;  // |<0_z|psi_+>|^-2
    double inv_z2_minus = 0.0;
    cplx product_plus;  // <0_z|psi_+><psi_+|0_x>
    cplx product_minus;
    double residual_mass_x = 0.0;  // sum over the other gammas of |<0_x|psi>|^2
    double residual_mass_z = 0.0;
};

OverlapRow overlap_row(const SpectralReport& report);
std::vector<OverlapRow> overlap_asymptotics(const OmegaParam& omega, const std::vector<int>& ns);

struct TwoModePrediction {
    std::int64_t iterations = 0;
    double predicted = 0.0;  // |sum_{+,-} e^{i N gamma} <0_z|psi><psi|0_x>|^2
    double simulated = 0.0;  // run_single at the same iteration count
    // |predicted - exact| is at most r (2 |A_2| + r), r = sqrt(mass_x mass_z)
    double bound = 0.0;
};

TwoModePrediction two_mode_prediction(int n, const OmegaParam& omega,
                                      std::optional<std::int64_t> iterations = std::nullopt);

}  // namespace qsearch
