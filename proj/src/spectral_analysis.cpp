#include "qsearch/spectral_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qsearch/errors.hpp"
#include "qsearch/spin_space.hpp"

namespace qsearch {

namespace {

constexpr double kClusterTol = 1e-4;

// 1 - e^{ix} without cancellation near x = 0 mod 2 pi
cplx one_minus_expi(double x) { return cplx(0.0, -2.0 * std::sin(0.5 * x)) * std::polar(1.0, 0.5 * x); }

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

UnitaryEigensystem diagonalize_unitary(const ComplexMatrix& u) {
    const Eigen::Index dim = u.rows();
    const ComplexMatrix herm = 0.5 * (u + u.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    if (es.info() != Eigen::Success) throw numeric_error("Hermitian-part eigensolver failed");
    ComplexMatrix vecs = es.eigenvectors();
    const RealVector& cosines = es.eigenvalues();

    Eigen::Index start = 0;
    while (start < dim) {
        Eigen::Index end = start + 1;
        while (end < dim && cosines(end) - cosines(end - 1) < kClusterTol) ++end;
        const Eigen::Index k = end - start;
        if (k > 1) {
            const ComplexMatrix basis = vecs.middleCols(start, k);
            ComplexMatrix block = basis.adjoint() * u * basis;
            const cplx tr = block.trace();
            const double mean_phase = std::abs(tr) > 0.0 ? std::arg(tr) : 0.0;
            block *= std::polar(1.0, -mean_phase);
            const ComplexMatrix anti = (block - block.adjoint()) * cplx(0.0, -0.5);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> inner(anti);
            if (inner.info() != Eigen::Success) throw numeric_error("cluster eigensolver failed");
            vecs.middleCols(start, k) = basis * inner.eigenvectors();
        }
        start = end;
    }

    UnitaryEigensystem out;
    out.vectors = std::move(vecs);
    out.eigenvalues.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        out.eigenvalues[static_cast<std::size_t>(i)] = out.vectors.col(i).dot(u * out.vectors.col(i));
    }
    return out;
}

SpectralReport eigendecompose_step(const ReducedOperator& u, int n, double omega, double phi) {
    if (u.dim != n + 1) throw analysis_error("operator dimension does not match n + 1");
    const UnitaryEigensystem sys = diagonalize_unitary(u.entries);
    const RealVector zero_x = x_eigenbasis(n).K.col(0);

    SpectralReport report{n, omega, phi, {}, -1, -1};
    for (int i = 0; i <= n; ++i) {
        EigenPair p;
        p.eigenvalue = sys.eigenvalues[static_cast<std::size_t>(i)];
        p.vector = sys.vectors.col(i);
        p.gamma = wrap_phase(std::arg(p.eigenvalue) - 0.5 * n * phi);
        p.overlap_z = p.vector(0);
        p.overlap_x = p.vector.dot(zero_x.cast<cplx>());
        report.eigenpairs.push_back(std::move(p));
    }

    // gamma_+ = smallest positive gamma, gamma_- = largest negative one;
    // ties go to the larger overlap with |0_x>.
    auto better = [&](int cand, int best, bool positive) {
        if (best < 0) return true;
        const auto& a = report.eigenpairs[static_cast<std::size_t>(cand)];
        const auto& b = report.eigenpairs[static_cast<std::size_t>(best)];
        if (a.gamma != b.gamma) return positive ? a.gamma < b.gamma : a.gamma > b.gamma;
        return std::abs(a.overlap_x) > std::abs(b.overlap_x);
    };
    for (int i = 0; i <= n; ++i) {
        const double g = report.eigenpairs[static_cast<std::size_t>(i)].gamma;
        if (g > 0.0 && better(i, report.gamma_plus_idx, true)) report.gamma_plus_idx = i;
        if (g < 0.0 && better(i, report.gamma_minus_idx, false)) report.gamma_minus_idx = i;
    }
    if (report.gamma_plus_idx < 0 || report.gamma_minus_idx < 0) {
        throw analysis_error("no sign-opposite pair of eigenphase offsets near zero");
    }
    return report;
}

SpectralReport spectral_report(int n, const OmegaParam& omega) {
    const CircuitSpec spec = make_single_spec(n, omega);
    return eigendecompose_step(build_step_single(spec), n, omega.value(), spec.phi);
}

double SecularResiduals::max_component() const { return max_of(component); }
double SecularResiduals::max_eigenvalue() const { return max_of(eigenvalue); }
double SecularResiduals::max_normalization() const { return max_of(normalization); }

double secular_eigenvalue_residual(int n, double omega, double phi, double gamma) {
    const BinomialWeights w = binomial_weights(n);
    const cplx lhs = 1.0 / one_minus_expi(omega);
    cplx sum = 0.0;
    double scale = 1.0 + std::abs(lhs);
    for (int s = 0; s <= n; ++s) {
        const cplx term = w[s] / one_minus_expi(gamma + s * phi);
        sum += term;
        scale += std::abs(term);
    }
    return std::abs(lhs - sum) / scale;
}

SecularResiduals secular_residuals(const SpectralReport& report) {
    const int n = report.n;
    const OverlapBasis basis = x_eigenbasis(n);
    const BinomialWeights w = binomial_weights(n);
    const cplx denom_omega = one_minus_expi(report.omega);
    const double denom_omega2 = std::norm(denom_omega);

    SecularResiduals out;
    std::vector<double> rebuilt(static_cast<std::size_t>(n) + 1, 0.0);
    for (const EigenPair& p : report.eigenpairs) {
        const ComplexVector sx = basis.K.transpose().cast<cplx>() * p.vector;  // <s_x|psi>
        const cplx z = p.overlap_z;

        double worst_a = 0.0;
        for (int s = 0; s <= n; ++s) {
            const cplx lhs = sx(s) / denom_omega;
            const cplx rhs = basis.K(0, s) * z / one_minus_expi(p.gamma + s * report.phi);
            worst_a = std::max(worst_a, std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
        }
        out.component.push_back(worst_a);
        out.eigenvalue.push_back(secular_eigenvalue_residual(n, report.omega, report.phi, p.gamma));

        const double lhs_c = 1.0 / denom_omega2;
        double sum_c = 0.0;
        for (int s = 0; s <= n; ++s) {
            const double term = w[s] * std::norm(z) / std::norm(one_minus_expi(p.gamma + s * report.phi));
            sum_c += term;
            rebuilt[static_cast<std::size_t>(s)] += denom_omega2 * term;
        }
        out.normalization.push_back(std::abs(lhs_c - sum_c) / (1.0 + lhs_c + sum_c));
    }
    for (double r : rebuilt) out.completeness = std::max(out.completeness, std::abs(r - 1.0));
    return out;
}

SecularResiduals verify_secular(const SpectralReport& report, double threshold) {
    SecularResiduals res = secular_residuals(report);
    std::ostringstream bad;
    for (std::size_t i = 0; i < report.eigenpairs.size(); ++i) {
        if (res.component[i] > threshold || res.eigenvalue[i] > threshold || res.normalization[i] > threshold) {
            bad << " gamma=" << report.eigenpairs[i].gamma << " (a=" << res.component[i]
                << ", b=" << res.eigenvalue[i] << ", c=" << res.normalization[i] << ")";
        }
    }
    if (res.completeness > threshold) bad << " completeness=" << res.completeness;
    if (!bad.str().empty()) throw verification_failure("secular relations violated:" + bad.str());
    return res;
}

std::vector<GammaRow> gamma_asymptotics(const OmegaParam& omega, const std::vector<int>& ns) {
    const double target = 2.0 * std::abs(std::sin(0.5 * omega.value()));
    std::vector<GammaRow> rows;
    for (int n : ns) {
        const SpectralReport r = spectral_report(n, omega);
        const double scale = std::pow(2.0, 0.5 * n);
        GammaRow row{n, scale * r.gamma_plus().gamma, scale * r.gamma_minus().gamma, 0.0};
        row.deviation = std::max(std::abs(row.scaled_plus - target), std::abs(row.scaled_minus + target));
        rows.push_back(row);
    }
    return rows;
}

OverlapRow overlap_row(const SpectralReport& report) {
    const EigenPair& plus = report.gamma_plus();
    const EigenPair& minus = report.gamma_minus();
    OverlapRow row;
    row.n = report.n;
    row.inv_z2_plus = 1.0 / std::norm(plus.overlap_z);
    row.inv_z2_minus = 1.0 / std::norm(minus.overlap_z);
    row.product_plus = plus.overlap_z * plus.overlap_x;
    row.product_minus = minus.overlap_z * minus.overlap_x;
    std::vector<double> mx;
    std::vector<double> mz;
    for (std::size_t i = 0; i < report.eigenpairs.size(); ++i) {
        if (static_cast<int>(i) == report.gamma_plus_idx || static_cast<int>(i) == report.gamma_minus_idx) {
            continue;
        }
        mx.push_back(std::norm(report.eigenpairs[i].overlap_x));
        mz.push_back(std::norm(report.eigenpairs[i].overlap_z));
    }
    row.residual_mass_x = pairwise_sum<double>(mx);
    row.residual_mass_z = pairwise_sum<double>(mz);
    return row;
}

std::vector<OverlapRow> overlap_asymptotics(const OmegaParam& omega, const std::vector<int>& ns) {
    std::vector<OverlapRow> rows;
    for (int n : ns) rows.push_back(overlap_row(spectral_report(n, omega)));
    return rows;
}

TwoModePrediction two_mode_prediction(int n, const OmegaParam& omega, std::optional<std::int64_t> iterations) {
    const CircuitSpec spec = make_single_spec(n, omega, iterations);
    const SpectralReport report = eigendecompose_step(build_step_single(spec), n, omega.value(), spec.phi);
    const OverlapRow ov = overlap_row(report);
    const double steps = static_cast<double>(spec.iterations);

    const cplx amp = std::polar(1.0, steps * report.gamma_plus().gamma) * ov.product_plus +
                     std::polar(1.0, steps * report.gamma_minus().gamma) * ov.product_minus;
    TwoModePrediction out;
    out.iterations = spec.iterations;
    out.predicted = std::norm(amp);
    out.simulated = run_single(spec).success_probability;
    const double r = std::sqrt(ov.residual_mass_x * ov.residual_mass_z);
    out.bound = r * (2.0 * std::abs(amp) + r);
    return out;
}

}  // namespace qsearch
