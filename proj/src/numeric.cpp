#include "qsearch/numeric.hpp"

#include <vector>

namespace qsearch {

double pairwise_norm2(std::span<const cplx> amps) {
    std::vector<double> sq(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) sq[i] = std::norm(amps[i]);
    return pairwise_sum<double>(sq);
}

double unitarity_residual(const ComplexMatrix& u) {
    const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
    return max_abs(ComplexMatrix(u.adjoint() * u - id));
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
    if (h.rows() == 2) {
        // H = a I + B with B traceless: exp(-itH) = e^{-ita} (cos(t|b|) I - i sin(t|b|) B/|b|)
        const double a = 0.5 * std::real(h(0, 0) + h(1, 1));
        ComplexMatrix b = h;
        b(0, 0) -= a;
        b(1, 1) -= a;
        const double bn = std::sqrt(std::norm(b(0, 0)) + std::norm(b(0, 1)));
        const cplx global = std::polar(1.0, -t * a);
        ComplexMatrix out = ComplexMatrix::Identity(2, 2) * std::cos(t * bn);
        if (bn > 0.0) out -= cplx(0.0, std::sin(t * bn) / bn) * b;
        return global * out;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const ComplexVector phases =
        (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qsearch
