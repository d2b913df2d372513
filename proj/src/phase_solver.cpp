#include "qsearch/phase_solver.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "qsearch/errors.hpp"
#include "qsearch/numeric.hpp"
#include "qsearch/spin_space.hpp"

namespace qsearch {

OmegaParam::OmegaParam(double value) : value_(value) {
    if (!(value > -pi && value <= pi)) {
        throw domain_error("omega must lie in (-pi, pi], got " + std::to_string(value));
    }
}

OmegaParam::OmegaParam(double value, Rational rational) : OmegaParam(value) {
    if (rational.d <= 0) throw domain_error("rational omega needs a positive denominator");
    const double implied = 2.0 * pi * static_cast<double>(rational.c) / static_cast<double>(rational.d);
    if (std::abs(implied - value) >= 1e-15 * std::max(1.0, std::abs(value))) {
        throw domain_error("rational form does not match omega value");
    }
    rational_ = rational;
}

OmegaParam OmegaParam::pi_fraction(long long num, long long den) {
    if (den <= 0) throw domain_error("pi fraction needs a positive denominator");
    // num pi / den = 2 pi * num / (2 den)
    long long c = num;
    long long d = 2 * den;
    const long long g = std::gcd(c < 0 ? -c : c, d);
    if (g > 1) {
        c /= g;
        d /= g;
    }
    const double value = 2.0 * pi * static_cast<double>(c) / static_cast<double>(d);
    return OmegaParam(value, Rational{c, d});
}

namespace {

constexpr double kPoleGuard = 1e-9;

double guarded_cot(double x) {
    const double k = std::round(x / pi);
    if (std::abs(x - k * pi) < kPoleGuard) {
        throw numeric_error("cot argument " + std::to_string(x) + " too close to a pole");
    }
    return std::cos(x) / std::sin(x);
}

BinomialWeights weights_for(int n) {
    return n <= kMaxSectorQubits ? binomial_weights(n) : binomial_weights_scaled(n);
}

void check_solver_n(int n) {
    if (n < 1 || n > kMaxSolverQubits) {
        throw domain_error("qubit count out of solver range: " + std::to_string(n));
    }
}

void check_omega_nonzero(double omega) {
    if (omega == 0.0) throw domain_error("omega = 0: the oracle is the identity, no iteration needed");
}

double cot_half(double omega) { return std::cos(0.5 * omega) / std::sin(0.5 * omega); }

double eval_single(const BinomialWeights& w, double omega, double phi) {
    std::vector<double> terms(static_cast<std::size_t>(w.n));
    for (int s = 1; s <= w.n; ++s) terms[s - 1] = w[s] * guarded_cot(0.5 * s * phi);
    return pairwise_sum<double>(terms) - cot_half(omega);
}

double eval_two(const BinomialWeights& agree, const BinomialWeights* diff, int d, double omega,
                double phi) {
    const int m = agree.n;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(d / 2 + 1));
    for (int s1 = 0; s1 <= m; ++s1) {
        const double w1 = m == 0 ? 1.0 : agree[s1];
        // odd s2 carry the factor 1 + (-1)^s2 = 0
        for (int s2 = (s1 == 0 ? 2 : 0); s2 <= d; s2 += 2) {
            const double w2 = (*diff)[s2];
            terms.push_back(2.0 * w1 * w2 * guarded_cot(0.5 * (s1 + s2) * phi));
        }
    }
    return pairwise_sum<double>(terms) - cot_half(omega);
}

// Bisection for the unique root of a decreasing function on (0, 2 pi / n).
template <typename H>
double bisect_decreasing(int n, H&& h, double& residual) {
    const double width = 2.0 * pi / n;
    const double eps = 1e-12 * width;
    double lo = eps;
    double hi = width - eps;
    bool lo_moved = false;
    bool hi_moved = false;
    for (int it = 0; it < 200 && (hi - lo) >= 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0) {
            lo = mid;
            lo_moved = true;
        } else {
            hi = mid;
            hi_moved = true;
        }
    }
    if (!lo_moved || !hi_moved) {
        throw numeric_error("phase equation root not bracketed in (0, 2pi/n) for n = " +
                            std::to_string(n));
    }
    const double root = 0.5 * (lo + hi);
    residual = h(root);
    return root;
}

}  // namespace

double phase_equation(int n, double omega, double phi) {
    check_solver_n(n);
    return eval_single(weights_for(n), omega, phi);
}

double phase_equation_two(int n, int d, double omega, double phi) {
    check_solver_n(n);
    if (d < 1 || d > n) throw domain_error("Hamming distance must lie in [1, n]");
    const BinomialWeights diff = weights_for(d);
    const BinomialWeights agree = n - d >= 1 ? weights_for(n - d) : BinomialWeights{0, {1.0}};
    return eval_two(agree, &diff, d, omega, phi);
}

PhaseSolution solve_phi(int n, const OmegaParam& omega) {
    check_solver_n(n);
    check_omega_nonzero(omega.value());
    const BinomialWeights w = weights_for(n);
    const double mag = std::abs(omega.value());
    double residual = 0.0;
    const double root =
        bisect_decreasing(n, [&](double phi) { return eval_single(w, mag, phi); }, residual);
    const double sign = omega.value() < 0.0 ? -1.0 : 1.0;
    // h is odd in (omega, phi) jointly, so the residual flips sign with omega.
    return PhaseSolution{n, omega.value(), sign * root, sign * residual,
                         PhaseVariant::single_solution, 0};
}

PhaseSolution solve_phi_two(int n, int d, const OmegaParam& omega) {
    check_solver_n(n);
    if (d < 1 || d > n) throw domain_error("Hamming distance must lie in [1, n]");
    check_omega_nonzero(omega.value());
    if (!(omega.value() > 0.0 && omega.value() < pi)) {
        throw domain_error("two-solution omega must lie in (0, pi)");
    }
    const BinomialWeights diff = weights_for(d);
    const BinomialWeights agree = n - d >= 1 ? weights_for(n - d) : BinomialWeights{0, {1.0}};
    double residual = 0.0;
    const double root = bisect_decreasing(
        n, [&](double phi) { return eval_two(agree, &diff, d, omega.value(), phi); }, residual);
    return PhaseSolution{n, omega.value(), root, residual, PhaseVariant::two_solution, d};
}

std::int64_t grover_iterations(int n) {
    if (n < 1 || n > 120) throw domain_error("qubit count out of range: " + std::to_string(n));
    // long double so that n = 1 (theta = pi/4 exactly) does not floor to 0
    const long double theta = std::asin(std::pow(2.0L, -0.5L * n));
    return static_cast<std::int64_t>(std::floor(std::numbers::pi_v<long double> / (4.0L * theta)));
}

std::int64_t circuit_iterations(int n, const OmegaParam& omega, int solutions) {
    if (n < 1 || n > 120) throw domain_error("qubit count out of range: " + std::to_string(n));
    check_omega_nonzero(omega.value());
    const double scale = std::pow(2.0, 0.5 * n);
    if (solutions == 1) {
        const double s = std::sin(std::abs(0.5 * omega.value()));
        return static_cast<std::int64_t>(std::floor(pi / (4.0 * s) * scale + 0.5));
    }
    if (solutions == 2) {
        if (!(omega.value() > 0.0 && omega.value() < pi)) {
            throw domain_error("two-solution omega must lie in (0, pi)");
        }
        const double s = std::sin(0.5 * omega.value());
        return static_cast<std::int64_t>(std::floor(pi / (4.0 * std::sqrt(2.0) * s) * scale + 0.5));
    }
    throw domain_error("solutions must be 1 or 2");
}

}  // namespace qsearch
