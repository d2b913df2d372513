#pragma once

#include <cstdint>
#include <optional>

namespace qsearch {

// Oracle phase omega in (-pi, pi]. The optional rational form (c, d) with
// 2 pi c / d = omega is what the phase-kickback construction consumes.
class OmegaParam {
public:
    struct Rational {
        long long c = 0;
        long long d = 1;
    };

    explicit OmegaParam(double value);
    OmegaParam(double value, Rational rational);

    // omega = num * pi / den, reduced to lowest terms.
    static OmegaParam pi_fraction(long long num, long long den);

    double value() const { return value_; }
    const std::optional<Rational>& rational() const { return rational_; }

private:
    double value_;
    std::optional<Rational> rational_;
};

enum class PhaseVariant { single_solution, two_solution };

struct PhaseSolution {
    int n = 0;
    double omega = 0.0;
    double phi = 0.0;
    double residual = 0.0;
    PhaseVariant variant = PhaseVariant::single_solution;
    int hamming_distance = 0;  // two-solution only
};

// Largest qubit count accepted by the root solvers (weights are O(n) each).
inline constexpr int kMaxSolverQubits = 1 << 20;

// h(phi) = sum_{s=1}^n P_n(s) cot(s phi / 2) - cot(omega / 2).
double phase_equation(int n, double omega, double phi);

// Two-solution analogue: double sum with weights (1 + (-1)^s2) P_{n-d}(s1) P_d(s2),
// the (0, 0) term excluded.
double phase_equation_two(int n, int d, double omega, double phi);

PhaseSolution solve_phi(int n, const OmegaParam& omega);
PhaseSolution solve_phi_two(int n, int d, const OmegaParam& omega);

// floor(pi / (4 asin 2^{-n/2}))
std::int64_t grover_iterations(int n);

// floor(pi 2^{n/2} / (4 sin|omega/2|) + 1/2), or with an extra sqrt(2) in the
// denominator for two solutions.
std::int64_t circuit_iterations(int n, const OmegaParam& omega, int solutions);

}  // namespace qsearch
