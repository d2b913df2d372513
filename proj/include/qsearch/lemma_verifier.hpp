#pragma once

// Finite-n checks of the binomial averaging lemma
//     sum_{s=1}^n P_n(s) f(s/n) -> f(1/2)
// and of the moment bounds used to prove it.

#include <functional>
#include <vector>

namespace qsearch {

// sum_{s=1}^n P_n(s) f(s/n); throws domain_error if f is not finite at a sample.
double weighted_sum(int n, const std::function<double(double)>& f);

struct MomentReport {
    int n = 0;
    int q = 0;
    double F = 0.0;       // sum_{s=1}^n P_n(s) (s/n)^q
    double Ftilde = 0.0;  // falling-factorial comparator, closed form
    double lower = 0.0;
    double upper = 0.0;
    double limit = 0.0;  // 2^{-q}

    // lower <= F <= upper, allowing rel_tol for rounding where a bound is tight
    // (q = 1 has F = Ftilde = 1/2 exactly).
    bool sandwiched(double rel_tol = 1e-14) const {
        return lower * (1.0 - rel_tol) <= F && F <= upper * (1.0 + rel_tol);
    }
};

// Requires |q| <= 12 and n > 4|q|.
MomentReport moment_report(int n, int q);

// Direct-sum version of Ftilde, for checking the closed form.
double ftilde_by_summation(int n, int q);

struct StirlingRow {
    int n = 0;
    double ratio = 0.0;  // n! e^n / (n^{n+1/2} sqrt(2 pi))
    double deviation = 0.0;
};

struct StirlingReport {
    std::vector<StirlingRow> rows;
    double max_deviation = 0.0;
    double last_deviation = 0.0;
};

double stirling_ratio(int n);
StirlingReport stirling_check(const std::vector<int>& ns);

// |sum_{s=1}^n P_n(s) cot(r s / (2n)) - cot(r / 4)| for each n.
std::vector<double> cot_lemma_deviations(double r, const std::vector<int>& ns);

}  // namespace qsearch
