#include "qsearch/lemma_verifier.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "qsearch/errors.hpp"
#include "qsearch/numeric.hpp"
#include "qsearch/spin_space.hpp"

namespace qsearch {

namespace {

BinomialWeights weights(int n) {
    return n <= kMaxSectorQubits ? binomial_weights(n) : binomial_weights_scaled(n);
}

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

}  // namespace

double weighted_sum(int n, const std::function<double(double)>& f) {
    const BinomialWeights w = weights(n);
    std::vector<double> terms(static_cast<std::size_t>(n));
    for (int s = 1; s <= n; ++s) {
        const double x = static_cast<double>(s) / n;
        const double v = f(x);
        if (!std::isfinite(v)) {
            throw domain_error("f is not finite at s/n = " + std::to_string(x));
        }
        terms[static_cast<std::size_t>(s - 1)] = w[s] * v;
    }
    return pairwise_sum<double>(terms);
}

double ftilde_by_summation(int n, int q) {
    const BinomialWeights w = weights(n);
    std::vector<double> terms;
    for (int s = std::max(q, 1); s <= n; ++s) {
        // s! / (s-q)! / n^q as a product of q ratios
        double r = 1.0;
        if (q >= 0) {
            for (int i = 0; i < q; ++i) r *= static_cast<double>(s - i) / n;
        } else {
            for (int i = 1; i <= -q; ++i) r *= static_cast<double>(n) / (s + i);
        }
        terms.push_back(w[s] * r);
    }
    return pairwise_sum<double>(terms);
}

MomentReport moment_report(int n, int q) {
    if (std::abs(q) > 12) throw domain_error("|q| must not exceed 12");
    if (n <= 4 * std::abs(q) || n < 1) {
        throw domain_error("moment bounds need n > 4|q|, got n = " + std::to_string(n));
    }
    const BinomialWeights w = weights(n);
    MomentReport r;
    r.n = n;
    r.q = q;
    r.limit = std::ldexp(1.0, -q);
    r.F = weighted_sum(n, [q](double x) { return std::pow(x, q); });

    if (q > 0) {
        // n! 2^{-q} / ((n-q)! n^q)
        double prod = 1.0;
        for (int i = 0; i < q; ++i) prod *= static_cast<double>(n - i) / n;
        r.Ftilde = prod * r.limit;
    } else {
        const int p = -q;
        double prod = 1.0;
        for (int i = 1; i <= p; ++i) prod *= static_cast<double>(n) / (n + i);
        // minus n^p sum_{t=0}^{p} n! 2^{-n} / (t! (n+p-t)!); evaluated in logs,
        // it underflows harmlessly to zero for large n
        double correction = 0.0;
        for (int t = 0; t <= p; ++t) {
            const double lg = log_factorial(n) - n * std::log(2.0) - log_factorial(t) - log_factorial(n + p - t) +
                              p * std::log(static_cast<double>(n));
            correction += std::exp(lg);
        }
        r.Ftilde = prod * r.limit - correction;
    }

    r.lower = r.Ftilde;
    std::vector<double> head;
    for (int s = 1; s <= n / 4 + 1 && s <= n; ++s) head.push_back(w[s] * std::pow(static_cast<double>(s) / n, q));
    r.upper = std::pow(static_cast<double>(n) / (n - 4.0 * q), q) * r.Ftilde + pairwise_sum<double>(head);
    return r;
}

double stirling_ratio(int n) {
    if (n < 1) throw domain_error("Stirling ratio needs n >= 1");
    if (n <= 170) {
        // n! e^n / n^n = prod_k (k e / n)
        double prod = 1.0;
        for (int k = 1; k <= n; ++k) prod *= static_cast<double>(k) * std::exp(1.0) / n;
        return prod / std::sqrt(2.0 * pi * n);
    }
    const double lg = log_factorial(n) + n - (n + 0.5) * std::log(static_cast<double>(n)) - 0.5 * std::log(2.0 * pi);
    return std::exp(lg);
}

StirlingReport stirling_check(const std::vector<int>& ns) {
    StirlingReport rep;
    for (int n : ns) {
        const double ratio = stirling_ratio(n);
        rep.rows.push_back({n, ratio, std::abs(ratio - 1.0)});
        rep.max_deviation = std::max(rep.max_deviation, std::abs(ratio - 1.0));
    }
    if (!rep.rows.empty()) rep.last_deviation = rep.rows.back().deviation;
    return rep;
}

std::vector<double> cot_lemma_deviations(double r, const std::vector<int>& ns) {
    const double target = 1.0 / std::tan(0.25 * r);
    std::vector<double> out;
    for (int n : ns) {
        const double v = weighted_sum(n, [r](double x) { return 1.0 / std::tan(0.5 * r * x); });
        out.push_back(std::abs(v - target));
    }
    return out;
}

}  // namespace qsearch
