#pragma once

// Reference constructions used as independent oracles. Nothing here goes
// through the symmetric-sector code: everything is dense 2^n linear algebra
// or textbook formulas.

#include <cstdint>
#include <string>
#include <vector>

#include "qsearch/numeric.hpp"

namespace qsearch::testing {

// C(n, s) 2^-n from lgamma
double binomial_oracle(int n, int s);

// Column s: normalized sum of |m> over popcount(m xor j) = s.
RealMatrix twisted_dicke_basis(int n, std::uint64_t j);

// exp(i phi sum_a sigma_x^(a) / 2) as a Kronecker product, 2^n x 2^n.
ComplexMatrix dense_separable(int n, double phi);

// diag(e^{i omega} on js, 1 elsewhere)
ComplexMatrix dense_phase_oracle(int n, const std::vector<std::uint64_t>& js, double omega);

// 1 - 2 |0bar><0bar|
ComplexMatrix dense_grover_diffusion(int n);

ComplexVector dense_uniform(int n);

struct CommandResult {
    int exit_code = -1;
    std::string out;
};

// Runs through /bin/sh; stdout captured, stderr discarded unless redirected.
CommandResult run_command(const std::string& cmd);

std::string read_file(const std::string& path);

}  // namespace qsearch::testing
