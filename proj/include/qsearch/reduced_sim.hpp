#pragma once

// Exact simulation of both search circuits inside their invariant subspaces.
//
//   Grover:          2-dim span{|0bar>, |1bar>}
//   one solution:    (n+1)-dim symmetric sector, z-aligned basis (|j> = e_0)
//   two solutions:   (n-d+1)(d+1)-dim product of the symmetric sectors of the
//                    agreement block (n-d qubits) and the difference block
//                    (d qubits); |j1> = (0,0), |j2> = (0,d)

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsearch/numeric.hpp"
#include "qsearch/phase_solver.hpp"

namespace qsearch {

struct CircuitSpec {
    int n = 0;
    OmegaParam omega{pi / 2};
    int solutions = 1;
    int hamming_distance = 0;  // two solutions only
    double phi = 0.0;
    std::int64_t iterations = 0;
};

// phi and the iteration count taken from phase_solver unless overridden.
CircuitSpec make_single_spec(int n, const OmegaParam& omega,
                             std::optional<std::int64_t> iterations = std::nullopt);
CircuitSpec make_two_spec(int n, int d, const OmegaParam& omega,
                          std::optional<std::int64_t> iterations = std::nullopt);

struct ReducedOperator {
    int dim = 0;
    ComplexMatrix entries;
};

struct TableRow {
    int n = 0;
    std::string omega_label;  // "-" for Grover rows
    double omega = 0.0;
    std::string algorithm;  // "grover" | "separable" | "separable2"
    std::int64_t iterations = 0;
    // Raw values, not clamped. error_rate is the probability mass off the
    // solution states, which equals 1 - success_probability up to rounding
    // but keeps full relative precision when it is tiny.
    double success_probability = 0.0;
    double error_rate = 0.0;
    double norm_drift = 0.0;  // |norm - 1| at the end of the run
    std::string error;        // non-empty when the cell failed
};

// -[[cos 2t, -sin 2t], [sin 2t, cos 2t]] in the {|0bar>, |1bar>} basis, t = asin 2^{-n/2}.
ComplexMatrix grover_step_matrix(int n);

TableRow run_grover(int n, std::int64_t iterations);

ReducedOperator build_step_single(const CircuitSpec& spec);
TableRow run_single(const CircuitSpec& spec);

enum class TwoBlockLayout {
    agreement_first,   // index = s1 (d+1) + s2
    difference_first,  // index = s2 (n-d+1) + s1
};

ReducedOperator build_step_two(const CircuitSpec& spec,
                               TwoBlockLayout layout = TwoBlockLayout::agreement_first);
TableRow run_two(const CircuitSpec& spec, TwoBlockLayout layout = TwoBlockLayout::agreement_first);

struct LabeledOmega {
    std::string label;
    OmegaParam omega;
};

// Rows ordered by n, then Grover, then the omegas in the given order. Cells
// are evaluated on up to `threads` workers; failures land in TableRow::error.
std::vector<TableRow> table_sweep(const std::vector<int>& ns, const std::vector<LabeledOmega>& omegas,
                                  unsigned threads = 1);

// Repeated matrix-vector products; returns the final state.
ComplexVector apply_power(const ComplexMatrix& u, ComplexVector psi, std::int64_t iterations);

}  // namespace qsearch
