#pragma once

// Dense 2^n simulator, optionally with an ancilla register. It is the
// independent check on the reduced engine, so nothing here goes through
// the symmetric-sector machinery: gates act on amplitudes directly.
//
// Amplitude layout: index = m * ancilla_dim + k, with qubit a = bit a of m.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qsearch/numeric.hpp"
#include "qsearch/phase_solver.hpp"

namespace qsearch {

inline constexpr int kDefaultQubitCap = 26;

struct FullState {
    int n = 0;
    int ancilla_dim = 1;
    std::vector<cplx> amplitudes;

    std::size_t system_dim() const { return std::size_t{1} << n; }
    cplx& at(std::uint64_t m, int k) { return amplitudes[m * ancilla_dim + k]; }
    const cplx& at(std::uint64_t m, int k) const { return amplitudes[m * ancilla_dim + k]; }
};

// |0bar> = 2^{-n/2} sum_m |m>
FullState init_uniform(int n, int qubit_cap = kDefaultQubitCap);

// |0bar> (x) ancilla, the ancilla vector normalized by the caller.
FullState init_uniform_with_ancilla(int n, const std::vector<cplx>& ancilla,
                                    int qubit_cap = kDefaultQubitCap);

// Ancilla eigenstate of the mod-d increment with eigenvalue e^{2 pi i c / d}:
// d^{-1/2} sum_k e^{-2 pi i k c / d} |k>.
std::vector<cplx> kickback_ancilla(long long c, long long d);

// The conjugate preparation d^{-1/2} sum_k e^{+2 pi i k c / d} |k>; under the
// increment it kicks back e^{-2 pi i c / d}.
std::vector<cplx> conjugate_kickback_ancilla(long long c, long long d);

namespace oracle {
struct Standard {};  // |m,k> -> |m, k xor delta(m in J)>, ancilla_dim = 2
struct Generalized {
    int modulus;  // |m,k> -> |m, k + delta(m in J) mod modulus>
};
struct PhaseDirect {
    double omega;  // multiply amplitudes of J by e^{i omega}
};
struct PhaseKickback {
    long long c;
    long long d;  // one generalized-oracle call on an ancilla prepared by kickback_ancilla(c, d)
};
}  // namespace oracle

using OracleVariant =
    std::variant<oracle::Standard, oracle::Generalized, oracle::PhaseDirect, oracle::PhaseKickback>;

void apply_oracle(FullState& state, const std::vector<std::uint64_t>& j_set, const OracleVariant& variant);

namespace diffusion {
struct Grover {};  // 1 - 2 |0bar><0bar|
struct Separable {
    double phi;  // exp(i phi sum_a S_x^(a)) as n one-qubit rotations
};
}  // namespace diffusion

using DiffusionVariant = std::variant<diffusion::Grover, diffusion::Separable>;

void apply_diffusion(FullState& state, const DiffusionVariant& variant);

// sum_{j in J} sum_k |<j,k|psi>|^2
double solution_probability(const FullState& state, const std::vector<std::uint64_t>& j_set);

// |<a|b>|
double fidelity(const FullState& a, const FullState& b);

enum class PhaseOracleKind { direct, kickback };

struct FullSearchSpec {
    int n = 0;
    OmegaParam omega{pi / 2};
    std::vector<std::uint64_t> j_set;
    std::int64_t iterations = 0;
    PhaseOracleKind oracle = PhaseOracleKind::direct;
    // Defaults: solve_phi for one solution, solve_phi_two at the pair's
    // Hamming distance for two, and the one-solution phi as the heuristic
    // for three or more.
    std::optional<double> phi;
    int qubit_cap = kDefaultQubitCap;
};

// Iterates (G' O')^iterations from |0bar>; returns the success probability.
double run_search_full(const FullSearchSpec& spec);

// Grover's circuit (1 - 2|0bar><0bar|)(1 - 2|j><j|) on the full register.
double run_grover_full(int n, const std::vector<std::uint64_t>& j_set, std::int64_t iterations,
                       int qubit_cap = kDefaultQubitCap);

}  // namespace qsearch
