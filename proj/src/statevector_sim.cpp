#include "qsearch/statevector_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <type_traits>
#include <string>

#include "qsearch/errors.hpp"

namespace qsearch {

namespace {

void check_size(int n, int cap) {
    if (n < 1) throw domain_error("qubit count must be positive");
    if (n > cap) {
        throw resource_error("n = " + std::to_string(n) + " exceeds the statevector cap of " +
                             std::to_string(cap) + " qubits");
    }
}

std::vector<std::uint64_t> normalized_set(const FullState& state, const std::vector<std::uint64_t>& j_set) {
    std::vector<std::uint64_t> js = j_set;
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    for (auto j : js) {
        if (j >= state.system_dim()) {
            throw domain_error("solution index " + std::to_string(j) + " out of range for n = " +
                               std::to_string(state.n));
        }
    }
    return js;
}

void shift_ancilla(FullState& state, std::uint64_t m) {
    const int d = state.ancilla_dim;
    // |k> -> |k+1 mod d>
    cplx* row = &state.at(m, 0);
    std::rotate(row, row + (d - 1), row + d);
}

}  // namespace

FullState init_uniform(int n, int qubit_cap) {
    check_size(n, qubit_cap);
    FullState s{n, 1, {}};
    s.amplitudes.assign(s.system_dim(), cplx(std::pow(2.0, -0.5 * n), 0.0));
    return s;
}

FullState init_uniform_with_ancilla(int n, const std::vector<cplx>& ancilla, int qubit_cap) {
    check_size(n, qubit_cap);
    if (ancilla.empty()) throw state_error("empty ancilla vector");
    FullState s{n, static_cast<int>(ancilla.size()), {}};
    s.amplitudes.resize(s.system_dim() * ancilla.size());
    const double amp = std::pow(2.0, -0.5 * n);
    for (std::uint64_t m = 0; m < s.system_dim(); ++m) {
        for (int k = 0; k < s.ancilla_dim; ++k) s.at(m, k) = amp * ancilla[static_cast<std::size_t>(k)];
    }
    return s;
}

namespace {

std::vector<cplx> ancilla_state(long long c, long long d, double sign) {
    if (d < 1) throw domain_error("ancilla dimension must be positive");
    std::vector<cplx> a(static_cast<std::size_t>(d));
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (long long k = 0; k < d; ++k) {
        // reduce k c mod d first so the angle stays small and exact
        const long long r = ((k * c) % d + d) % d;
        a[static_cast<std::size_t>(k)] = std::polar(norm, sign * 2.0 * pi * static_cast<double>(r) / d);
    }
    return a;
}

}  // namespace

std::vector<cplx> kickback_ancilla(long long c, long long d) { return ancilla_state(c, d, -1.0); }

std::vector<cplx> conjugate_kickback_ancilla(long long c, long long d) { return ancilla_state(c, d, +1.0); }

void apply_oracle(FullState& state, const std::vector<std::uint64_t>& j_set, const OracleVariant& variant) {
    const auto js = normalized_set(state, j_set);
    std::visit(
        [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, oracle::Standard>) {
                if (state.ancilla_dim != 2) throw state_error("standard oracle needs a qubit ancilla");
                for (auto m : js) std::swap(state.at(m, 0), state.at(m, 1));
            } else if constexpr (std::is_same_v<V, oracle::Generalized>) {
                if (state.ancilla_dim != v.modulus) {
                    throw state_error("generalized oracle modulus does not match the ancilla dimension");
                }
                for (auto m : js) shift_ancilla(state, m);
            } else if constexpr (std::is_same_v<V, oracle::PhaseDirect>) {
                const cplx ph = std::polar(1.0, v.omega);
                for (auto m : js) {
                    for (int k = 0; k < state.ancilla_dim; ++k) state.at(m, k) *= ph;
                }
            } else {
                if (v.d < 1 || state.ancilla_dim != v.d) {
                    throw state_error("phase kickback needs an ancilla of dimension " + std::to_string(v.d));
                }
                for (auto m : js) shift_ancilla(state, m);
            }
        },
        variant);
}

void apply_diffusion(FullState& state, const DiffusionVariant& variant) {
    const std::uint64_t dim = state.system_dim();
    const int a = state.ancilla_dim;
    std::visit(
        [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, diffusion::Grover>) {
                const double amp = std::pow(2.0, -0.5 * state.n);
                std::vector<cplx> column(dim);
                for (int k = 0; k < a; ++k) {
                    for (std::uint64_t m = 0; m < dim; ++m) column[m] = state.at(m, k);
                    const cplx overlap = amp * pairwise_sum<cplx>(column);
                    const cplx delta = 2.0 * amp * overlap;
                    for (std::uint64_t m = 0; m < dim; ++m) state.at(m, k) -= delta;
                }
            } else {
                const double c = std::cos(0.5 * v.phi);
                const cplx is(0.0, std::sin(0.5 * v.phi));
                for (int q = 0; q < state.n; ++q) {
                    const std::uint64_t bit = std::uint64_t{1} << q;
                    for (std::uint64_t m = 0; m < dim; ++m) {
                        if (m & bit) continue;
                        for (int k = 0; k < a; ++k) {
                            const cplx x0 = state.at(m, k);
                            const cplx x1 = state.at(m | bit, k);
                            state.at(m, k) = c * x0 + is * x1;
                            state.at(m | bit, k) = is * x0 + c * x1;
                        }
                    }
                }
            }
        },
        variant);
}

double solution_probability(const FullState& state, const std::vector<std::uint64_t>& j_set) {
    const auto js = normalized_set(state, j_set);
    std::vector<double> terms;
    for (auto m : js) {
        for (int k = 0; k < state.ancilla_dim; ++k) terms.push_back(std::norm(state.at(m, k)));
    }
    return pairwise_sum<double>(terms);
}

double fidelity(const FullState& a, const FullState& b) {
    if (a.amplitudes.size() != b.amplitudes.size()) throw state_error("fidelity: register size mismatch");
    std::vector<cplx> terms(a.amplitudes.size());
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return std::abs(pairwise_sum<cplx>(terms));
}

double run_search_full(const FullSearchSpec& spec) {
    check_size(spec.n, spec.qubit_cap);
    if (spec.j_set.empty()) throw domain_error("empty solution set");
    if (spec.iterations < 0) throw domain_error("iteration count must be non-negative");

    double phi = 0.0;
    if (spec.phi) {
        phi = *spec.phi;
    } else if (spec.j_set.size() == 2 && spec.j_set[0] != spec.j_set[1]) {
        const int d = std::popcount(spec.j_set[0] ^ spec.j_set[1]);
        phi = solve_phi_two(spec.n, d, spec.omega).phi;
    } else {
        phi = solve_phi(spec.n, spec.omega).phi;
    }

    FullState state;
    OracleVariant oracle_call = oracle::PhaseDirect{spec.omega.value()};
    if (spec.oracle == PhaseOracleKind::kickback) {
        const auto& rational = spec.omega.rational();
        if (!rational) throw domain_error("phase kickback needs omega as a rational multiple of 2 pi");
        state = init_uniform_with_ancilla(spec.n, kickback_ancilla(rational->c, rational->d), spec.qubit_cap);
        oracle_call = oracle::PhaseKickback{rational->c, rational->d};
    } else {
        state = init_uniform(spec.n, spec.qubit_cap);
    }

    const DiffusionVariant mix = diffusion::Separable{phi};
    for (std::int64_t it = 0; it < spec.iterations; ++it) {
        apply_oracle(state, spec.j_set, oracle_call);
        apply_diffusion(state, mix);
    }
    return solution_probability(state, spec.j_set);
}

double run_grover_full(int n, const std::vector<std::uint64_t>& j_set, std::int64_t iterations, int qubit_cap) {
    FullState state = init_uniform(n, qubit_cap);
    for (std::int64_t it = 0; it < iterations; ++it) {
        apply_oracle(state, j_set, oracle::PhaseDirect{pi});
        apply_diffusion(state, diffusion::Grover{});
    }
    return solution_probability(state, j_set);
}

}  // namespace qsearch
