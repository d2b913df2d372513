#include "qsearch/reduced_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "qsearch/errors.hpp"
#include "qsearch/spin_space.hpp"

namespace qsearch {

namespace {

// U <- U (3I - U^H U) / 2, Newton-Schulz step toward the polar factor.
void polish_unitary(ComplexMatrix& u) {
    const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
    for (int pass = 0; pass < 2; ++pass) {
        const ComplexMatrix gram = u.adjoint() * u;
        u = u * (3.0 * id - gram) * 0.5;
    }
}

// exp(i phi sum S_x) on the symmetric sector of m qubits, z-aligned basis.
ComplexMatrix collective_rotation(int m, double phi) {
    if (m == 0) return ComplexMatrix::Identity(1, 1);
    const OverlapBasis basis = x_eigenbasis(m);
    ComplexVector phases(m + 1);
    for (int s = 0; s <= m; ++s) phases(s) = std::polar(1.0, phi * basis.x_eigenvalues(s));
    const ComplexMatrix k = basis.K.cast<cplx>();
    return k * phases.asDiagonal() * k.transpose();
}

RealVector uniform_coords(int m) {
    if (m == 0) return RealVector::Ones(1);
    return x_eigenbasis(m).K.col(0);
}

double mass(const ComplexVector& psi) { return pairwise_norm2({psi.data(), static_cast<std::size_t>(psi.size())}); }

void check_spec(const CircuitSpec& spec, int solutions) {
    if (spec.solutions != solutions) {
        throw domain_error("circuit spec has " + std::to_string(spec.solutions) + " solutions, expected " +
                           std::to_string(solutions));
    }
    if (spec.n < 1 || spec.n > kMaxSectorQubits) throw domain_error("qubit count out of range");
    if (spec.iterations < 0) throw domain_error("iteration count must be non-negative");
    if (solutions == 2 && (spec.hamming_distance < 1 || spec.hamming_distance > spec.n)) {
        throw domain_error("two distinct solutions need 1 <= d <= n");
    }
}

}  // namespace

CircuitSpec make_single_spec(int n, const OmegaParam& omega, std::optional<std::int64_t> iterations) {
    if (iterations && *iterations < 0) throw domain_error("iteration count must be non-negative");
    const PhaseSolution sol = solve_phi(n, omega);
    return CircuitSpec{n, omega, 1, 0, sol.phi, iterations.value_or(circuit_iterations(n, omega, 1))};
}

CircuitSpec make_two_spec(int n, int d, const OmegaParam& omega, std::optional<std::int64_t> iterations) {
    if (iterations && *iterations < 0) throw domain_error("iteration count must be non-negative");
    const PhaseSolution sol = solve_phi_two(n, d, omega);
    return CircuitSpec{n, omega, 2, d, sol.phi, iterations.value_or(circuit_iterations(n, omega, 2))};
}

ComplexVector apply_power(const ComplexMatrix& u, ComplexVector psi, std::int64_t iterations) {
    if (u.rows() != psi.size()) throw std::invalid_argument("apply_power: dimension mismatch");
    ComplexVector next(psi.size());
    for (std::int64_t it = 0; it < iterations; ++it) {
        next.noalias() = u * psi;
        psi.swap(next);
    }
    return psi;
}

ComplexMatrix grover_step_matrix(int n) {
    if (n < 1) throw domain_error("qubit count must be positive");
    const double theta = std::asin(std::pow(2.0, -0.5 * n));
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    ComplexMatrix m(2, 2);
    m << -c, s, -s, -c;
    return m;
}

TableRow run_grover(int n, std::int64_t iterations) {
    if (iterations < 0) throw domain_error("iteration count must be non-negative");
    const double amp = std::pow(2.0, -0.5 * n);
    const double rest = std::sqrt(1.0 - std::pow(2.0, -static_cast<double>(n)));
    ComplexVector psi(2);
    psi << 1.0, 0.0;
    psi = apply_power(grover_step_matrix(n), psi, iterations);
    // |j> = (amp, rest), its orthogonal partner in the plane = (rest, -amp)
    const cplx on = amp * psi(0) + rest * psi(1);
    const cplx off = rest * psi(0) - amp * psi(1);
    TableRow row;
    row.n = n;
    row.omega_label = "-";
    row.omega = pi;
    row.algorithm = "grover";
    row.iterations = iterations;
    // Divide out the accumulated norm drift of ~10^6 products.
    const double total = mass(psi);
    row.success_probability = std::norm(on) / total;
    row.error_rate = std::norm(off) / total;
    row.norm_drift = std::abs(std::sqrt(total) - 1.0);
    return row;
}

ReducedOperator build_step_single(const CircuitSpec& spec) {
    check_spec(spec, 1);
    const int n = spec.n;
    ComplexMatrix u = collective_rotation(n, spec.phi);
    // right-multiplying by O' = diag(e^{i omega}, 1, ..., 1) scales column 0
    u.col(0) *= std::polar(1.0, spec.omega.value());
    polish_unitary(u);
    return ReducedOperator{n + 1, std::move(u)};
}

TableRow run_single(const CircuitSpec& spec) {
    const ReducedOperator step = build_step_single(spec);
    ComplexVector psi = uniform_coords(spec.n).cast<cplx>();
    psi = apply_power(step.entries, std::move(psi), spec.iterations);
    TableRow row;
    row.n = spec.n;
    row.omega = spec.omega.value();
    row.algorithm = "separable";
    row.iterations = spec.iterations;
    const double total = mass(psi);
    row.success_probability = std::norm(psi(0)) / total;
    row.error_rate = mass(psi.tail(spec.n)) / total;
    row.norm_drift = std::abs(std::sqrt(total) - 1.0);
    return row;
}

namespace {

struct TwoBlockIndex {
    int agree_dim;
    int diff_dim;
    TwoBlockLayout layout;

    int operator()(int s1, int s2) const {
        return layout == TwoBlockLayout::agreement_first ? s1 * diff_dim + s2 : s2 * agree_dim + s1;
    }
};

}  // namespace

ReducedOperator build_step_two(const CircuitSpec& spec, TwoBlockLayout layout) {
    check_spec(spec, 2);
    const int d = spec.hamming_distance;
    const int m = spec.n - d;
    const ComplexMatrix ga = collective_rotation(m, spec.phi);
    const ComplexMatrix gd = collective_rotation(d, spec.phi);
    const TwoBlockIndex idx{m + 1, d + 1, layout};
    const int dim = (m + 1) * (d + 1);

    ComplexMatrix u(dim, dim);
    for (int a1 = 0; a1 <= m; ++a1) {
        for (int a2 = 0; a2 <= d; ++a2) {
            for (int b1 = 0; b1 <= m; ++b1) {
                for (int b2 = 0; b2 <= d; ++b2) {
                    u(idx(a1, a2), idx(b1, b2)) = ga(a1, b1) * gd(a2, b2);
                }
            }
        }
    }
    const cplx kick = std::polar(1.0, spec.omega.value());
    u.col(idx(0, 0)) *= kick;
    u.col(idx(0, d)) *= kick;
    polish_unitary(u);
    return ReducedOperator{dim, std::move(u)};
}

TableRow run_two(const CircuitSpec& spec, TwoBlockLayout layout) {
    const ReducedOperator step = build_step_two(spec, layout);
    const int d = spec.hamming_distance;
    const int m = spec.n - d;
    const RealVector va = uniform_coords(m);
    const RealVector vd = uniform_coords(d);
    const TwoBlockIndex idx{m + 1, d + 1, layout};
    ComplexVector psi(step.dim);
    for (int s1 = 0; s1 <= m; ++s1) {
        for (int s2 = 0; s2 <= d; ++s2) psi(idx(s1, s2)) = va(s1) * vd(s2);
    }
    psi = apply_power(step.entries, std::move(psi), spec.iterations);

    const int j1 = idx(0, 0);
    const int j2 = idx(0, d);
    std::vector<double> off;
    off.reserve(static_cast<std::size_t>(step.dim));
    for (int i = 0; i < step.dim; ++i) {
        if (i != j1 && i != j2) off.push_back(std::norm(psi(i)));
    }
    TableRow row;
    row.n = spec.n;
    row.omega = spec.omega.value();
    row.algorithm = "separable2";
    row.iterations = spec.iterations;
    row.success_probability = std::norm(psi(j1)) + std::norm(psi(j2));
    row.error_rate = pairwise_sum<double>(off);
    row.norm_drift = std::abs(std::sqrt(mass(psi)) - 1.0);
    return row;
}

std::vector<TableRow> table_sweep(const std::vector<int>& ns, const std::vector<LabeledOmega>& omegas,
                                  unsigned threads) {
    struct Cell {
        int n;
        const LabeledOmega* omega;  // null for Grover
    };
    std::vector<Cell> cells;
    for (int n : ns) {
        cells.push_back({n, nullptr});
        for (const auto& w : omegas) cells.push_back({n, &w});
    }

    std::vector<TableRow> rows(cells.size());
    auto evaluate = [&](std::size_t i) {
        const Cell& cell = cells[i];
        TableRow& row = rows[i];
        try {
            if (cell.omega == nullptr) {
                row = run_grover(cell.n, grover_iterations(cell.n));
            } else {
                row = run_single(make_single_spec(cell.n, cell.omega->omega));
                row.omega_label = cell.omega->label;
            }
        } catch (const std::exception& e) {
            row = TableRow{};
            row.n = cell.n;
            row.omega_label = cell.omega ? cell.omega->label : "-";
            row.omega = cell.omega ? cell.omega->omega.value() : pi;
            row.algorithm = cell.omega ? "separable" : "grover";
            row.error = e.what();
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) evaluate(i);
        return rows;
    }
    // Biggest cells first so the n = 40 columns do not serialize at the tail.
    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cells[a].n > cells[b].n; });
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < order.size(); k = next++) evaluate(order[k]);
        });
    }
    for (auto& t : pool) t.join();
    return rows;
}

}  // namespace qsearch
