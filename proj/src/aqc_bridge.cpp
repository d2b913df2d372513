#include "qsearch/aqc_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsearch/errors.hpp"
#include "qsearch/reduced_sim.hpp"
#include "qsearch/spin_space.hpp"

namespace qsearch {

const char* to_string(HamiltonianKind kind) { return kind == HamiltonianKind::roland ? "roland" : "farhi"; }

HamiltonianFamily::HamiltonianFamily(HamiltonianKind kind, int n) : kind_(kind), n_(n), norm_bound_(1.0) {
    if (kind == HamiltonianKind::roland) {
        if (n < 1 || n > 1000) throw domain_error("roland family needs 1 <= n <= 1000");
        const double c = std::pow(2.0, -0.5 * n);
        const double s = std::sqrt(1.0 - c * c);
        ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
        p0(0, 0) = 1.0;
        ComplexMatrix pj(2, 2);
        pj << c * c, c * s, c * s, s * s;
        start_ = -p0;
        slope_ = p0 - pj;
    } else {
        if (n < 1 || n > 40) throw domain_error("farhi family needs 1 <= n <= 40");
        const ComplexMatrix jx = collective_x_operator(n).cast<cplx>();
        ComplexMatrix p0 = ComplexMatrix::Zero(n + 1, n + 1);
        p0(0, 0) = 1.0;
        start_ = -jx;
        slope_ = jx - p0;
        norm_bound_ = std::max(1.0, 0.5 * n);
    }
}

ComplexMatrix HamiltonianFamily::at(double r) const { return start_ + r * slope_; }

ComplexVector HamiltonianFamily::uniform_state() const {
    if (kind_ == HamiltonianKind::roland) {
        ComplexVector v = ComplexVector::Zero(2);
        v(0) = 1.0;
        return v;
    }
    return x_eigenbasis(n_).K.col(0).cast<cplx>();
}

double spectral_gap(const HamiltonianFamily& family, double r) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(family.at(r), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(1) - es.eigenvalues()(0);
}

namespace {

double gap_derivative(const HamiltonianFamily& family, double r) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(family.at(r));
    const auto& v = es.eigenvectors();
    const ComplexMatrix& s = family.slope();
    return std::real(v.col(1).dot(s * v.col(1))) - std::real(v.col(0).dot(s * v.col(0)));
}

}  // namespace

GapScan gap_scan(const HamiltonianFamily& family, int resolution) {
    if (resolution < 3) throw domain_error("gap scan needs at least 3 points");
    GapScan scan{family.kind(), family.n(), {}, 0.0, 0.0};
    std::size_t best = 0;
    for (int i = 0; i < resolution; ++i) {
        const double r = static_cast<double>(i) / (resolution - 1);
        const double g = spectral_gap(family, r);
        if (!(g > 0.0)) {
            throw analysis_error("degenerate ground state at r = " + std::to_string(r));
        }
        scan.samples.emplace_back(r, g);
        if (g < scan.samples[best].second) best = scan.samples.size() - 1;
    }

    const double coarse_lo = scan.samples[best == 0 ? 0 : best - 1].first;
    const double coarse_hi = scan.samples[std::min(best + 1, scan.samples.size() - 1)].first;
    double a = coarse_lo;
    double b = coarse_hi;
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = spectral_gap(family, x1);
    double f2 = spectral_gap(family, x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = spectral_gap(family, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = spectral_gap(family, x2);
        }
    }
    double mu = 0.5 * (a + b);

    // Function values cannot locate a smooth minimum beyond ~sqrt(eps); the
    // derivative crosses zero linearly, so bisect on it over the coarse bracket.
    double lo = coarse_lo;
    double hi = coarse_hi;
    if (gap_derivative(family, lo) < 0.0 && gap_derivative(family, hi) > 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double dm = gap_derivative(family, mid);
            if (dm == 0.0) {
                lo = hi = mid;
                break;
            }
            if (dm < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        mu = 0.5 * (lo + hi);
    }
    scan.mu_star = mu;
    scan.min_gap = spectral_gap(family, mu);
    return scan;
}

IdentityReport check_operator_identities(int n, const OmegaParam& omega) {
    IdentityReport rep;
    rep.n = n;
    rep.omega = omega.value();

    // Grover side, in the {|0bar>, |1bar>} plane.
    const HamiltonianFamily roland(HamiltonianKind::roland, n);
    rep.mu_roland = gap_scan(roland).mu_star;
    const double c = std::pow(2.0, -0.5 * n);
    const double s = std::sqrt(1.0 - c * c);
    ComplexMatrix g = ComplexMatrix::Identity(2, 2);
    g(0, 0) = -1.0;
    ComplexMatrix o(2, 2);
    o << 1.0 - 2.0 * c * c, -2.0 * c * s, -2.0 * c * s, 1.0 - 2.0 * s * s;
    // exp(i x H) = expm_hermitian(H, -x)
    rep.diffusion_residual = max_abs(ComplexMatrix(g - expm_hermitian(roland.at(0.0), -2.0 * pi * (1.0 - rep.mu_roland))));
    rep.oracle_residual = max_abs(ComplexMatrix(o - expm_hermitian(roland.at(1.0), -2.0 * pi * rep.mu_roland)));

    // Farhi side.
    const HamiltonianFamily farhi(HamiltonianKind::farhi, n);
    const CircuitSpec spec = make_single_spec(n, omega, 0);
    rep.phi = spec.phi;
    const OverlapBasis basis = x_eigenbasis(n);
    const ComplexMatrix k = basis.K.cast<cplx>();
    ComplexVector phases(n + 1);
    for (int i = 0; i <= n; ++i) phases(i) = std::polar(1.0, spec.phi * basis.x_eigenvalues(i));
    const ComplexMatrix g_sep = k * phases.asDiagonal() * k.transpose();
    ComplexMatrix o_sep = ComplexMatrix::Identity(n + 1, n + 1);
    o_sep(0, 0) = std::polar(1.0, omega.value());

    // H_F(0) = -sum S_x has eigenvalue -(n/2 - s) on |s_x>, so the ratio of the
    // s = 0 and s = 1 eigenvalues of exp(i a H_F(0)) is e^{-i a}.
    const cplx l0 = k.col(0).dot(g_sep * k.col(0));
    const cplx l1 = k.col(1).dot(g_sep * k.col(1));
    rep.fit_a = -std::arg(l0 / l1);
    rep.fit_b = -std::arg(o_sep(0, 0));
    rep.fit_residual_g = max_abs(ComplexMatrix(g_sep - expm_hermitian(farhi.at(0.0), -rep.fit_a)));
    rep.fit_residual_o = max_abs(ComplexMatrix(o_sep - expm_hermitian(farhi.at(1.0), -rep.fit_b)));

    rep.mu_farhi_gap = gap_scan(farhi).mu_star;
    rep.mu_farhi_fit = rep.fit_b / (rep.fit_a + rep.fit_b);
    rep.xi_fit = (rep.fit_a + rep.fit_b) / pi;
    rep.xi_from_definition = rep.omega / rep.mu_farhi_fit;
    rep.xi_sign_consistent = (rep.xi_fit > 0.0) == (rep.xi_from_definition > 0.0);
    rep.ratio = (rep.fit_a / rep.fit_b) * (rep.mu_farhi_gap / (1.0 - rep.mu_farhi_gap));
    return rep;
}

double schedule_value(double r, double theta) {
    const double width = pi - 2.0 * theta;
    if (std::abs(width) < 1e-12) return r;  // theta -> pi/2: the 0/0 limit is linear
    const double x = width * r;
    const double num = std::sin(x);
    const double den = num + std::sin(x + 2.0 * theta);
    return num / den;
}

Schedule linear_schedule() { return Schedule{"linear", [](double r) { return r; }, std::nullopt}; }

Schedule roland_schedule(double theta) {
    return Schedule{"roland", [theta](double r) { return schedule_value(r, theta); }, theta};
}

std::vector<std::pair<int, double>> grover_checkpoint_times(int n, double T) {
    const double theta = std::asin(std::pow(2.0, -0.5 * n));
    const int last = static_cast<int>(std::floor(pi / (4.0 * theta) + 0.25));
    std::vector<std::pair<int, double>> out;
    for (int m = 0; m <= last; ++m) {
        const double t = 4.0 * theta * T * m / (pi - 2.0 * theta);
        if (t <= T) out.emplace_back(m, t);
    }
    return out;
}

namespace {

ComplexVector ground_state(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    return es.eigenvectors().col(0);
}

}  // namespace

EvolutionTrace adiabatic_evolve(const HamiltonianFamily& family, double T, const Schedule& schedule,
                                std::vector<double> checkpoints, const EvolveOptions& options) {
    if (!(T > 0.0)) throw domain_error("total time T must be positive");
    for (double t : checkpoints) {
        if (t < 0.0 || t > T) throw domain_error("checkpoint outside [0, T]");
    }
    EvolutionTrace trace;
    trace.kind = family.kind();
    trace.n = family.n();
    trace.T = T;
    trace.schedule = schedule.name;

    const bool grover_aligned = family.kind() == HamiltonianKind::roland && schedule.roland_theta.has_value();
    std::vector<std::pair<int, double>> grover_times;
    if (grover_aligned) grover_times = grover_checkpoint_times(family.n(), T);

    struct Event {
        double t;
        int checkpoint;  // index into checkpoints or -1
        int grover_m;    // -1 if none
    };
    std::vector<Event> events;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) events.push_back({checkpoints[i], static_cast<int>(i), -1});
    for (const auto& [m, t] : grover_times) events.push_back({t, -1, m});
    events.push_back({T, -2, -1});
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

    const ComplexMatrix grover = grover_step_matrix(family.n());
    ComplexVector grover_state = ComplexVector::Zero(2);
    grover_state(0) = 1.0;
    int grover_power = 0;

    std::vector<Checkpoint> recorded(checkpoints.size());
    ComplexVector psi = family.uniform_state();
    double t = 0.0;
    const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double comm_coef = std::sqrt(3.0) / 12.0;
    auto hamiltonian_at = [&](double time) { return family.at(schedule.mu(std::clamp(time / T, 0.0, 1.0))); };

    for (const Event& ev : events) {
        const double span = ev.t - t;
        if (span > 0.0) {
            const double want = std::ceil(span * family.norm_bound() / options.max_step_norm);
            if (want > static_cast<double>(options.max_steps)) {
                throw numeric_error("adiabatic integration would need more than max_steps steps");
            }
            const auto steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(want));
            const double h = span / static_cast<double>(steps);
            for (std::int64_t k = 0; k < steps; ++k) {
                const double t0 = t + static_cast<double>(k) * h;
                const ComplexMatrix h1 = hamiltonian_at(t0 + c1 * h);
                const ComplexMatrix h2 = hamiltonian_at(t0 + c2 * h);
                const ComplexMatrix comm = h2 * h1 - h1 * h2;
                const ComplexMatrix m = 0.5 * h * (h1 + h2) - cplx(0.0, comm_coef * h * h) * comm;
                psi = expm_hermitian(m, 1.0) * psi;
            }
            trace.steps += steps;
            t = ev.t;
        }
        trace.max_norm_drift = std::max(trace.max_norm_drift, std::abs(psi.norm() - 1.0));

        if (ev.checkpoint >= 0) {
            const ComplexVector g = ground_state(hamiltonian_at(ev.t));
            recorded[static_cast<std::size_t>(ev.checkpoint)] = Checkpoint{ev.t, std::abs(g.dot(psi))};
        } else if (ev.checkpoint == -2) {
            const ComplexVector g = ground_state(hamiltonian_at(T));
            trace.checkpoints = recorded;
            trace.checkpoints.push_back(Checkpoint{T, std::abs(g.dot(psi))});
        }
        if (ev.grover_m >= 0) {
            while (grover_power < ev.grover_m) {
                grover_state = grover * grover_state;
                ++grover_power;
            }
            trace.grover_checkpoints.push_back({ev.grover_m, ev.t, std::abs(psi.dot(grover_state))});
        }
    }
    trace.final_state = psi;
    return trace;
}

}  // namespace qsearch
