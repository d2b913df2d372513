#pragma once

// Adiabatic counterparts of the two circuits.
//
//   roland: H_R(r) = -(1-r)|0bar><0bar| - r|j><j|, on span{|0bar>, |1bar>}
//   farhi:  H_F(r) = -(1-r) sum_a S_x^(a) - r|j><j|, on the symmetric sector
//
// The roland model is kept in the 2-dim plane: H_R vanishes on the
// orthogonal complement, and its upper plane eigenvalue is never positive,
// so the two lowest levels always come from the plane.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsearch/numeric.hpp"
#include "qsearch/phase_solver.hpp"

namespace qsearch {

enum class HamiltonianKind { roland, farhi };

const char* to_string(HamiltonianKind kind);

class HamiltonianFamily {
public:
    HamiltonianFamily(HamiltonianKind kind, int n);

    HamiltonianKind kind() const { return kind_; }
    int n() const { return n_; }
    int dim() const { return static_cast<int>(start_.rows()); }

    ComplexMatrix at(double r) const;
    // dH/dr (the families are affine in r)
    const ComplexMatrix& slope() const { return slope_; }
    // Upper bound on ||H(r)||_2 over r in [0, 1].
    double norm_bound() const { return norm_bound_; }
    // Coordinates of |0bar> in the family's basis.
    ComplexVector uniform_state() const;

private:
    HamiltonianKind kind_;
    int n_;
    ComplexMatrix start_;  // H(0)
    ComplexMatrix slope_;  // H(1) - H(0)
    double norm_bound_;
};

// E_1 - E_0 at parameter r.
double spectral_gap(const HamiltonianFamily& family, double r);

struct GapScan {
    HamiltonianKind kind{};
    int n = 0;
    std::vector<std::pair<double, double>> samples;  // (r, gap)
    double mu_star = 0.0;
    double min_gap = 0.0;
};

// Uniform scan, golden-section refinement around the coarse minimum, then a
// Hellmann-Feynman polish of d(gap)/dr = 0.
GapScan gap_scan(const HamiltonianFamily& family, int resolution = 2001);

struct IdentityReport {
    int n = 0;
    double omega = 0.0;
    double phi = 0.0;
    // Grover side
    double mu_roland = 0.0;
    double diffusion_residual = 0.0;  // |G - exp(i 2 pi (1 - mu) H_R(0))|_max
    double oracle_residual = 0.0;     // |O - exp(i 2 pi mu H_R(1))|_max
    // Farhi side: G' = exp(i a H_F(0)), O' = exp(i b H_F(1))
    double fit_a = 0.0;
    double fit_b = 0.0;
    double fit_residual_g = 0.0;
    double fit_residual_o = 0.0;
    double mu_farhi_gap = 0.0;  // gap minimizer of H_F
    double mu_farhi_fit = 0.0;  // b / (a + b), from a = pi xi (1 - mu), b = pi xi mu
    double xi_fit = 0.0;        // (a + b) / pi
    double xi_from_definition = 0.0;  // omega / mu_farhi_fit
    bool xi_sign_consistent = false;
    double ratio = 0.0;  // (a / b) (mu* / (1 - mu*)) with the gap minimizer
};

IdentityReport check_operator_identities(int n, const OmegaParam& omega);

// sin((pi - 2t) r) / (sin((pi - 2t) r) + sin((pi - 2t) r + 2t))
double schedule_value(double r, double theta);

struct Schedule {
    std::string name;
    std::function<double(double)> mu;
    // theta of the roland schedule; enables the Grover checkpoints
    std::optional<double> roland_theta;
};

Schedule linear_schedule();
Schedule roland_schedule(double theta);

struct Checkpoint {
    double t = 0.0;
    double ground_overlap = 0.0;  // |<ground(mu(t/T))|psi(t)>|
};

struct GroverCheckpoint {
    int m = 0;
    double t = 0.0;
    double overlap = 0.0;  // |<psi(t_m)|(G O)^m|0bar>|
};

struct EvolutionTrace {
    HamiltonianKind kind{};
    int n = 0;
    double T = 0.0;
    std::string schedule;
    std::vector<Checkpoint> checkpoints;
    std::vector<GroverCheckpoint> grover_checkpoints;
    double max_norm_drift = 0.0;
    std::int64_t steps = 0;
    ComplexVector final_state;
};

struct EvolveOptions {
    // Steps are sized so that ||H|| dt stays below this.
    double max_step_norm = 0.05;
    std::int64_t max_steps = 2'000'000'000;
};

// Fourth-order Magnus integration of i dpsi/dt = H(mu(t/T)) psi from |0bar>.
// `checkpoints` are times in [0, T]; T itself is always recorded last.
EvolutionTrace adiabatic_evolve(const HamiltonianFamily& family, double T, const Schedule& schedule,
                                std::vector<double> checkpoints = {}, const EvolveOptions& options = {});

// t_m = 4 theta T m / (pi - 2 theta), m = 0 .. [pi / (4 theta) + 1/4]
std::vector<std::pair<int, double>> grover_checkpoint_times(int n, double T);

}  // namespace qsearch
