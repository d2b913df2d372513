// Acceptance checks, one PASS/FAIL line per criterion.
//
//   acceptance          run all eight
//   acceptance 3 5      run a subset
//
// Exit status is non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qsearch/aqc_bridge.hpp"
#include "qsearch/lemma_verifier.hpp"
#include "qsearch/phase_solver.hpp"
#include "qsearch/reduced_sim.hpp"
#include "qsearch/spectral_analysis.hpp"
#include "qsearch/statevector_sim.hpp"
#include "support.hpp"

using namespace qsearch;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [" << what << "]";
        }
    }
};

const std::vector<int> kNs{10, 20, 30, 40};
const std::vector<std::pair<std::string, OmegaParam>> kColumns{
    {"pi/2", OmegaParam::pi_fraction(1, 2)},   {"2pi/3", OmegaParam::pi_fraction(2, 3)},
    {"3pi/4", OmegaParam::pi_fraction(3, 4)},  {"4pi/5", OmegaParam::pi_fraction(4, 5)},
    {"pi", OmegaParam::pi_fraction(1, 1)},
};
// Published values: Grover first, then the five omega columns.
const std::int64_t kIterations[4][6] = {
    {25, 36, 29, 27, 26, 25},
    {804, 1137, 929, 871, 846, 804},
    {25735, 36396, 29717, 27856, 27060, 25736},
    {823549, 1164675, 950953, 891404, 865931, 823550},
};
const char* kErrorRates[4][6] = {
    {"5.4e-04", "2.2e-01", "2.5e-01", "2.7e-01", "2.9e-01", "6.8e-01"},
    {"2.4e-07", "8.5e-02", "9.7e-02", "1.1e-01", "1.1e-01", "6.2e-01"},
    {"6.8e-10", "5.0e-02", "5.8e-02", "6.3e-02", "6.8e-02", "6.1e-01"},
    {"9.8e-14", "3.5e-02", "4.1e-02", "4.5e-02", "4.9e-02", "6.0e-01"},
};

std::string two_sig(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome iteration_counts() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int matched = 0;
    for (std::size_t i = 0; i < kNs.size(); ++i) {
        const int n = kNs[i];
        const auto g = grover_iterations(n);
        if (g == kIterations[i][0]) ++matched;
        else o.require(false, "N(" + std::to_string(n) + ")=" + std::to_string(g));
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
            const auto np = circuit_iterations(n, kColumns[c].second, 1);
            if (np == kIterations[i][c + 1]) ++matched;
            else o.require(false, "N'(" + std::to_string(n) + "," + kColumns[c].first + ")=" + std::to_string(np));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 0.5, "runtime");
    o.detail << " " << matched << "/24 integers exact, " << secs * 1e3 << " ms";
    return o;
}

Outcome error_rates() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int matched = 0;
    for (std::size_t i = 0; i < kNs.size(); ++i) {
        const int n = kNs[i];
        const auto g = run_grover(n, grover_iterations(n));
        if (two_sig(g.error_rate) == kErrorRates[i][0]) ++matched;
        else {
            char buf[160];
            std::snprintf(buf, sizeof buf, "grover n=%d: %.4e rounds to %s, published %s", n, g.error_rate,
                          two_sig(g.error_rate).c_str(), kErrorRates[i][0]);
            o.require(false, buf);
        }
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
            const auto r = run_single(make_single_spec(n, kColumns[c].second));
            if (two_sig(r.error_rate) == kErrorRates[i][c + 1]) ++matched;
            else {
                char buf[160];
                std::snprintf(buf, sizeof buf, "n=%d omega=%s: %.4e rounds to %s, published %s", n,
                              kColumns[c].first.c_str(), r.error_rate, two_sig(r.error_rate).c_str(),
                              kErrorRates[i][c + 1]);
                o.require(false, buf);
            }
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 600.0, "runtime");
    o.detail << " " << matched << "/24 error rates match, " << secs << " s single-threaded";
    return o;
}

Outcome cross_engine() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_p = 0.0, worst_f = 0.0;
    const std::vector<OmegaParam> omegas{OmegaParam::pi_fraction(1, 2), OmegaParam::pi_fraction(2, 3), OmegaParam(1.0)};
    for (int n = 1; n <= 12; ++n) {
        for (const auto& w : omegas) {
            const double reduced = run_single(make_single_spec(n, w)).success_probability;
            for (unsigned seed : {1u, 2u, 3u}) {
                std::mt19937_64 rng(seed * 1000 + static_cast<unsigned>(n));
                const std::uint64_t j = rng() % (std::uint64_t{1} << n);
                FullSearchSpec fs;
                fs.n = n;
                fs.omega = w;
                fs.j_set = {j};
                fs.iterations = circuit_iterations(n, w, 1);
                worst_p = std::max(worst_p, std::abs(run_search_full(fs) - reduced));

                if (!w.rational()) continue;
                // kickback register vs direct phase: compare the joint states
                const auto anc = kickback_ancilla(w.rational()->c, w.rational()->d);
                const double phi = solve_phi(n, w).phi;
                FullState direct = init_uniform(n);
                FullState kick = init_uniform_with_ancilla(n, anc);
                for (std::int64_t it = 0; it < fs.iterations; ++it) {
                    apply_oracle(direct, {j}, oracle::PhaseDirect{w.value()});
                    apply_diffusion(direct, diffusion::Separable{phi});
                    apply_oracle(kick, {j}, oracle::PhaseKickback{w.rational()->c, w.rational()->d});
                    apply_diffusion(kick, diffusion::Separable{phi});
                }
                FullState joint = kick;
                for (std::uint64_t m = 0; m < direct.system_dim(); ++m)
                    for (int k = 0; k < joint.ancilla_dim; ++k) joint.at(m, k) = direct.at(m, 0) * anc[static_cast<std::size_t>(k)];
                worst_f = std::max(worst_f, std::abs(1.0 - fidelity(joint, kick)));
            }
        }
    }
    const double secs = seconds_since(t0);
    o.require(worst_p < 1e-10, "probability gap");
    o.require(worst_f < 1e-12, "kickback fidelity");
    o.require(secs < 60.0, "runtime");
    o.detail << " max|p_full-p_reduced|=" << worst_p << ", max fidelity deviation=" << worst_f << ", " << secs << " s";
    return o;
}

Outcome spectral_suite() {
    Outcome o;
    double worst = 0.0;
    for (int n = 1; n <= 24; ++n) {
        for (const auto& w : {OmegaParam::pi_fraction(1, 2), OmegaParam::pi_fraction(2, 3), OmegaParam(1.0)}) {
            const auto res = secular_residuals(spectral_report(n, w));
            worst = std::max({worst, res.max_component(), res.max_eigenvalue(), res.max_normalization()});
        }
    }
    o.require(worst < 1e-8, "secular residuals");
    o.detail << " secular max " << worst << ";";

    for (const auto& [label, w] : {std::pair{"pi/2", OmegaParam::pi_fraction(1, 2)}, std::pair{"2pi/3", OmegaParam::pi_fraction(2, 3)}}) {
        const auto rows = gamma_asymptotics(w, kNs);
        o.detail << " gamma dev (" << label << "):";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            o.detail << " " << rows[i].deviation;
            if (i > 0) o.require(rows[i].deviation < rows[i - 1].deviation, std::string("gamma trend ") + label);
        }
        o.detail << ";";
        const auto ov = overlap_row(spectral_report(40, w));
        for (double v : {ov.inv_z2_plus, ov.inv_z2_minus}) o.require(v >= 1.8 && v <= 2.3, std::string("overlap ") + label);
        o.detail << " |<0z|psi>|^-2 at n=40: " << ov.inv_z2_plus << ", " << ov.inv_z2_minus << ";";
    }
    return o;
}

Outcome lemma_suite() {
    Outcome o;
    std::vector<int> ns;
    for (int n = 1; n <= 200; ++n) ns.push_back(n);
    for (int n : {256, 512, 1000, 1024, 2048, 4096, 10000, 100000}) ns.push_back(n);
    double worst_mean = 0.0;
    for (int n : ns) worst_mean = std::max(worst_mean, std::abs(weighted_sum(n, [](double x) { return x; }) - 0.5));
    o.require(worst_mean < 1e-14, "mean");
    o.detail << " max|mean-1/2|=" << worst_mean << ";";

    std::vector<int> cot_ns;
    for (int n = 16; n <= 4096; n *= 2) cot_ns.push_back(n);
    for (const auto& [label, r] : {std::pair{"pi/2", kPi / 2}, std::pair{"pi", kPi}, std::pair{"3pi/2", 1.5 * kPi}}) {
        const auto dev = cot_lemma_deviations(r, cot_ns);
        for (std::size_t i = 1; i < dev.size(); ++i) o.require(dev[i] < dev[i - 1], std::string("cot trend ") + label);
        o.require(dev.back() < 1e-2, std::string("cot top ") + label);
        o.detail << " cot(" << label << ") at 4096: " << dev.back() << ";";
    }

    int tested = 0;
    for (int n : {5, 9, 13, 17, 25, 50, 100, 257, 1000, 4096}) {
        for (int q = -12; q <= 12; ++q) {
            if (q == 0 || n <= 4 * std::abs(q)) continue;
            const auto m = moment_report(n, q);
            ++tested;
            if (!m.sandwiched()) {
                o.require(false, "sandwich n=" + std::to_string(n) + " q=" + std::to_string(q));
            }
        }
    }
    o.detail << " sandwich held on " << tested << " (n,q) pairs";
    return o;
}

Outcome aqc_suite() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {4, 8, 10, 20, 30, 40}) {
        const auto scan = gap_scan(HamiltonianFamily(HamiltonianKind::roland, n));
        o.require(std::abs(scan.mu_star - 0.5) <= 1e-6, "roland mu* n=" + std::to_string(n));
        o.require(std::abs(scan.min_gap - std::pow(2.0, -0.5 * n)) <= 1e-10, "roland gap n=" + std::to_string(n));
    }
    double worst_id = 0.0;
    std::vector<double> ratios;
    for (int n : kNs) {
        const auto rep = check_operator_identities(n, OmegaParam::pi_fraction(1, 2));
        worst_id = std::max({worst_id, rep.diffusion_residual, rep.oracle_residual});
        ratios.push_back(rep.ratio);
    }
    o.require(worst_id < 1e-12, "grover identities");
    o.detail << " identity residual " << worst_id << "; ratio trend";
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        o.detail << " " << ratios[i];
        if (i > 0) o.require(std::abs(ratios[i] - 1.0) < std::abs(ratios[i - 1] - 1.0), "ratio trend");
    }
    o.require(std::abs(ratios.back() - 1.0) < 0.15, "ratio at n=40");

    const int n = 8;
    const HamiltonianFamily roland(HamiltonianKind::roland, n);
    const auto sched = roland_schedule(std::asin(std::pow(2.0, -0.5 * n)));
    std::vector<EvolutionTrace> traces;
    for (double T : {1e3, 1e4, 1e5}) traces.push_back(adiabatic_evolve(roland, T, sched));
    const double final_overlap = traces.back().checkpoints.back().ground_overlap;
    o.require(final_overlap > 0.999, "T=1e5 overlap");
    o.detail << "; ground overlap at T=1e5: " << final_overlap << "; Grover-checkpoint mean overlap";
    std::vector<double> means;
    for (const auto& tr : traces) {
        double acc = 0.0;
        int cnt = 0;
        for (const auto& g : tr.grover_checkpoints) {
            if (g.m == 0) continue;
            acc += g.overlap;
            ++cnt;
        }
        means.push_back(acc / cnt);
        o.detail << " " << means.back();
    }
    for (std::size_t t = 1; t < traces.size(); ++t) {
        o.require(means[t] > means[t - 1], "checkpoint mean trend");
        const auto& a = traces[t - 1].grover_checkpoints;
        const auto& b = traces[t].grover_checkpoints;
        for (std::size_t m = 1; m < std::min(a.size(), b.size()); ++m) {
            o.require(b[m].overlap > a[m].overlap, "checkpoint m=" + std::to_string(m));
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 300.0, "runtime");
    o.detail << "; " << secs << " s";
    return o;
}

Outcome two_solution_suite() {
    Outcome o;
    double worst = 0.0;
    std::mt19937_64 rng(99);
    for (int n = 2; n <= 12; ++n) {
        for (const auto& w : {OmegaParam::pi_fraction(2, 3), OmegaParam::pi_fraction(1, 2), OmegaParam(1.0)}) {
            for (int trial = 0; trial < 3; ++trial) {
                const std::uint64_t dim = std::uint64_t{1} << n;
                const std::uint64_t j1 = rng() % dim;
                std::uint64_t j2 = rng() % dim;
                while (j2 == j1) j2 = rng() % dim;
                const int d = std::popcount(j1 ^ j2);
                const auto spec = make_two_spec(n, d, w);
                FullSearchSpec fs;
                fs.n = n;
                fs.omega = w;
                fs.j_set = {j1, j2};
                fs.iterations = spec.iterations;
                worst = std::max(worst, std::abs(run_search_full(fs) - run_two(spec).success_probability));
            }
        }
    }
    o.require(worst < 1e-10, "reduced vs full");
    o.detail << " max|p_full-p_reduced|=" << worst << ";";
    const OmegaParam w = OmegaParam::pi_fraction(2, 3);
    for (int d : {2, 4, 10}) {
        o.detail << " d=" << d << ":";
        double prev = 0.0;
        for (int n : {20, 24, 28, 32}) {
            const double p = run_two(make_two_spec(n, d, w)).success_probability;
            o.detail << " " << p;
            if (n == 20) o.require(p > 0.85, "n=20 d=" + std::to_string(d));
            else o.require(p > prev, "trend d=" + std::to_string(d));
            prev = p;
        }
        o.detail << ";";
    }
    return o;
}

Outcome cli_contract() {
    Outcome o;
    const std::string tool = QSEARCH_TOOL;
    const auto a = qsearch::testing::run_command(tool + " table");
    const auto b = qsearch::testing::run_command(tool + " table --threads 1");
    o.require(a.exit_code == 0 && b.exit_code == 0, "exit code");
    o.require(!a.out.empty() && a.out == b.out, "rerun differs");
    o.detail << " rerun byte-identical: " << (a.out == b.out ? "yes" : "no") << ";";

    const auto p = qsearch::testing::run_command(tool + " table --paper-format");
    const std::string golden = qsearch::testing::read_file(std::string(QSEARCH_TEST_DATA) + "/published_table.csv");
    std::istringstream got(p.out), want(golden);
    std::string g, w;
    int line = 0, diffs = 0;
    while (true) {
        const bool hg = static_cast<bool>(std::getline(got, g));
        const bool hw = static_cast<bool>(std::getline(want, w));
        if (!hg && !hw) break;
        ++line;
        if (!hg || !hw || g != w) {
            ++diffs;
            o.detail << " line " << line << ": got '" << (hg ? g : "<eof>") << "' want '" << (hw ? w : "<eof>") << "';";
        }
    }
    o.require(diffs == 0, "two-significant-figure diff");
    o.detail << " published-table diff lines: " << diffs;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"published iteration counts", iteration_counts},
        {"published error rates", error_rates},
        {"cross-engine oracle equivalence", cross_engine},
        {"spectral suite", spectral_suite},
        {"lemma suite", lemma_suite},
        {"adiabatic suite", aqc_suite},
        {"two-solution suite", two_solution_suite},
        {"CLI contract", cli_contract},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));
    if (selected.empty()) {
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
    }
    bool all = true;
    for (int k : selected) {
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::cerr << "no criterion " << k << "\n";
            return 2;
        }
        Outcome out;
        try {
            out = criteria[static_cast<std::size_t>(k - 1)].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << " exception: " << e.what();
        }
        all = all && out.pass;
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << criteria[static_cast<std::size_t>(k - 1)].first
                  << "):" << out.detail.str() << std::endl;
    }
    return all ? 0 : 1;
}
