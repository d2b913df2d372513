#include "qsearch/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "qsearch/aqc_bridge.hpp"
#include "qsearch/lemma_verifier.hpp"
#include "qsearch/reduced_sim.hpp"
#include "qsearch/spectral_analysis.hpp"
#include "qsearch/statevector_sim.hpp"

namespace qsearch::cli {

using json = nlohmann::ordered_json;

namespace {

const std::vector<int> kDefaultNs{10, 20, 30, 40};
const std::vector<std::string> kDefaultOmegas{"pi/2", "2pi/3", "3pi/4", "4pi/5", "pi"};

struct AngleParts {
    double value = 0.0;
    // integer numerator/denominator of a pi fraction, when the text is one
    std::optional<std::pair<long long, long long>> pi_fraction;
};

AngleParts parse_angle_parts(std::string_view text) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) -> AngleParts { throw parse_error(why + " in '" + std::string(text) + "'", pos); };
    if (text.empty()) fail("empty angle");

    double sign = 1.0;
    if (text[pos] == '+' || text[pos] == '-') {
        sign = text[pos] == '-' ? -1.0 : 1.0;
        ++pos;
    }
    // FLOAT
    const std::size_t num_start = pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) ++pos;
    if (pos < text.size() && pos > num_start && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        const std::size_t exp_start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == exp_start) fail("malformed exponent");
    }
    const std::string coeff_text(text.substr(num_start, pos - num_start));
    double coeff = 1.0;
    bool integral_coeff = true;
    if (!coeff_text.empty()) {
        char* end = nullptr;
        coeff = std::strtod(coeff_text.c_str(), &end);
        if (end != coeff_text.c_str() + coeff_text.size()) {
            pos = num_start;
            fail("malformed number");
        }
        integral_coeff = coeff_text.find_first_of(".eE") == std::string::npos;
    }

    if (pos == text.size()) {
        if (coeff_text.empty()) fail("expected a number or 'pi'");
        return {sign * coeff, std::nullopt};
    }
    if (text.substr(pos, 2) != "pi") fail("unexpected character");
    pos += 2;
    long long den = 1;
    if (pos < text.size()) {
        if (text[pos] != '/') fail("expected '/'");
        ++pos;
        const std::size_t den_start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == den_start) fail("expected an integer denominator");
        if (pos != text.size()) fail("trailing characters");
        den = std::stoll(std::string(text.substr(den_start, pos - den_start)));
        if (den == 0) {
            pos = den_start;
            fail("zero denominator");
        }
    }
    AngleParts out;
    out.value = sign * coeff * pi / static_cast<double>(den);
    if (integral_coeff && coeff < 1e15) {
        out.pi_fraction = std::make_pair(static_cast<long long>(sign * coeff), den);
    }
    return out;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_two_sig(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1e", v);
    return buf;
}

// RFC 4180 quoting, only when needed.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json envelope(const RunSpec& spec, json params) {
    json j;
    j["command"] = spec.command;
    j["params"] = std::move(params);
    return j;
}

void finish(json& j, std::ostream& out) {
    j["version"] = kVersion;
    out << j.dump(2) << '\n';
}

json omega_params(const RunSpec& spec) {
    json p;
    p["n"] = spec.ns;
    p["omega"] = spec.omegas;
    return p;
}

int single_n(const RunSpec& spec) {
    if (spec.ns.size() != 1) throw domain_error(spec.command + " needs exactly one --n");
    return spec.ns.front();
}

std::string single_omega_label(const RunSpec& spec) {
    if (spec.omegas.size() != 1) throw domain_error(spec.command + " needs exactly one --omega");
    return spec.omegas.front();
}

}  // namespace

double parse_angle(std::string_view text) { return parse_angle_parts(text).value; }

OmegaParam parse_omega(std::string_view text) {
    const AngleParts parts = parse_angle_parts(text);
    if (parts.value == 0.0) throw domain_error("omega = 0 is excluded");
    if (!(parts.value > -pi && parts.value <= pi)) {
        throw domain_error("omega '" + std::string(text) + "' outside (-pi, pi]");
    }
    if (parts.pi_fraction) return OmegaParam::pi_fraction(parts.pi_fraction->first, parts.pi_fraction->second);
    return OmegaParam(parts.value);
}

CostReport cost_report(int n, const OmegaParam& omega, const CostModel& model) {
    CostReport r;
    r.n = n;
    r.omega = omega.value();
    r.t_single = model.t_single;
    r.t_multi = model.t_multi.value_or(n * model.t_single);
    r.t_oracle = model.t_oracle;
    r.parallel = model.parallel;
    if (!(r.t_single > 0.0 && r.t_multi > 0.0 && r.t_oracle > 0.0)) {
        throw domain_error("gate times must be positive");
    }
    r.grover_iterations = grover_iterations(n);
    r.circuit_iterations = circuit_iterations(n, omega, 1);
    const double layer = model.parallel ? r.t_single : n * r.t_single;
    r.t_grover = static_cast<double>(r.grover_iterations) * (r.t_multi + r.t_oracle);
    r.t_new = static_cast<double>(r.circuit_iterations) * (layer + r.t_oracle);
    r.ratio = r.t_new / r.t_grover;
    r.break_even_t_multi = r.t_new / static_cast<double>(r.grover_iterations) - r.t_oracle;
    return r;
}

int cmd_table(const RunSpec& spec, std::ostream& out) {
    const std::vector<int> ns = spec.ns.empty() ? kDefaultNs : spec.ns;
    const bool omegas_given = !spec.omegas.empty();
    std::vector<std::string> labels;
    if (!spec.grover_only) labels = omegas_given ? spec.omegas : kDefaultOmegas;
    std::vector<LabeledOmega> omegas;
    for (const auto& l : labels) omegas.push_back({l, parse_omega(l)});
    const bool keep_grover = spec.grover_only || spec.with_grover || !omegas_given;

    std::vector<TableRow> rows;
    for (auto& row : table_sweep(ns, omegas, spec.threads)) {
        if (row.algorithm == "grover" && !keep_grover) continue;
        rows.push_back(std::move(row));
    }
    bool failed = false;
    for (const auto& r : rows) failed = failed || !r.error.empty();

    if (spec.format == Format::json) {
        json p = omega_params(spec);
        p["n"] = ns;
        p["omega"] = labels;
        p["grover"] = keep_grover;
        json j = envelope(spec, p);
        json arr = json::array();
        for (const auto& r : rows) {
            json o;
            o["n"] = r.n;
            o["omega_label"] = r.omega_label;
            o["omega"] = r.omega;
            o["algorithm"] = r.algorithm;
            if (r.error.empty()) {
                o["iterations"] = r.iterations;
                o["success_probability"] = r.success_probability;
                o["error_rate"] = r.error_rate;
                o["norm_drift"] = r.norm_drift;
            }
            o["error"] = r.error;
            arr.push_back(o);
        }
        j["rows"] = arr;
        finish(j, out);
        return failed ? 1 : 0;
    }

    if (spec.paper_format) {
        out << "n,omega_label,algorithm,iterations,error_rate\n";
        for (const auto& r : rows) {
            out << r.n << ',' << csv_field(r.omega_label) << ',' << r.algorithm << ',';
            if (r.error.empty()) out << r.iterations << ',' << fmt_two_sig(r.error_rate);
            else out << ',';
            out << '\n';
        }
    } else {
        out << "n,omega_label,algorithm,iterations,success_probability,error_rate,error\n";
        for (const auto& r : rows) {
            out << r.n << ',' << csv_field(r.omega_label) << ',' << r.algorithm << ',';
            if (r.error.empty()) {
                out << r.iterations << ',' << fmt17(r.success_probability) << ',' << fmt17(r.error_rate) << ',';
            } else {
                out << ",,," << csv_field(r.error);
            }
            out << '\n';
        }
    }
    return failed ? 1 : 0;
}

int cmd_phi(const RunSpec& spec, std::ostream& out) {
    const int n = single_n(spec);
    if (spec.samples < 2) throw domain_error("phi needs at least 2 samples");
    struct Sample {
        double omega;
        double phi;
        std::string error;
    };
    std::vector<Sample> samples;
    for (int k = 0; k < spec.samples; ++k) {
        // midpoints of a uniform partition of (-pi, pi), never +-pi
        // exact integer numerator keeps the grid symmetric bit for bit
        const double w = pi * static_cast<double>(2 * k + 1 - spec.samples) / spec.samples;
        Sample s{w, 0.0, {}};
        try {
            if (w == 0.0) throw domain_error("omega = 0 is excluded");
            s.phi = solve_phi(n, OmegaParam(w)).phi;
        } catch (const std::exception& e) {
            s.error = e.what();
        }
        samples.push_back(std::move(s));
    }
    bool failed = false;
    for (const auto& s : samples) failed = failed || !s.error.empty();
    if (spec.format == Format::json) {
        json p;
        p["n"] = n;
        p["samples"] = spec.samples;
        json j = envelope(spec, p);
        json arr = json::array();
        for (const auto& s : samples) {
            json o;
            o["omega"] = s.omega;
            if (s.error.empty()) o["phi"] = s.phi;
            o["error"] = s.error;
            arr.push_back(o);
        }
        j["rows"] = arr;
        finish(j, out);
    } else {
        out << "omega,phi,error\n";
        for (const auto& s : samples) {
            out << fmt17(s.omega) << ',';
            if (s.error.empty()) out << fmt17(s.phi) << ',';
            else out << ',' << csv_field(s.error);
            out << '\n';
        }
    }
    return failed ? 1 : 0;
}

int cmd_simulate(const RunSpec& spec, std::ostream& out) {
    const int n = single_n(spec);
    const std::string label = single_omega_label(spec);
    const OmegaParam omega = parse_omega(label);

    std::vector<std::uint64_t> js = spec.js.empty() ? std::vector<std::uint64_t>{0} : spec.js;
    if (spec.j2) js.push_back(*spec.j2);
    if (static_cast<int>(js.size()) != spec.solutions) {
        throw domain_error("--solutions " + std::to_string(spec.solutions) + " but " + std::to_string(js.size()) +
                           " solution indices given");
    }
    if (n < 64) {
        for (auto j : js) {
            if (j >> n) throw domain_error("solution index " + std::to_string(j) + " out of range");
        }
    }
    if (std::set<std::uint64_t>(js.begin(), js.end()).size() != js.size()) {
        throw domain_error("solution indices must be distinct");
    }
    const int d = js.size() == 2 ? std::popcount(js[0] ^ js[1]) : 0;
    if (spec.engine == Engine::reduced && spec.solutions > 2) {
        throw domain_error("the reduced engine handles one or two solutions");
    }
    const std::int64_t iterations = spec.iterations.value_or(circuit_iterations(n, omega, std::min(spec.solutions, 2)));

    double phi = 0.0;
    double success = 0.0;
    double error_rate = 0.0;
    if (spec.engine == Engine::reduced) {
        const TableRow row = spec.solutions == 1 ? run_single(make_single_spec(n, omega, iterations))
                                                 : run_two(make_two_spec(n, d, omega, iterations));
        phi = spec.solutions == 1 ? solve_phi(n, omega).phi : solve_phi_two(n, d, omega).phi;
        success = row.success_probability;
        error_rate = row.error_rate;
    } else {
        FullSearchSpec fs;
        fs.n = n;
        fs.omega = omega;
        fs.j_set = js;
        fs.iterations = iterations;
        fs.oracle = spec.oracle == "kickback" ? PhaseOracleKind::kickback : PhaseOracleKind::direct;
        phi = spec.solutions == 2 ? solve_phi_two(n, d, omega).phi : solve_phi(n, omega).phi;
        fs.phi = phi;
        success = run_search_full(fs);
        error_rate = 1.0 - success;
    }

    const std::string engine = spec.engine == Engine::reduced ? "reduced" : "full";
    if (spec.format == Format::json) {
        json p;
        p["n"] = n;
        p["omega"] = label;
        p["engine"] = engine;
        p["solutions"] = spec.solutions;
        p["j"] = js;
        p["oracle"] = spec.oracle;
        json j = envelope(spec, p);
        json o;
        o["n"] = n;
        o["omega_label"] = label;
        o["engine"] = engine;
        o["solutions"] = spec.solutions;
        o["hamming_distance"] = d;
        o["iterations"] = iterations;
        o["phi"] = phi;
        o["success_probability"] = success;
        o["error_rate"] = error_rate;
        j["rows"] = json::array({o});
        finish(j, out);
    } else {
        out << "n,omega_label,engine,solutions,hamming_distance,iterations,phi,success_probability,error_rate\n";
        out << n << ',' << csv_field(label) << ',' << engine << ',' << spec.solutions << ',' << d << ',' << iterations
            << ',' << fmt17(phi) << ',' << fmt17(success) << ',' << fmt17(error_rate) << '\n';
    }
    return 0;
}

int cmd_spectrum(const RunSpec& spec, std::ostream& out) {
    const int n = single_n(spec);
    const std::string label = single_omega_label(spec);
    const SpectralReport rep = spectral_report(n, parse_omega(label));
    const SecularResiduals res = secular_residuals(rep);

    if (spec.format == Format::csv) {
        out << "index,gamma,eigenvalue_re,eigenvalue_im,overlap_z_re,overlap_z_im,overlap_x_re,overlap_x_im\n";
        for (std::size_t i = 0; i < rep.eigenpairs.size(); ++i) {
            const auto& e = rep.eigenpairs[i];
            out << i << ',' << fmt17(e.gamma) << ',' << fmt17(e.eigenvalue.real()) << ',' << fmt17(e.eigenvalue.imag())
                << ',' << fmt17(e.overlap_z.real()) << ',' << fmt17(e.overlap_z.imag()) << ','
                << fmt17(e.overlap_x.real()) << ',' << fmt17(e.overlap_x.imag()) << '\n';
        }
        return 0;
    }
    json p;
    p["n"] = n;
    p["omega"] = label;
    json j = envelope(spec, p);
    json r;
    r["n"] = rep.n;
    r["omega"] = rep.omega;
    r["phi"] = rep.phi;
    r["gamma_plus_index"] = rep.gamma_plus_idx;
    r["gamma_minus_index"] = rep.gamma_minus_idx;
    r["gamma_plus"] = rep.gamma_plus().gamma;
    r["gamma_minus"] = rep.gamma_minus().gamma;
    json pairs = json::array();
    for (const auto& e : rep.eigenpairs) {
        json o;
        o["gamma"] = e.gamma;
        o["eigenvalue"] = cjson(e.eigenvalue);
        o["overlap_z"] = cjson(e.overlap_z);
        o["overlap_x"] = cjson(e.overlap_x);
        pairs.push_back(o);
    }
    r["eigenpairs"] = pairs;
    json s;
    s["component"] = res.max_component();
    s["eigenvalue"] = res.max_eigenvalue();
    s["normalization"] = res.max_normalization();
    s["completeness"] = res.completeness;
    r["secular_residuals"] = s;
    j["report"] = r;
    finish(j, out);
    return 0;
}

int cmd_lemma(const RunSpec& spec, std::ostream& out) {
    if (spec.format != Format::json) throw domain_error("lemma emits JSON only");
    std::vector<int> ns = spec.ns;
    if (ns.empty()) {
        for (int n = 16; n <= 4096; n *= 2) ns.push_back(n);
    }
    const std::vector<int> qs = spec.qs.empty() ? std::vector<int>{-3, -2, -1, 1, 2, 3} : spec.qs;
    const std::vector<std::string> angles =
        spec.angles.empty() ? std::vector<std::string>{"pi/2", "pi", "3pi/2"} : spec.angles;

    json p;
    p["n"] = ns;
    p["q"] = qs;
    p["r"] = angles;
    json j = envelope(spec, p);
    json r;

    json mean = json::array();
    for (int n : ns) {
        const double v = weighted_sum(n, [](double x) { return x; });
        mean.push_back(json{{"n", n}, {"value", v}, {"deviation", std::abs(v - 0.5)}});
    }
    r["mean"] = mean;

    json cot = json::array();
    for (const auto& a : angles) {
        const double angle = parse_angle(a);
        cot.push_back(json{{"r", a}, {"target", 1.0 / std::tan(angle / 4.0)}, {"deviations", cot_lemma_deviations(angle, ns)}});
    }
    r["cot"] = cot;

    json moments = json::array();
    bool failed = false;
    for (int n : ns) {
        for (int q : qs) {
            if (n <= 4 * std::abs(q)) continue;
            const MomentReport m = moment_report(n, q);
            const bool ok = m.sandwiched();
            failed = failed || !ok;
            moments.push_back(json{{"n", n},          {"q", q},         {"F", m.F},
                                   {"Ftilde", m.Ftilde}, {"lower", m.lower}, {"upper", m.upper},
                                   {"limit", m.limit},   {"sandwich", ok}});
        }
    }
    r["moments"] = moments;

    const StirlingReport st = stirling_check(ns);
    json srows = json::array();
    for (const auto& row : st.rows) srows.push_back(json{{"n", row.n}, {"ratio", row.ratio}, {"deviation", row.deviation}});
    r["stirling"] = json{{"rows", srows}, {"max_deviation", st.max_deviation}, {"last_deviation", st.last_deviation}};
    j["report"] = r;
    finish(j, out);
    return failed ? 1 : 0;
}

int cmd_aqc(const RunSpec& spec, std::ostream& out) {
    if (spec.format != Format::json) throw domain_error("aqc emits JSON only");
    const std::vector<int> ns = spec.ns.empty() ? kDefaultNs : spec.ns;
    const std::string label = spec.omegas.empty() ? std::string("pi/2") : single_omega_label(spec);
    const OmegaParam omega = parse_omega(label);

    json p;
    p["n"] = ns;
    p["omega"] = label;
    json j = envelope(spec, p);
    json rows = json::array();
    for (int n : ns) {
        const GapScan roland = gap_scan(HamiltonianFamily(HamiltonianKind::roland, n));
        const IdentityReport id = check_operator_identities(n, omega);
        json o;
        o["n"] = n;
        o["roland"] = json{{"mu_star", roland.mu_star}, {"min_gap", roland.min_gap}, {"expected_gap", std::pow(2.0, -0.5 * n)}};
        o["grover_identities"] = json{{"diffusion_residual", id.diffusion_residual}, {"oracle_residual", id.oracle_residual}};
        o["farhi"] = json{{"phi", id.phi},
                          {"fit_a", id.fit_a},
                          {"fit_b", id.fit_b},
                          {"fit_residual_g", id.fit_residual_g},
                          {"fit_residual_o", id.fit_residual_o},
                          {"mu_gap", id.mu_farhi_gap},
                          {"mu_fit", id.mu_farhi_fit},
                          {"xi_fit", id.xi_fit},
                          {"xi_from_definition", id.xi_from_definition},
                          {"xi_sign_consistent", id.xi_sign_consistent},
                          {"ratio", id.ratio}};
        rows.push_back(o);
    }
    j["report"] = json{{"rows", rows}};
    finish(j, out);
    return 0;
}

int cmd_evolve(const RunSpec& spec, std::ostream& out) {
    if (spec.format != Format::json) throw domain_error("evolve emits JSON only");
    const int n = single_n(spec);
    HamiltonianKind kind;
    if (spec.kind == "roland") kind = HamiltonianKind::roland;
    else if (spec.kind == "farhi") kind = HamiltonianKind::farhi;
    else throw domain_error("unknown Hamiltonian kind '" + spec.kind + "'");
    const HamiltonianFamily family(kind, n);
    Schedule schedule = linear_schedule();
    if (spec.schedule == "roland") schedule = roland_schedule(std::asin(std::pow(2.0, -0.5 * n)));
    else if (spec.schedule != "linear") throw domain_error("unknown schedule '" + spec.schedule + "'");
    const std::vector<double> times = spec.total_times.empty() ? std::vector<double>{1000.0} : spec.total_times;
    EvolveOptions opts;
    opts.max_step_norm = spec.max_step_norm;

    json p;
    p["n"] = n;
    p["kind"] = spec.kind;
    p["schedule"] = spec.schedule;
    p["T"] = times;
    p["checkpoints"] = spec.checkpoints;
    p["max_step_norm"] = spec.max_step_norm;
    json j = envelope(spec, p);
    json runs = json::array();
    for (double T : times) {
        std::vector<double> cps;
        for (double c : spec.checkpoints) cps.push_back(c * T);  // fractions of T
        const EvolutionTrace tr = adiabatic_evolve(family, T, schedule, cps, opts);
        json cj = json::array();
        for (const auto& c : tr.checkpoints) cj.push_back(json{{"t", c.t}, {"ground_overlap", c.ground_overlap}});
        json gj = json::array();
        for (const auto& g : tr.grover_checkpoints) gj.push_back(json{{"m", g.m}, {"t", g.t}, {"overlap", g.overlap}});
        runs.push_back(json{{"T", T},
                            {"steps", tr.steps},
                            {"max_norm_drift", tr.max_norm_drift},
                            {"checkpoints", cj},
                            {"grover_checkpoints", gj}});
    }
    j["report"] = json{{"runs", runs}};
    finish(j, out);
    return 0;
}

int cmd_cost(const RunSpec& spec, std::ostream& out) {
    if (spec.format != Format::json) throw domain_error("cost emits JSON only");
    const int n = single_n(spec);
    const std::string label = single_omega_label(spec);
    const CostReport c = cost_report(n, parse_omega(label), spec.cost);
    json p;
    p["n"] = n;
    p["omega"] = label;
    p["t_single"] = c.t_single;
    p["t_multi"] = c.t_multi;
    p["t_oracle"] = c.t_oracle;
    p["parallel"] = c.parallel;
    json j = envelope(spec, p);
    j["report"] = json{{"grover_iterations", c.grover_iterations},
                       {"circuit_iterations", c.circuit_iterations},
                       {"t_grover", c.t_grover},
                       {"t_new", c.t_new},
                       {"ratio", c.ratio},
                       {"break_even_t_multi", c.break_even_t_multi}};
    finish(j, out);
    return 0;
}

namespace {

unsigned default_threads() {
    if (const char* env = std::getenv("QSEARCH_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Flags from a JSON config file, for keys not already on the command line.
// Keys are long flag names without dashes; arrays repeat the flag and
// booleans toggle it.
std::vector<std::string> config_args(const std::string& path, const std::vector<std::string>& args) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open config file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw domain_error(std::string("malformed config file: ") + e.what());
    }
    if (!cfg.is_object()) throw domain_error("config file must hold a JSON object");
    std::vector<std::string> extra;
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
        if (present) continue;
        auto scalar = [](const json& v) {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number_integer()) return std::to_string(v.get<long long>());
            if (v.is_number()) return fmt17(v.get<double>());
            throw domain_error("unsupported config value " + v.dump());
        };
        if (value.is_boolean()) {
            if (value.get<bool>()) extra.push_back(flag);
        } else if (value.is_array()) {
            for (const auto& v : value) {
                extra.push_back(flag);
                extra.push_back(scalar(v));
            }
        } else {
            extra.push_back(flag);
            extra.push_back(scalar(value));
        }
    }
    return extra;
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const parse_error*>(&e)) return "parse_error";
    if (dynamic_cast<const verification_failure*>(&e)) return "verification_failure";
    if (dynamic_cast<const numeric_error*>(&e)) return "numeric_error";
    if (dynamic_cast<const resource_error*>(&e)) return "resource_error";
    if (dynamic_cast<const analysis_error*>(&e)) return "analysis_error";
    if (dynamic_cast<const state_error*>(&e)) return "state_error";
    if (dynamic_cast<const std::domain_error*>(&e)) return "domain_error";
    return "error";
}

}  // namespace

int cmd_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    // Pull the config file first so its values can be appended as flags.
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            try {
                const auto extra = config_args(args[i + 1], args);
                args.insert(args.end(), extra.begin(), extra.end());
            } catch (const std::exception& e) {
                err << "error: " << e.what() << '\n';
                return 2;
            }
            break;
        }
    }

    RunSpec spec;
    spec.threads = default_threads();
    std::string config_path;
    std::string format;
    std::string engine = "reduced";
    bool error_json = false;

    CLI::App app{"Quantum search with an arbitrary oracle phase: simulations and checks", "qsearch"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output,-o", spec.output, "Write to this file instead of stdout");
        sub->add_option("--config", config_path, "JSON file with default flag values");
        sub->add_flag("--error-json", error_json, "Report failures as a JSON object on stderr");
    };
    auto n_list = [&](CLI::App* sub) { sub->add_option("--n", spec.ns, "Qubit count(s)")->delimiter(','); };

    CLI::App* table = app.add_subcommand("table", "Iteration counts and error rates over an (n, omega) grid");
    common(table);
    n_list(table);
    table->add_option("--omega", spec.omegas, "Oracle phases, e.g. pi/2 2pi/3")->delimiter(',');
    table->add_flag("--grover-only", spec.grover_only, "Only the Grover column");
    table->add_flag("--grover", spec.with_grover, "Keep the Grover column when --omega is given");
    table->add_flag("--paper-format", spec.paper_format, "Iterations and error rates rounded to 2 significant figures");
    table->add_option("--threads", spec.threads, "Worker threads (default: QSEARCH_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    CLI::App* phi = app.add_subcommand("phi", "Samples of phi(omega) over (-pi, pi)");
    common(phi);
    n_list(phi);
    phi->add_option("--samples", spec.samples, "Number of omega samples");

    CLI::App* simulate = app.add_subcommand("simulate", "One search run");
    common(simulate);
    n_list(simulate);
    simulate->add_option("--omega", spec.omegas, "Oracle phase");
    simulate->add_option("--engine", engine, "reduced or full")->check(CLI::IsMember({"reduced", "full"}));
    simulate->add_option("--solutions", spec.solutions, "Number of solutions")->check(CLI::PositiveNumber);
    simulate->add_option("--j", spec.js, "Solution index (repeatable)");
    simulate->add_option("--j2", spec.j2, "Second solution index");
    simulate->add_option("--iterations", spec.iterations, "Override the iteration count")->check(CLI::NonNegativeNumber);
    simulate->add_option("--oracle", spec.oracle, "direct or kickback (full engine)")
        ->check(CLI::IsMember({"direct", "kickback"}));

    CLI::App* spectrum = app.add_subcommand("spectrum", "Eigen-decomposition of G'O'");
    common(spectrum);
    n_list(spectrum);
    spectrum->add_option("--omega", spec.omegas, "Oracle phase");

    CLI::App* lemma = app.add_subcommand("lemma", "Binomial averaging checks");
    common(lemma);
    n_list(lemma);
    lemma->add_option("--q", spec.qs, "Moment exponents")->delimiter(',');
    lemma->add_option("--r", spec.angles, "Angles for the cot check")->delimiter(',');

    CLI::App* aqc = app.add_subcommand("aqc", "Gap minimizers and operator identities");
    common(aqc);
    n_list(aqc);
    aqc->add_option("--omega", spec.omegas, "Oracle phase for the Farhi fit");

    CLI::App* evolve = app.add_subcommand("evolve", "Adiabatic evolution");
    common(evolve);
    n_list(evolve);
    evolve->add_option("--kind", spec.kind, "roland or farhi")->check(CLI::IsMember({"roland", "farhi"}));
    evolve->add_option("--schedule", spec.schedule, "roland or linear")->check(CLI::IsMember({"roland", "linear"}));
    evolve->add_option("--T", spec.total_times, "Total times")->delimiter(',');
    evolve->add_option("--checkpoints", spec.checkpoints, "Checkpoints as fractions of T")->delimiter(',');
    evolve->add_option("--max-step-norm", spec.max_step_norm, "Bound on ||H|| dt")->check(CLI::PositiveNumber);

    CLI::App* cost = app.add_subcommand("cost", "Gate-time comparison with Grover's circuit");
    common(cost);
    n_list(cost);
    cost->add_option("--omega", spec.omegas, "Oracle phase");
    cost->add_option("--t-single", spec.cost.t_single, "Seconds per single-qubit gate");
    cost->add_option("--t-multi", spec.cost.t_multi, "Seconds per multi-qubit diffusion (default n * t-single)");
    cost->add_option("--t-oracle", spec.cost.t_oracle, "Seconds per oracle call");
    cost->add_flag("--parallel", spec.cost.parallel, "Single-qubit layer runs in parallel");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        for (auto* sub : app.get_subcommands()) err << sub->help();
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    spec.command = chosen->get_name();
    spec.engine = engine == "full" ? Engine::full : Engine::reduced;
    const bool json_default = spec.command == "spectrum" || spec.command == "lemma" || spec.command == "aqc" ||
                              spec.command == "evolve" || spec.command == "cost";
    if (format.empty()) spec.format = json_default ? Format::json : Format::csv;
    else spec.format = format == "json" ? Format::json : Format::csv;

    std::ostringstream buffer;
    int code = 0;
    try {
        if (spec.command == "table") code = cmd_table(spec, buffer);
        else if (spec.command == "phi") code = cmd_phi(spec, buffer);
        else if (spec.command == "simulate") code = cmd_simulate(spec, buffer);
        else if (spec.command == "spectrum") code = cmd_spectrum(spec, buffer);
        else if (spec.command == "lemma") code = cmd_lemma(spec, buffer);
        else if (spec.command == "aqc") code = cmd_aqc(spec, buffer);
        else if (spec.command == "evolve") code = cmd_evolve(spec, buffer);
        else code = cmd_cost(spec, buffer);
    } catch (const std::exception& e) {
        if (error_json) {
            json j;
            j["command"] = spec.command;
            j["error"] = json{{"kind", error_kind(e)}, {"message", e.what()}};
            j["exit_code"] = 1;
            j["version"] = kVersion;
            err << j.dump() << '\n';
        } else {
            err << "error: " << e.what() << '\n';
        }
        return 1;
    }

    if (spec.output.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(spec.output, std::ios::binary);
        if (!file) {
            err << "error: cannot write '" << spec.output << "'\n";
            return 1;
        }
        file << buffer.str();
    }
    return code;
}

int cmd_dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cmd_dispatch(std::move(args), out, err);
}

}  // namespace qsearch::cli
