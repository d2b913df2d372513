#pragma once

// Command-line front end. Every command writes to an ostream so the whole
// surface can be driven in-process by tests as well as from tools/qsearch.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsearch/errors.hpp"
#include "qsearch/phase_solver.hpp"

namespace qsearch::cli {

inline constexpr const char* kVersion = "0.1.0";

class parse_error : public domain_error {
public:
    parse_error(const std::string& what, std::size_t position)
        : domain_error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Grammar: FLOAT | FLOAT "pi" | "pi" | [FLOAT] "pi/" INT, optional leading sign.
// No range check; used for lemma angles that may exceed pi.
double parse_angle(std::string_view text);

// parse_angle plus the omega range (-pi, pi] and omega != 0. An integer
// multiple of a pi fraction keeps its rational form.
OmegaParam parse_omega(std::string_view text);

enum class Format { csv, json };
enum class Engine { reduced, full };

struct CostModel {
    double t_single = 1.0;
    std::optional<double> t_multi;  // defaults to n * t_single
    double t_oracle = 1.0;
    bool parallel = false;
};

struct CostReport {
    int n = 0;
    double omega = 0.0;
    std::int64_t grover_iterations = 0;
    std::int64_t circuit_iterations = 0;
    double t_single = 0.0;
    double t_multi = 0.0;
    double t_oracle = 0.0;
    bool parallel = false;
    double t_grover = 0.0;
    double t_new = 0.0;
    double ratio = 0.0;  // t_new / t_grover
    double break_even_t_multi = 0.0;
};

CostReport cost_report(int n, const OmegaParam& omega, const CostModel& model);

struct RunSpec {
    std::string command;
    std::vector<int> ns;
    std::vector<std::string> omegas;  // verbatim labels
    Engine engine = Engine::reduced;
    std::vector<std::uint64_t> js;
    std::optional<std::uint64_t> j2;
    int solutions = 1;
    std::optional<std::int64_t> iterations;
    std::string oracle = "direct";
    Format format = Format::csv;
    std::string output;  // empty: stdout
    unsigned threads = 1;

    bool paper_format = false;
    bool grover_only = false;
    bool with_grover = false;
    int samples = 512;

    std::vector<int> qs;
    std::vector<std::string> angles;

    std::string kind = "roland";
    std::string schedule = "roland";
    std::vector<double> total_times;
    std::vector<double> checkpoints;
    double max_step_norm = 0.05;

    CostModel cost;
};

// Each returns the process exit code; output goes to `out`.
int cmd_table(const RunSpec& spec, std::ostream& out);
int cmd_phi(const RunSpec& spec, std::ostream& out);
int cmd_simulate(const RunSpec& spec, std::ostream& out);
int cmd_spectrum(const RunSpec& spec, std::ostream& out);
int cmd_lemma(const RunSpec& spec, std::ostream& out);
int cmd_aqc(const RunSpec& spec, std::ostream& out);
int cmd_evolve(const RunSpec& spec, std::ostream& out);
int cmd_cost(const RunSpec& spec, std::ostream& out);

// 0 on success, 1 on numeric/domain failures, 2 on usage errors.
int cmd_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);
int cmd_dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qsearch::cli
