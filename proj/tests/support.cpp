#include "support.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

namespace qsearch::testing {

double binomial_oracle(int n, int s) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(s + 1.0) - std::lgamma(n - s + 1.0) - n * std::log(2.0));
}

RealMatrix twisted_dicke_basis(int n, std::uint64_t j) {
    const std::size_t dim = std::size_t{1} << n;
    RealMatrix v = RealMatrix::Zero(static_cast<Eigen::Index>(dim), n + 1);
    for (std::uint64_t m = 0; m < dim; ++m) v(static_cast<Eigen::Index>(m), std::popcount(m ^ j)) = 1.0;
    for (int s = 0; s <= n; ++s) v.col(s).normalize();
    return v;
}

ComplexMatrix dense_separable(int n, double phi) {
    ComplexMatrix one(2, 2);
    one << std::cos(phi / 2), cplx(0, std::sin(phi / 2)), cplx(0, std::sin(phi / 2)), std::cos(phi / 2);
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int a = 0; a < n; ++a) {
        ComplexMatrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < 2; ++r)
            for (Eigen::Index c = 0; c < 2; ++c) next.block(r * out.rows(), c * out.cols(), out.rows(), out.cols()) = one(r, c) * out;
        out = std::move(next);
    }
    return out;
}

ComplexMatrix dense_phase_oracle(int n, const std::vector<std::uint64_t>& js, double omega) {
    ComplexMatrix o = ComplexMatrix::Identity(1 << n, 1 << n);
    for (auto j : js) o(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = std::polar(1.0, omega);
    return o;
}

ComplexVector dense_uniform(int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    return ComplexVector::Constant(dim, std::pow(2.0, -0.5 * n));
}

ComplexMatrix dense_grover_diffusion(int n) {
    const ComplexVector u = dense_uniform(n);
    return ComplexMatrix::Identity(u.size(), u.size()) - 2.0 * u * u.adjoint();
}

CommandResult run_command(const std::string& cmd) {
    CommandResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for " + cmd);
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace qsearch::testing
