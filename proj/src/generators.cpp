#include "oqctrl/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace oqctrl {

namespace {

using Cplx = std::complex<double>;

Eigen::MatrixXcd zero_matrix(int d) {
    return Eigen::MatrixXcd::Zero(d, d);
}

}  // namespace

GeneratorBasis pauli_basis() {
    GeneratorBasis basis;
    basis.dim = 2;
    Eigen::MatrixXcd sx = zero_matrix(2), sy = zero_matrix(2), sz = zero_matrix(2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    sy(0, 1) = Cplx(0.0, -1.0);
    sy(1, 0) = Cplx(0.0, 1.0);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    basis.generators = {sx, sy, sz};
    basis.labels = {"x", "y", "z"};
    return basis;
}

GeneratorBasis gell_mann_basis() {
    GeneratorBasis basis;
    basis.dim = 3;
    std::vector<Eigen::MatrixXcd> g(8, zero_matrix(3));
    g[0](0, 1) = 1.0;
    g[0](1, 0) = 1.0;
    g[1](0, 1) = Cplx(0.0, -1.0);
    g[1](1, 0) = Cplx(0.0, 1.0);
    g[2](0, 0) = 1.0;
    g[2](1, 1) = -1.0;
    g[3](0, 2) = 1.0;
    g[3](2, 0) = 1.0;
    g[4](0, 2) = Cplx(0.0, -1.0);
    g[4](2, 0) = Cplx(0.0, 1.0);
    g[5](1, 2) = 1.0;
    g[5](2, 1) = 1.0;
    g[6](1, 2) = Cplx(0.0, -1.0);
    g[6](2, 1) = Cplx(0.0, 1.0);
    const double s3 = 1.0 / std::sqrt(3.0);
    g[7](0, 0) = s3;
    g[7](1, 1) = s3;
    g[7](2, 2) = -2.0 * s3;
    basis.generators = std::move(g);
    basis.labels = {"1", "2", "3", "4", "5", "6", "7", "8"};
    return basis;
}

GeneratorBasis generator_basis(int d) {
    if (d < 2) {
        throw std::invalid_argument("generator_basis: dimension must be at least 2");
    }
    if (d == 2) {
        return pauli_basis();
    }
    if (d == 3) {
        return gell_mann_basis();
    }
    GeneratorBasis basis;
    basis.dim = d;
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Eigen::MatrixXcd m = zero_matrix(d);
            m(j, k) = 1.0;
            m(k, j) = 1.0;
            basis.generators.push_back(m);
            basis.labels.push_back("s" + std::to_string(j + 1) + std::to_string(k + 1));
        }
    }
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Eigen::MatrixXcd m = zero_matrix(d);
            m(j, k) = Cplx(0.0, -1.0);
            m(k, j) = Cplx(0.0, 1.0);
            basis.generators.push_back(m);
            basis.labels.push_back("a" + std::to_string(j + 1) + std::to_string(k + 1));
        }
    }
    for (int l = 1; l < d; ++l) {
        Eigen::MatrixXcd m = zero_matrix(d);
        const double norm = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1.0)));
        for (int j = 0; j < l; ++j) {
            m(j, j) = norm;
        }
        m(l, l) = -norm * static_cast<double>(l);
        basis.generators.push_back(m);
        basis.labels.push_back("d" + std::to_string(l));
    }
    return basis;
}

double trace_coefficient(const GeneratorBasis& basis, const Eigen::MatrixXcd& a, int j) {
    if (a.rows() != basis.dim || a.cols() != basis.dim) {
        throw std::invalid_argument("trace_coefficient: operator dimension does not match basis");
    }
    if (j < 0 || j >= basis.size()) {
        throw std::invalid_argument("trace_coefficient: generator index out of range");
    }
    return 0.5 * (basis.generators[static_cast<std::size_t>(j)] * a).trace().real();
}

std::vector<Eigen::MatrixXd> so_adjoint_generators(const GeneratorBasis& basis) {
    const int n = basis.size();
    std::vector<Eigen::MatrixXd> adj(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
    const Cplx inv4i = 1.0 / Cplx(0.0, 4.0);
    for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXcd& sj = basis.generators[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
            const Eigen::MatrixXcd& si = basis.generators[static_cast<std::size_t>(i)];
            const Eigen::MatrixXcd comm = si * sj - sj * si;
            for (int k = 0; k < n; ++k) {
                const Cplx val = inv4i * (comm * basis.generators[static_cast<std::size_t>(k)]).trace();
                adj[static_cast<std::size_t>(j)](i, k) = val.real();
            }
        }
    }
    return adj;
}

}  // namespace oqctrl
