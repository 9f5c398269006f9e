// generators.hpp — Trace-orthogonal Hermitian generator bases and adjoint machinery

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oqctrl {

// Ordered basis {S_j} of d²−1 Hermitian traceless d×d matrices with
// Tr(S_j S_k) = 2 δ_jk. Immutable after construction.
struct GeneratorBasis {
    int dim{0};
    std::vector<Eigen::MatrixXcd> generators;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(generators.size()); }
};

// Pauli matrices in the order x, y, z.
GeneratorBasis pauli_basis();

// The eight standard Gell-Mann matrices. Indices 1..3 act as Pauli matrices
// on the upper 2x2 block, index 6 couples levels 2 and 3, index 8 is
// diag(1,1,-2)/sqrt(3).
GeneratorBasis gell_mann_basis();

// Dispatch: Pauli (d=2), Gell-Mann (d=3), generalized Gell-Mann construction
// (symmetric, antisymmetric, diagonal families, in that order) for larger d.
GeneratorBasis generator_basis(int d);

// Expansion coefficient c_j = ½ Tr(S_j A). Together with Tr(A)/d these
// reconstruct A = Σ_j c_j S_j + (Tr A / d) I.
double trace_coefficient(const GeneratorBasis& basis, const Eigen::MatrixXcd& a, int j);

// Adjoint-representation generators, real antisymmetric, computed from
// (M_j)_ik = Tr([S_i, S_j] S_k) / (4i).
std::vector<Eigen::MatrixXd> so_adjoint_generators(const GeneratorBasis& basis);

}  // namespace oqctrl
