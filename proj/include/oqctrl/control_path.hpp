// control_path.hpp — Parametrized unitary trajectories, modulation matrices,
// control-Hamiltonian extraction, and the two energy functionals
//
// A path stores U(t₁) on a time grid together with the rule that produced it:
// either an Euler-angle chart (qubit), a geodesic interpolation of the target,
// or a piecewise-constant-Hamiltonian composition (pulse sequences). The
// modulation matrix ε_jk(t₁) = ½ Tr[U†(t₁) S_j U(t₁) S_k] is cached per grid
// point; it is real orthogonal with unit determinant.

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "oqctrl/generators.hpp"

namespace oqctrl {

class TimeGrid {
public:
    TimeGrid() = default;

    static TimeGrid uniform(double t_gate, int n_t);
    static TimeGrid from_points(std::vector<double> pts);

    int n_points() const { return static_cast<int>(pts_.size()); }
    double t_gate() const { return pts_.empty() ? 0.0 : pts_.back(); }
    double operator[](int i) const { return pts_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& points() const { return pts_; }
    const std::vector<double>& weights() const { return weights_; }
    bool is_uniform() const { return uniform_; }
    double step() const;  // throws unless uniform

private:
    std::vector<double> pts_;
    std::vector<double> weights_;
    bool uniform_{false};
};

// Rule mapping (parameters, time) to a unitary. Implementations are pure.
class PathRule {
public:
    virtual ~PathRule() = default;
    virtual int param_count() const { return 0; }
    virtual Eigen::MatrixXcd unitary(const Eigen::VectorXd& f, double t) const = 0;
    // ∂U/∂f_l, only for parametrized rules.
    virtual std::vector<Eigen::MatrixXcd> unitary_gradient(const Eigen::VectorXd& f,
                                                           double t) const;
    virtual bool has_exact_hamiltonian() const { return false; }
    virtual Eigen::MatrixXcd exact_hamiltonian(double t) const;
    // Exact ∫ Tr[H²]/d dt for rules with piecewise-constant H.
    virtual std::optional<double> exact_mean_square_energy() const { return std::nullopt; }
};

// Euler chart U = exp(-i f₃σ₃/2) exp(-i f₂σ₂/2) exp(-i f₁σ₃/2).
Eigen::Matrix2cd euler_unitary(const Eigen::Vector3d& f);

class EulerRule final : public PathRule {
public:
    int param_count() const override { return 3; }
    Eigen::MatrixXcd unitary(const Eigen::VectorXd& f, double t) const override;
    std::vector<Eigen::MatrixXcd> unitary_gradient(const Eigen::VectorXd& f,
                                                   double t) const override;
};

// U(t₁) = V exp(i diag(θ) t₁/t_gate) V†, the principal fractional power of the
// target. Eigenphases are taken in (-π, π]; an eigenvalue at exactly -1 maps
// to +π.
class GeodesicRule final : public PathRule {
public:
    GeodesicRule(const Eigen::MatrixXcd& target, double t_gate);
    Eigen::MatrixXcd unitary(const Eigen::VectorXd& f, double t) const override;

private:
    Eigen::MatrixXcd vectors_;
    Eigen::VectorXd phases_;
    double t_gate_;
};

// Piecewise-constant Hamiltonian: segment k covers [start_k, start_k + len_k)
// with constant H_k; U(t) = exp(-i H_k (t - start_k)) U(start_k).
class PiecewiseRule final : public PathRule {
public:
    struct Segment {
        double start{0.0};
        double length{0.0};
        Eigen::MatrixXcd hamiltonian;
    };

    explicit PiecewiseRule(std::vector<Segment> segments);

    Eigen::MatrixXcd unitary(const Eigen::VectorXd& f, double t) const override;
    bool has_exact_hamiltonian() const override { return true; }
    Eigen::MatrixXcd exact_hamiltonian(double t) const override;
    std::optional<double> exact_mean_square_energy() const override;
    const std::vector<Segment>& segments() const { return segments_; }

private:
    int find_segment(double t) const;

    std::vector<Segment> segments_;
    std::vector<Eigen::MatrixXcd> start_unitaries_;
    // cached eigendecompositions of the segment Hamiltonians
    std::vector<Eigen::MatrixXcd> evecs_;
    std::vector<Eigen::VectorXd> evals_;
    int dim_{0};
};

class ControlPath {
public:
    ControlPath(GeneratorBasis basis, TimeGrid grid, std::shared_ptr<const PathRule> rule,
                Eigen::MatrixXd f_grid, Eigen::MatrixXcd target);

    // Qubit path from an Euler-angle grid f (3 × n_points).
    static ControlPath euler(TimeGrid grid, Eigen::MatrixXd f_grid, Eigen::MatrixXcd target);

    // Non-parametric geodesic path for any dimension.
    static ControlPath geodesic(GeneratorBasis basis, TimeGrid grid, Eigen::MatrixXcd target);

    const GeneratorBasis& basis() const { return basis_; }
    const TimeGrid& grid() const { return grid_; }
    double t_gate() const { return grid_.t_gate(); }
    int n_points() const { return grid_.n_points(); }
    const Eigen::MatrixXcd& target() const { return target_; }
    const PathRule& rule() const { return *rule_; }
    std::shared_ptr<const PathRule> rule_ptr() const { return rule_; }

    bool parametrized() const { return rule_->param_count() > 0; }
    const Eigen::MatrixXd& f() const { return f_; }
    Eigen::VectorXd f_at(int i) const;

    const Eigen::MatrixXcd& unitary(int i) const { return unitaries_[static_cast<std::size_t>(i)]; }
    const Eigen::MatrixXd& modulation(int i) const { return eps_[static_cast<std::size_t>(i)]; }

    // Rule evaluation at arbitrary time; parametrized rules interpolate f linearly.
    Eigen::MatrixXcd unitary_at(double t) const;
    Eigen::MatrixXd modulation_at(double t) const;

    // Same rule and boundary data with a replacement parameter grid.
    ControlPath with_parameters(Eigen::MatrixXd f_grid) const;

private:
    GeneratorBasis basis_;
    TimeGrid grid_;
    std::shared_ptr<const PathRule> rule_;
    Eigen::MatrixXd f_;  // n_p × n_points (0×0 when non-parametric)
    Eigen::MatrixXcd target_;
    std::vector<Eigen::MatrixXcd> unitaries_;
    std::vector<Eigen::MatrixXd> eps_;
};

// ε_jk = ½ Tr[U† S_j U S_k] for an explicit unitary.
Eigen::MatrixXd modulation_matrix(const GeneratorBasis& basis, const Eigen::MatrixXcd& u);

struct HamiltonianSample {
    Eigen::MatrixXcd h;      // i U̇ U†, symmetrized
    Eigen::VectorXd omega;   // ω_j = ½ Tr[S_j H]
};

// Control Hamiltonian at grid point i. Uses the rule's exact form when
// available, otherwise finite differences of the cached unitaries; throws
// std::runtime_error when the tangency check i U̇ U† ≈ Hermitian fails.
HamiltonianSample hamiltonian_extract(const ControlPath& path, int i);

// E_S = ∫ Tr[H²(t₁)]/d dt₁ (trapezoid; exact per segment for piecewise rules).
double energy_es(const ControlPath& path);

// E = ∫ |ḟ(t₁)|² dt₁ with central-difference derivatives.
double energy_e(const ControlPath& path);

// Euler-angle grid reproducing the principal fractional power target^(t₁/t).
Eigen::MatrixXd geodesic_init(const Eigen::MatrixXcd& target, const TimeGrid& grid);

// Nudges interior f₂ values away from the chart degeneracy at f₂ = 0 (mod π).
Eigen::MatrixXd regularize_chart(Eigen::MatrixXd f_grid, double eps = 1e-6);

struct ModulationSpectrum {
    std::vector<double> omega;
    std::vector<Eigen::MatrixXcd> eps_t;  // (1/√2π) ∫₀ᵗ e^{iωτ} ε(τ) dτ
    std::vector<Eigen::MatrixXcd> f_t;    // ε_t ε_t† / t, Hermitian PSD
    double t_gate{0.0};
    int basis_size{0};

    // ∫ Tr F_t dω over the stored grid relative to (d²−1)/2; close to one for
    // a nonnegative grid wide enough to hold the modulation spectrum.
    double parseval_fraction() const;
};

ModulationSpectrum modulation_spectrum(const ControlPath& path,
                                       const std::vector<double>& omega_grid);

// Default modulation-spectrum grid: [0, span/t_gate] with n points.
std::vector<double> default_omega_grid(double t_gate, int n = 4096, double span = 100.0);

}  // namespace oqctrl
