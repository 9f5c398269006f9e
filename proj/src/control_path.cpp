#include "oqctrl/control_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oqctrl/numerics.hpp"

namespace oqctrl {

namespace {

using Cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryTol = 1e-8;

Eigen::Matrix2cd rot_z(double angle) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::exp(Cplx(0.0, -0.5 * angle));
    m(1, 1) = std::exp(Cplx(0.0, 0.5 * angle));
    return m;
}

Eigen::Matrix2cd rot_y(double angle) {
    Eigen::Matrix2cd m;
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    m << Cplx(c, 0.0), Cplx(-s, 0.0), Cplx(s, 0.0), Cplx(c, 0.0);
    return m;
}

}  // namespace

// ----------------------------------- TimeGrid -------------------------------

TimeGrid TimeGrid::uniform(double t_gate, int n_t) {
    if (t_gate <= 0.0 || n_t < 2) {
        throw std::invalid_argument("TimeGrid: need t_gate > 0 and n_t >= 2");
    }
    return from_points(uniform_grid(0.0, t_gate, n_t + 1));
}

TimeGrid TimeGrid::from_points(std::vector<double> pts) {
    if (pts.size() < 2 || pts.front() != 0.0) {
        throw std::invalid_argument("TimeGrid: points must start at 0");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i] <= pts[i - 1]) {
            throw std::invalid_argument("TimeGrid: points must be strictly increasing");
        }
    }
    TimeGrid g;
    g.pts_ = std::move(pts);
    g.weights_ = trapezoid_weights(g.pts_);
    const double h0 = g.pts_[1] - g.pts_[0];
    g.uniform_ = true;
    for (std::size_t i = 1; i + 1 < g.pts_.size(); ++i) {
        if (std::abs((g.pts_[i + 1] - g.pts_[i]) - h0) > 1e-12 * g.pts_.back()) {
            g.uniform_ = false;
            break;
        }
    }
    return g;
}

double TimeGrid::step() const {
    if (!uniform_) {
        throw std::logic_error("TimeGrid::step: grid is not uniform");
    }
    return pts_[1] - pts_[0];
}

// ----------------------------------- Rules ----------------------------------

std::vector<Eigen::MatrixXcd> PathRule::unitary_gradient(const Eigen::VectorXd&, double) const {
    throw std::logic_error("PathRule: rule has no parameter gradient");
}

Eigen::MatrixXcd PathRule::exact_hamiltonian(double) const {
    throw std::logic_error("PathRule: rule has no exact Hamiltonian");
}

Eigen::Matrix2cd euler_unitary(const Eigen::Vector3d& f) {
    return rot_z(f(2)) * rot_y(f(1)) * rot_z(f(0));
}

Eigen::MatrixXcd EulerRule::unitary(const Eigen::VectorXd& f, double) const {
    if (f.size() != 3) {
        throw std::invalid_argument("EulerRule: expected 3 parameters");
    }
    return euler_unitary(Eigen::Vector3d(f(0), f(1), f(2)));
}

std::vector<Eigen::MatrixXcd> EulerRule::unitary_gradient(const Eigen::VectorXd& f,
                                                          double) const {
    if (f.size() != 3) {
        throw std::invalid_argument("EulerRule: expected 3 parameters");
    }
    const Eigen::Matrix2cd a1 = rot_z(f(0));
    const Eigen::Matrix2cd a2 = rot_y(f(1));
    const Eigen::Matrix2cd a3 = rot_z(f(2));
    Eigen::Matrix2cd mz = Eigen::Matrix2cd::Zero();
    mz(0, 0) = Cplx(0.0, -0.5);
    mz(1, 1) = Cplx(0.0, 0.5);
    Eigen::Matrix2cd my;
    my << 0.0, -0.5, 0.5, 0.0;
    std::vector<Eigen::MatrixXcd> grad(3);
    grad[0] = a3 * a2 * (mz * a1);
    grad[1] = a3 * (my * a2) * a1;
    grad[2] = (mz * a3) * a2 * a1;
    return grad;
}

GeodesicRule::GeodesicRule(const Eigen::MatrixXcd& target, double t_gate) : t_gate_(t_gate) {
    const int d = static_cast<int>(target.rows());
    if (target.cols() != d || d < 2) {
        throw std::invalid_argument("GeodesicRule: target must be square");
    }
    if ((target * target.adjoint() - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() >
        1e-10) {
        throw std::invalid_argument("GeodesicRule: target is not unitary");
    }
    // Schur form of a normal matrix is diagonal with unitary vectors.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(target);
    vectors_ = schur.matrixU();
    phases_.resize(d);
    for (int k = 0; k < d; ++k) {
        phases_(k) = std::arg(schur.matrixT()(k, k));
        if (phases_(k) <= -kPi + 1e-15) {
            phases_(k) = kPi;  // principal branch, eigenvalue -1 maps to +π
        }
    }
}

Eigen::MatrixXcd GeodesicRule::unitary(const Eigen::VectorXd&, double t) const {
    const double s = t / t_gate_;
    Eigen::VectorXcd d(phases_.size());
    for (int k = 0; k < phases_.size(); ++k) {
        d(k) = std::exp(Cplx(0.0, phases_(k) * s));
    }
    return vectors_ * d.asDiagonal() * vectors_.adjoint();
}

PiecewiseRule::PiecewiseRule(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
        throw std::invalid_argument("PiecewiseRule: no segments");
    }
    dim_ = static_cast<int>(segments_.front().hamiltonian.rows());
    double t = 0.0;
    for (const Segment& s : segments_) {
        if (std::abs(s.start - t) > 1e-12 || s.length <= 0.0) {
            throw std::invalid_argument("PiecewiseRule: segments must tile [0, t_gate]");
        }
        if (s.hamiltonian.rows() != dim_ || s.hamiltonian.cols() != dim_) {
            throw std::invalid_argument("PiecewiseRule: inconsistent dimensions");
        }
        t = s.start + s.length;
    }
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim_, dim_);
    for (const Segment& s : segments_) {
        start_unitaries_.push_back(u);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.hamiltonian);
        evecs_.push_back(es.eigenvectors());
        evals_.push_back(es.eigenvalues());
        Eigen::VectorXcd d(dim_);
        for (int k = 0; k < dim_; ++k) {
            d(k) = std::exp(Cplx(0.0, -es.eigenvalues()(k) * s.length));
        }
        u = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint() * u;
    }
    start_unitaries_.push_back(u);  // final gate at t_gate
}

int PiecewiseRule::find_segment(double t) const {
    const double t_end = segments_.back().start + segments_.back().length;
    if (t < -1e-12 || t > t_end * (1.0 + 1e-12)) {
        throw std::invalid_argument("PiecewiseRule: time outside [0, t_gate]");
    }
    int lo = 0, hi = static_cast<int>(segments_.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (segments_[static_cast<std::size_t>(mid)].start <= t) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

Eigen::MatrixXcd PiecewiseRule::unitary(const Eigen::VectorXd&, double t) const {
    const double t_end = segments_.back().start + segments_.back().length;
    if (t >= t_end) {
        return start_unitaries_.back();
    }
    const int k = find_segment(t);
    const auto& s = segments_[static_cast<std::size_t>(k)];
    const double tau = t - s.start;
    Eigen::VectorXcd d(dim_);
    for (int i = 0; i < dim_; ++i) {
        d(i) = std::exp(Cplx(0.0, -evals_[static_cast<std::size_t>(k)](i) * tau));
    }
    return evecs_[static_cast<std::size_t>(k)] * d.asDiagonal() *
           evecs_[static_cast<std::size_t>(k)].adjoint() *
           start_unitaries_[static_cast<std::size_t>(k)];
}

Eigen::MatrixXcd PiecewiseRule::exact_hamiltonian(double t) const {
    const double t_end = segments_.back().start + segments_.back().length;
    const int k = (t >= t_end) ? static_cast<int>(segments_.size()) - 1 : find_segment(t);
    return segments_[static_cast<std::size_t>(k)].hamiltonian;
}

std::optional<double> PiecewiseRule::exact_mean_square_energy() const {
    double acc = 0.0;
    for (const Segment& s : segments_) {
        acc += s.length * (s.hamiltonian * s.hamiltonian).trace().real() / dim_;
    }
    return acc;
}

// --------------------------------- ControlPath ------------------------------

ControlPath::ControlPath(GeneratorBasis basis, TimeGrid grid,
                         std::shared_ptr<const PathRule> rule, Eigen::MatrixXd f_grid,
                         Eigen::MatrixXcd target)
    : basis_(std::move(basis)),
      grid_(std::move(grid)),
      rule_(std::move(rule)),
      f_(std::move(f_grid)),
      target_(std::move(target)) {
    if (!rule_) {
        throw std::invalid_argument("ControlPath: missing rule");
    }
    const int n = grid_.n_points();
    if (rule_->param_count() > 0) {
        if (f_.rows() != rule_->param_count() || f_.cols() != n) {
            throw std::invalid_argument("ControlPath: parameter grid has wrong shape");
        }
    }
    unitaries_.reserve(static_cast<std::size_t>(n));
    eps_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd fi =
            rule_->param_count() > 0 ? Eigen::VectorXd(f_.col(i)) : Eigen::VectorXd();
        Eigen::MatrixXcd u = rule_->unitary(fi, grid_[i]);
        eps_.push_back(modulation_matrix(basis_, u));
        unitaries_.push_back(std::move(u));
    }
    const int d = basis_.dim;
    if ((unitaries_.front() - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("ControlPath: U(0) is not the identity");
    }
    if (phase_distance(unitaries_.back(), target_) > kBoundaryTol) {
        throw std::invalid_argument("ControlPath: U(t_gate) does not reach the target gate");
    }
}

ControlPath ControlPath::euler(TimeGrid grid, Eigen::MatrixXd f_grid, Eigen::MatrixXcd target) {
    return ControlPath(pauli_basis(), std::move(grid), std::make_shared<EulerRule>(),
                       std::move(f_grid), std::move(target));
}

ControlPath ControlPath::geodesic(GeneratorBasis basis, TimeGrid grid, Eigen::MatrixXcd target) {
    auto rule = std::make_shared<GeodesicRule>(target, grid.t_gate());
    return ControlPath(std::move(basis), std::move(grid), std::move(rule), Eigen::MatrixXd(),
                       std::move(target));
}

Eigen::VectorXd ControlPath::f_at(int i) const {
    if (!parametrized()) {
        throw std::logic_error("ControlPath: path is not parametrized");
    }
    return f_.col(i);
}

Eigen::MatrixXcd ControlPath::unitary_at(double t) const {
    if (!parametrized()) {
        return rule_->unitary(Eigen::VectorXd(), t);
    }
    const auto& pts = grid_.points();
    if (t <= pts.front()) {
        return rule_->unitary(f_.col(0), t);
    }
    if (t >= pts.back()) {
        return rule_->unitary(f_.col(grid_.n_points() - 1), t);
    }
    const auto it = std::upper_bound(pts.begin(), pts.end(), t);
    const int hi = static_cast<int>(it - pts.begin());
    const int lo = hi - 1;
    const double w = (t - pts[static_cast<std::size_t>(lo)]) /
                     (pts[static_cast<std::size_t>(hi)] - pts[static_cast<std::size_t>(lo)]);
    const Eigen::VectorXd f = (1.0 - w) * f_.col(lo) + w * f_.col(hi);
    return rule_->unitary(f, t);
}

Eigen::MatrixXd ControlPath::modulation_at(double t) const {
    return modulation_matrix(basis_, unitary_at(t));
}

ControlPath ControlPath::with_parameters(Eigen::MatrixXd f_grid) const {
    return ControlPath(basis_, grid_, rule_, std::move(f_grid), target_);
}

// --------------------------------- Operations -------------------------------

Eigen::MatrixXd modulation_matrix(const GeneratorBasis& basis, const Eigen::MatrixXcd& u) {
    const int n = basis.size();
    Eigen::MatrixXd eps(n, n);
    std::vector<Eigen::MatrixXcd> rotated(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        rotated[static_cast<std::size_t>(j)] =
            u.adjoint() * basis.generators[static_cast<std::size_t>(j)] * u;
    }
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            eps(j, k) = 0.5 * (rotated[static_cast<std::size_t>(j)] *
                               basis.generators[static_cast<std::size_t>(k)])
                                  .trace()
                                  .real();
        }
    }
    return eps;
}

HamiltonianSample hamiltonian_extract(const ControlPath& path, int i) {
    const int n = path.n_points();
    if (i < 0 || i >= n) {
        throw std::invalid_argument("hamiltonian_extract: index out of range");
    }
    Eigen::MatrixXcd h;
    if (path.rule().has_exact_hamiltonian()) {
        h = path.rule().exact_hamiltonian(path.grid()[i]);
    } else {
        const auto& pts = path.grid().points();
        Eigen::MatrixXcd du;
        if (i == 0) {
            du = (path.unitary(1) - path.unitary(0)) / (pts[1] - pts[0]);
        } else if (i == n - 1) {
            du = (path.unitary(n - 1) - path.unitary(n - 2)) /
                 (pts[static_cast<std::size_t>(n - 1)] - pts[static_cast<std::size_t>(n - 2)]);
        } else {
            const double hm = pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(i - 1)];
            const double hp = pts[static_cast<std::size_t>(i + 1)] - pts[static_cast<std::size_t>(i)];
            // three-point first derivative on a possibly nonuniform grid
            du = (hm * hm * path.unitary(i + 1) - hp * hp * path.unitary(i - 1) +
                  (hp * hp - hm * hm) * path.unitary(i)) /
                 (hm * hp * (hm + hp));
        }
        const Eigen::MatrixXcd k = Cplx(0.0, 1.0) * du * path.unitary(i).adjoint();
        const double scale = k.cwiseAbs().maxCoeff() + 1.0 / path.t_gate();
        if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 0.2 * scale) {
            throw std::runtime_error(
                "hamiltonian_extract: derivative fails the unitary-tangency check; grid too coarse");
        }
        h = 0.5 * (k + k.adjoint());
    }
    HamiltonianSample s;
    s.h = h;
    s.omega.resize(path.basis().size());
    for (int j = 0; j < path.basis().size(); ++j) {
        s.omega(j) = trace_coefficient(path.basis(), h, j);
    }
    return s;
}

double energy_es(const ControlPath& path) {
    if (const auto exact = path.rule().exact_mean_square_energy()) {
        return *exact;
    }
    const int n = path.n_points();
    const double d = static_cast<double>(path.basis().dim);
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Eigen::MatrixXcd h = hamiltonian_extract(path, i).h;
        vals[static_cast<std::size_t>(i)] = (h * h).trace().real() / d;
    }
    return trapz_values(path.grid().points(), vals);
}

double energy_e(const ControlPath& path) {
    if (!path.parametrized()) {
        throw std::logic_error("energy_e: path is not parametrized");
    }
    const int n = path.n_points();
    const auto& pts = path.grid().points();
    const Eigen::MatrixXd& f = path.f();
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd df;
        if (i == 0) {
            df = (f.col(1) - f.col(0)) / (pts[1] - pts[0]);
        } else if (i == n - 1) {
            df = (f.col(n - 1) - f.col(n - 2)) /
                 (pts[static_cast<std::size_t>(n - 1)] - pts[static_cast<std::size_t>(n - 2)]);
        } else {
            df = (f.col(i + 1) - f.col(i - 1)) /
                 (pts[static_cast<std::size_t>(i + 1)] - pts[static_cast<std::size_t>(i - 1)]);
        }
        vals[static_cast<std::size_t>(i)] = df.squaredNorm();
    }
    return trapz_values(pts, vals);
}

// ------------------------------ Euler extraction ----------------------------

namespace {

// ZYZ angles of an SU(2) matrix; sum/diff split resolved toward `prev`.
Eigen::Vector3d euler_angles_su2(const Eigen::Matrix2cd& u, const Eigen::Vector3d* prev) {
    const double c = std::abs(u(0, 0));
    const double s = std::abs(u(1, 0));
    const double f2 = 2.0 * std::atan2(s, c);
    double sum = 0.0, diff = 0.0;
    const double tiny = 1e-9;
    if (c > tiny && s > tiny) {
        sum = -2.0 * std::arg(u(0, 0));
        diff = 2.0 * std::arg(u(1, 0));
    } else if (s <= tiny) {
        sum = -2.0 * std::arg(u(0, 0));
        diff = prev ? ((*prev)(2) - (*prev)(0)) : 0.0;
    } else {
        diff = 2.0 * std::arg(u(1, 0));
        sum = prev ? ((*prev)(2) + (*prev)(0)) : 0.0;
    }
    auto unwrap = [](double value, double reference) {
        while (value - reference > kPi) value -= 2.0 * kPi;
        while (value - reference < -kPi) value += 2.0 * kPi;
        return value;
    };
    if (prev) {
        sum = unwrap(sum, (*prev)(2) + (*prev)(0));
        diff = unwrap(diff, (*prev)(2) - (*prev)(0));
    }
    Eigen::Vector3d f;
    f(1) = f2;
    f(2) = 0.5 * (sum + diff);
    f(0) = 0.5 * (sum - diff);
    return f;
}

}  // namespace

Eigen::MatrixXd geodesic_init(const Eigen::MatrixXcd& target, const TimeGrid& grid) {
    if (target.rows() != 2 || target.cols() != 2) {
        throw std::invalid_argument("geodesic_init: Euler chart requires a 2x2 target");
    }
    GeodesicRule rule(target, grid.t_gate());
    const int n = grid.n_points();
    Eigen::MatrixXd f(3, n);
    Eigen::Vector3d prev = Eigen::Vector3d::Zero();
    // total eigenphase fixes the smooth det-normalization branch
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(target);
    double phase_sum = 0.0;
    for (int k = 0; k < 2; ++k) {
        double p = std::arg(schur.matrixT()(k, k));
        if (p <= -kPi + 1e-15) p = kPi;
        phase_sum += p;
    }
    for (int i = 0; i < n; ++i) {
        const double s = grid[i] / grid.t_gate();
        Eigen::Matrix2cd u = rule.unitary(Eigen::VectorXd(), grid[i]);
        u *= std::exp(Cplx(0.0, -0.5 * phase_sum * s));  // project to SU(2), smooth branch
        const Eigen::Vector3d fi = euler_angles_su2(u, i == 0 ? nullptr : &prev);
        f.col(i) = fi;
        prev = fi;
    }
    // verify the chart reproduces the interpolation
    for (int i = 0; i < n; ++i) {
        const Eigen::Matrix2cd u = euler_unitary(f.col(i));
        const Eigen::Matrix2cd v = rule.unitary(Eigen::VectorXd(), grid[i]);
        if (phase_distance(u, v) > 1e-8) {
            throw std::runtime_error("geodesic_init: Euler extraction failed to track the path");
        }
    }
    return f;
}

Eigen::MatrixXd regularize_chart(Eigen::MatrixXd f_grid, double eps) {
    const int n = static_cast<int>(f_grid.cols());
    for (int i = 1; i + 1 < n; ++i) {
        f_grid(1, i) += eps * std::sin(kPi * static_cast<double>(i) / (n - 1));
    }
    return f_grid;
}

// ----------------------------- Modulation spectrum --------------------------

ModulationSpectrum modulation_spectrum(const ControlPath& path,
                                       const std::vector<double>& omega_grid) {
    if (omega_grid.size() < 2) {
        throw std::invalid_argument("modulation_spectrum: need at least 2 frequencies");
    }
    const int n = path.n_points();
    const int b = path.basis().size();
    const int nw = static_cast<int>(omega_grid.size());
    const auto& w = path.grid().weights();
    const auto& pts = path.grid().points();

    // flatten ε grid to (n × b²) for one GEMM against the phase matrix
    Eigen::MatrixXcd eps_flat(n, b * b);
    for (int i = 0; i < n; ++i) {
        const Eigen::MatrixXd& e = path.modulation(i);
        for (int j = 0; j < b; ++j) {
            for (int k = 0; k < b; ++k) {
                eps_flat(i, j * b + k) = w[static_cast<std::size_t>(i)] * e(j, k);
            }
        }
    }
    Eigen::MatrixXcd phases(nw, n);
    for (int a = 0; a < nw; ++a) {
        for (int i = 0; i < n; ++i) {
            phases(a, i) =
                std::exp(Cplx(0.0, omega_grid[static_cast<std::size_t>(a)] * pts[static_cast<std::size_t>(i)]));
        }
    }
    const Eigen::MatrixXcd flat = phases * eps_flat;  // nw × b²

    ModulationSpectrum ms;
    ms.omega = omega_grid;
    ms.t_gate = path.t_gate();
    ms.basis_size = b;
    ms.eps_t.reserve(static_cast<std::size_t>(nw));
    ms.f_t.reserve(static_cast<std::size_t>(nw));
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    for (int a = 0; a < nw; ++a) {
        Eigen::MatrixXcd et(b, b);
        for (int j = 0; j < b; ++j) {
            for (int k = 0; k < b; ++k) {
                et(j, k) = norm * flat(a, j * b + k);
            }
        }
        Eigen::MatrixXcd ft = et * et.adjoint() / ms.t_gate;
        ms.eps_t.push_back(std::move(et));
        ms.f_t.push_back(std::move(ft));
    }
    return ms;
}

double ModulationSpectrum::parseval_fraction() const {
    std::vector<double> tr(omega.size());
    for (std::size_t a = 0; a < omega.size(); ++a) {
        tr[a] = f_t[a].trace().real();
    }
    const double total = trapz_values(omega, tr);
    return total / (0.5 * static_cast<double>(basis_size));
}

std::vector<double> default_omega_grid(double t_gate, int n, double span) {
    return uniform_grid(0.0, span / t_gate, n);
}

}  // namespace oqctrl
