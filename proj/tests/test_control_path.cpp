#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "oqctrl/control_path.hpp"
#include "oqctrl/numerics.hpp"

using namespace oqctrl;
using Cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix2cd mat_exp_2x2(const Eigen::Matrix2cd& h, double angle) {
    // exp(-i angle h) for Hermitian h via eigendecomposition
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    Eigen::Vector2cd d;
    for (int k = 0; k < 2; ++k) {
        d(k) = std::exp(Cplx(0.0, -angle * es.eigenvalues()(k)));
    }
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXd smooth_test_path(const TimeGrid& grid) {
    Eigen::MatrixXd f(3, grid.n_points());
    for (int i = 0; i < grid.n_points(); ++i) {
        const double s = grid[i] / grid.t_gate();
        f(0, i) = 0.4 * std::sin(kPi * s);
        f(1, i) = kPi * s + 0.3 * std::sin(2.0 * kPi * s);
        f(2, i) = 0.5 * (1.0 - std::cos(kPi * s));
    }
    return f;
}

}  // namespace

TEST_CASE("euler chart reproduces the product of axis exponentials") {
    CHECK((euler_unitary({0.0, 0.0, 0.0}) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <
          1e-15);

    Eigen::Matrix2cd half_turn_y;
    half_turn_y << 0.0, -1.0, 1.0, 0.0;
    CHECK((euler_unitary({0.0, kPi, 0.0}) - half_turn_y).cwiseAbs().maxCoeff() < 1e-14);

    const auto pauli = pauli_basis();
    const Eigen::Matrix2cd oracle = mat_exp_2x2(pauli.generators[2], 0.25 * kPi) *
                                    mat_exp_2x2(pauli.generators[1], 0.25 * kPi) *
                                    mat_exp_2x2(pauli.generators[2], 0.25 * kPi);
    CHECK((euler_unitary({0.5 * kPi, 0.5 * kPi, 0.5 * kPi}) - oracle).cwiseAbs().maxCoeff() <
          1e-13);
}

TEST_CASE("modulation matrix is the adjoint rotation") {
    const auto basis = pauli_basis();
    CHECK((modulation_matrix(basis, Eigen::Matrix2cd::Identity()) -
           Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    // z-axis exponential rotates the (x, y) block and fixes z
    const double theta = 0.7;
    const Eigen::MatrixXd eps = modulation_matrix(basis, euler_unitary({theta, 0.0, 0.0}));
    Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(3, 3);
    expected(0, 0) = std::cos(theta);
    expected(0, 1) = -std::sin(theta);
    expected(1, 0) = std::sin(theta);
    expected(1, 1) = std::cos(theta);
    CHECK((eps - expected).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::MatrixXd e =
            modulation_matrix(basis, euler_unitary({angle(rng), angle(rng), angle(rng)}));
        CHECK((e * e.transpose() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(e.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("constructed paths enforce boundary conditions") {
    const auto grid = TimeGrid::uniform(1.0, 64);
    const Eigen::Matrix2cd target = euler_unitary({0.0, kPi, 0.0});
    auto f = geodesic_init(target, grid);
    const auto path = ControlPath::euler(grid, f, target);
    CHECK(phase_distance(path.unitary(path.n_points() - 1), target) < 1e-9);

    // wrong declared target is rejected
    CHECK_THROWS_AS(ControlPath::euler(grid, f, Eigen::Matrix2cd::Identity()),
                    std::invalid_argument);
}

TEST_CASE("hamiltonian extraction recovers analytic forms") {
    const auto grid = TimeGrid::uniform(1.0, 512);
    const double wbar = 1.3;

    SUBCASE("linear z ramp gives a constant level splitting") {
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3, grid.n_points());
        for (int i = 0; i < grid.n_points(); ++i) {
            f(2, i) = wbar * grid[i];
        }
        const auto path = ControlPath::euler(grid, f, euler_unitary({0.0, 0.0, wbar}));
        for (int i : {0, 100, 256, 511}) {
            const auto s = hamiltonian_extract(path, i);
            CHECK((s.h - 0.5 * wbar * pauli_basis().generators[2]).cwiseAbs().maxCoeff() < 1e-4);
            CHECK(s.omega(2) == doctest::Approx(0.5 * wbar).epsilon(1e-4));
            CHECK(std::abs(s.omega(0)) < 1e-8);
        }
    }

    SUBCASE("constant parameters give zero Hamiltonian") {
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3, grid.n_points());
        const auto path = ControlPath::euler(grid, f, Eigen::Matrix2cd::Identity());
        const auto s = hamiltonian_extract(path, 33);
        CHECK(s.h.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(energy_es(path) == doctest::Approx(0.0));
    }

    SUBCASE("extraction is hermitian on a generic smooth path") {
        const auto f = smooth_test_path(grid);
        const auto path =
            ControlPath::euler(grid, f, euler_unitary(f.col(grid.n_points() - 1)));
        for (int i : {0, 17, 200, 511}) {
            const auto s = hamiltonian_extract(path, i);
            CHECK((s.h - s.h.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
        }
    }

    SUBCASE("wild oscillations on a coarse grid fail the tangency check") {
        const auto coarse = TimeGrid::uniform(1.0, 8);
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3, coarse.n_points());
        for (int i = 0; i < coarse.n_points(); ++i) {
            f(1, i) = kPi * std::sin(7.3 * kPi * coarse[i]);
        }
        const auto path = ControlPath::euler(coarse, f, euler_unitary(f.col(8)));
        CHECK_THROWS_AS(hamiltonian_extract(path, 4), std::runtime_error);
    }
}

TEST_CASE("energy functionals") {
    SUBCASE("E of a linear ramp is |v|² t") {
        const auto grid = TimeGrid::uniform(2.0, 128);
        Eigen::MatrixXd f(3, grid.n_points());
        const Eigen::Vector3d v(0.3, 0.2, -0.5);
        for (int i = 0; i < grid.n_points(); ++i) {
            f.col(i) = v * grid[i];
        }
        const auto path = ControlPath::euler(grid, f, euler_unitary(f.col(grid.n_points() - 1)));
        CHECK(energy_e(path) == doctest::Approx(v.squaredNorm() * 2.0).epsilon(1e-12));
        const auto constant = ControlPath::euler(grid, Eigen::MatrixXd::Zero(3, grid.n_points()),
                                                 Eigen::Matrix2cd::Identity());
        CHECK(energy_e(constant) == doctest::Approx(0.0));
    }

    SUBCASE("E halving check on a smooth path") {
        const auto coarse = TimeGrid::uniform(1.0, 256);
        const auto fine = TimeGrid::uniform(1.0, 512);
        const auto pc = ControlPath::euler(coarse, smooth_test_path(coarse),
                                           euler_unitary(smooth_test_path(coarse).col(256)));
        const auto pf = ControlPath::euler(fine, smooth_test_path(fine),
                                           euler_unitary(smooth_test_path(fine).col(512)));
        CHECK(std::abs(energy_e(pf) - energy_e(pc)) < 1e-3 * energy_e(pf));
    }

    SUBCASE("single square pulse energy π²/4T") {
        const double T = 1e-3;
        const auto pauli = pauli_basis();
        std::vector<PiecewiseRule::Segment> segs;
        const double t0 = 0.5 * (1.0 - T);
        segs.push_back({0.0, t0, Eigen::MatrixXcd::Zero(2, 2)});
        segs.push_back({t0, T, (0.5 * kPi / T) * pauli.generators[0]});
        segs.push_back({t0 + T, 1.0 - t0 - T, Eigen::MatrixXcd::Zero(2, 2)});
        auto rule = std::make_shared<PiecewiseRule>(segs);
        const Eigen::MatrixXcd gate = rule->unitary(Eigen::VectorXd(), 1.0);
        std::vector<double> pts = {0.0, 0.25 * t0, 0.5 * t0, t0};
        for (int k = 1; k <= 16; ++k) {
            pts.push_back(t0 + T * k / 16.0);
        }
        for (int k = 1; k <= 4; ++k) {
            pts.push_back(t0 + T + (1.0 - t0 - T) * k / 4.0);
        }
        const auto path =
            ControlPath(pauli, TimeGrid::from_points(pts), rule, Eigen::MatrixXd(), gate);
        const double es = energy_es(path);
        CHECK(es == doctest::Approx(kPi * kPi / (4.0 * T)).epsilon(1e-6));
        CHECK(es == doctest::Approx(2.467e3).epsilon(1e-3));
    }
}

TEST_CASE("geodesic initialization tracks the fractional power") {
    const auto grid = TimeGrid::uniform(1.0, 128);

    SUBCASE("identity target stays constant") {
        const auto f = geodesic_init(Eigen::Matrix2cd::Identity(), grid);
        CHECK(f.cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("pure z target splits between the two z angles") {
        const Eigen::Matrix2cd target = euler_unitary({0.5 * kPi, 0.0, 0.5 * kPi});  // π about z
        const auto f = geodesic_init(target, grid);
        const auto path = ControlPath::euler(grid, f, target);
        // midpoint is the quarter rotation
        const Eigen::Matrix2cd expected = euler_unitary({0.25 * kPi, 0.0, 0.25 * kPi});
        CHECK(phase_distance(path.unitary(64), expected) < 1e-9);
    }

    SUBCASE("generic target midpoint matches the eigendecomposition oracle") {
        const Eigen::Matrix2cd target = euler_unitary({0.3, 1.1, -0.6});
        const auto f = geodesic_init(target, grid);

        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(target);
        Eigen::Matrix2cd sqrt_t = Eigen::Matrix2cd::Zero();
        // principal square root via normalized eigenvectors
        Eigen::Matrix2cd v = es.eigenvectors();
        Eigen::Vector2cd lam = es.eigenvalues();
        Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
        for (int k = 0; k < 2; ++k) {
            d(k, k) = std::exp(Cplx(0.0, 0.5 * std::arg(lam(k))));
        }
        sqrt_t = v * d * v.inverse();
        CHECK(phase_distance(euler_unitary(f.col(64)), sqrt_t) < 1e-8);

        // every grid point reproduces the interpolation through the chart
        const auto path = ControlPath::euler(grid, f, target);
        const auto geo = ControlPath::geodesic(pauli_basis(), grid, target);
        for (int i = 0; i < grid.n_points(); ++i) {
            CHECK(phase_distance(path.unitary(i), geo.unitary(i)) < 1e-8);
        }
    }
}

TEST_CASE("chart regularization moves interior points only") {
    const auto grid = TimeGrid::uniform(1.0, 32);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(3, grid.n_points());
    const auto reg = regularize_chart(f, 1e-6);
    CHECK(reg.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(reg.col(32).cwiseAbs().maxCoeff() == 0.0);
    CHECK(reg(1, 16) == doctest::Approx(1e-6).epsilon(1e-6));
    CHECK(reg.row(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("modulation spectrum of the static path is the sinc profile") {
    const auto grid = TimeGrid::uniform(1.0, 256);
    const auto path = ControlPath::euler(grid, Eigen::MatrixXd::Zero(3, grid.n_points()),
                                         Eigen::Matrix2cd::Identity());
    const auto omega = default_omega_grid(1.0, 2048);
    const auto ms = modulation_spectrum(path, omega);
    for (std::size_t a = 0; a < omega.size(); a += 97) {
        const double w = omega[a];
        const double expected = (w == 0.0)
                                    ? 1.0 / (2.0 * kPi)
                                    : 2.0 * std::pow(std::sin(0.5 * w), 2) / (kPi * w * w);
        for (int j = 0; j < 3; ++j) {
            CHECK(ms.f_t[a](j, j).real() == doctest::Approx(expected).epsilon(2e-4));
        }
    }
    // PSD at sampled frequencies
    for (std::size_t a = 0; a < omega.size(); a += 211) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ms.f_t[a], Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
    CHECK(ms.parseval_fraction() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("parseval fraction holds for a generic smooth path") {
    const auto grid = TimeGrid::uniform(1.0, 256);
    const auto f = smooth_test_path(grid);
    const auto path = ControlPath::euler(grid, f, euler_unitary(f.col(grid.n_points() - 1)));
    const auto ms = modulation_spectrum(path, default_omega_grid(1.0));
    CHECK(ms.parseval_fraction() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("extracted hamiltonian reintegrates to the final gate") {
    const auto grid = TimeGrid::uniform(1.0, 2048);
    const auto f = smooth_test_path(grid);
    const auto path = ControlPath::euler(grid, f, euler_unitary(f.col(grid.n_points() - 1)));
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    for (int i = 0; i + 1 < grid.n_points(); ++i) {
        const Eigen::Matrix2cd hmid =
            0.5 * (hamiltonian_extract(path, i).h + hamiltonian_extract(path, i + 1).h);
        u = mat_exp_2x2(hmid, grid[i + 1] - grid[i]) * u;
    }
    CHECK(phase_distance(u, path.unitary(grid.n_points() - 1)) < 1e-6);
}

TEST_CASE("unitary evaluation between grid points interpolates parameters") {
    const auto grid = TimeGrid::uniform(1.0, 16);
    const auto f = smooth_test_path(grid);
    const auto path = ControlPath::euler(grid, f, euler_unitary(f.col(16)));
    const double t = 0.5 * (grid[3] + grid[4]);
    const Eigen::VectorXd fmid = 0.5 * (f.col(3) + f.col(4));
    CHECK((path.unitary_at(t) - euler_unitary(fmid)).cwiseAbs().maxCoeff() < 1e-12);
}
