#include "oqctrl/bath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oqctrl/numerics.hpp"

namespace oqctrl {

namespace {

using Cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Dimensionless guard: trapezoid sampling of e^{-iωt} degrades once the phase
// step per grid cell approaches one radian.
constexpr double kAliasPhaseLimit = 1.0;

}  // namespace

BathModel BathModel::from_entries(int axes, std::vector<Entry> entries, double omega_max,
                                  int n_omega, bool symmetric) {
    if (axes < 1) {
        throw std::invalid_argument("BathModel: axes must be positive");
    }
    if (omega_max <= 0.0 || n_omega < 16) {
        throw std::invalid_argument("BathModel: need omega_max > 0 and a usable grid");
    }
    for (const Entry& e : entries) {
        if (e.row < 0 || e.row >= axes || e.col < 0 || e.col >= axes) {
            throw std::invalid_argument("BathModel: entry index out of range");
        }
        if (!e.g_tot) {
            throw std::invalid_argument("BathModel: entry has no spectral function");
        }
    }
    BathModel m;
    m.axes_ = axes;
    m.symmetric_ = symmetric;
    m.spectral_ = true;
    m.entries_ = std::move(entries);
    m.omega_max_ = omega_max;
    m.n_omega_ = n_omega;
    m.build_samples();
    return m;
}

BathModel BathModel::from_axis_spectra(std::vector<std::function<double(double)>> spectra,
                                       double omega_max, int n_omega) {
    std::vector<Entry> entries;
    entries.reserve(spectra.size());
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        auto g = spectra[i];
        if (!g) {
            throw std::invalid_argument("BathModel: missing axis spectrum");
        }
        entries.push_back(Entry{static_cast<int>(i), static_cast<int>(i),
                                [g](double w) { return Cplx(g(std::abs(w)), 0.0); }});
    }
    return from_entries(static_cast<int>(spectra.size()), std::move(entries), omega_max, n_omega,
                        /*symmetric=*/true);
}

BathModel BathModel::from_correlation(int axes, CorrelationFn phi, bool symmetric,
                                      double t_window, int n_transform) {
    if (axes < 1 || !phi) {
        throw std::invalid_argument("BathModel: invalid correlation backend");
    }
    if (t_window <= 0.0 || n_transform < 16) {
        throw std::invalid_argument("BathModel: invalid transform window");
    }
    BathModel m;
    m.axes_ = axes;
    m.symmetric_ = symmetric;
    m.spectral_ = false;
    m.phi_fn_ = std::move(phi);
    m.t_window_ = t_window;
    m.n_transform_ = n_transform;
    return m;
}

BathModel BathModel::zero(int axes, double omega_max, int n_omega) {
    return from_entries(axes, {}, omega_max, n_omega, /*symmetric=*/true);
}

BathModel BathModel::ohmic_cutoff(double coupling, const std::vector<double>& cutoffs,
                                  double softness, double omega_max, int n_omega) {
    if (coupling < 0.0) {
        throw std::invalid_argument("ohmic_cutoff: coupling must be nonnegative");
    }
    if (softness <= 0.0) {
        throw std::invalid_argument("ohmic_cutoff: softness must be positive");
    }
    std::vector<std::function<double(double)>> spectra;
    for (double c : cutoffs) {
        if (c <= 0.0) {
            throw std::invalid_argument("ohmic_cutoff: cutoff must be positive");
        }
        spectra.push_back([coupling, c, softness](double w) {
            const double x = w / (c * softness);
            return coupling * w * std::exp(-x * x);
        });
    }
    return from_axis_spectra(std::move(spectra), omega_max, n_omega);
}

BathModel BathModel::lorentzian_dip(double center, double width,
                                    const std::vector<double>& dip_centers, double dip_width,
                                    double dip_depth, double omega_max, int n_omega) {
    if (width <= 0.0 || dip_width <= 0.0) {
        throw std::invalid_argument("lorentzian_dip: widths must be positive");
    }
    if (dip_depth < 0.0 || dip_depth > 1.0) {
        throw std::invalid_argument("lorentzian_dip: dip_depth must lie in [0, 1]");
    }
    auto lorentz = [](double w, double c, double g) {
        const double dw = w - c;
        return g * g / (dw * dw + g * g);
    };
    std::vector<std::function<double(double)>> spectra;
    for (double dc : dip_centers) {
        auto raw = [=](double w) {
            return lorentz(w, center, width) -
                   dip_depth * lorentz(dc, center, width) * lorentz(w, dc, dip_width);
        };
        // Validate negativity of the raw difference before clipping.
        double min_val = 0.0, max_val = 0.0;
        for (int i = 0; i <= 2048; ++i) {
            const double w = omega_max * i / 2048.0;
            const double v = raw(w);
            min_val = std::min(min_val, v);
            max_val = std::max(max_val, v);
        }
        if (min_val < -0.05 * max_val) {
            throw std::invalid_argument(
                "lorentzian_dip: spectrum negative beyond clipping tolerance");
        }
        spectra.push_back([raw](double w) { return std::max(0.0, raw(w)); });
    }
    return from_axis_spectra(std::move(spectra), omega_max, n_omega);
}

BathModel BathModel::one_over_omega(double coupling, double omega_min, double omega_band,
                                    int n_omega) {
    if (omega_min <= 0.0) {
        throw std::invalid_argument("one_over_omega: omega_min must be positive");
    }
    if (omega_band <= omega_min) {
        throw std::invalid_argument("one_over_omega: band top must exceed omega_min");
    }
    std::vector<std::function<double(double)>> spectra;
    spectra.push_back([coupling, omega_min, omega_band](double w) {
        if (w < omega_min || w > omega_band) {
            return 0.0;
        }
        return coupling / w;
    });
    return from_axis_spectra(std::move(spectra), 1.0001 * omega_band, n_omega);
}

void BathModel::build_samples() {
    omega_grid_ = uniform_grid(-omega_max_, omega_max_, n_omega_);
    omega_weights_ = trapezoid_weights(omega_grid_);
    samples_.clear();
    samples_.reserve(entries_.size());
    for (const Entry& e : entries_) {
        Eigen::VectorXcd v(n_omega_);
        for (int a = 0; a < n_omega_; ++a) {
            v(a) = e.g_tot(omega_grid_[static_cast<std::size_t>(a)]);
        }
        samples_.push_back(std::move(v));
    }
    // Positivity of the defining spectral matrix at every grid point.
    for (int a = 0; a < n_omega_; ++a) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(axes_, axes_);
        for (std::size_t e = 0; e < entries_.size(); ++e) {
            g(entries_[e].row, entries_[e].col) += samples_[e](a);
        }
        const Eigen::MatrixXcd g_re = 0.5 * (g + g.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g_re, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10) {
            throw std::invalid_argument("BathModel: spectral matrix not positive semidefinite at ω=" +
                                        std::to_string(omega_grid_[static_cast<std::size_t>(a)]));
        }
    }
}

double BathModel::alias_limit() const {
    if (!spectral_) {
        return t_window_;
    }
    const double domega = 2.0 * omega_max_ / static_cast<double>(n_omega_ - 1);
    return kAliasPhaseLimit / domega;
}

Eigen::MatrixXcd BathModel::correlation(double t) const {
    if (!spectral_) {
        if (std::abs(t) > t_window_ * (1.0 + 1e-12)) {
            throw std::domain_error("BathModel::correlation: |t| outside correlation window");
        }
        Eigen::MatrixXcd phi = phi_fn_(t);
        if (phi.rows() != axes_ || phi.cols() != axes_) {
            throw std::runtime_error("BathModel::correlation: backend returned wrong dimension");
        }
        return phi;
    }
    if (std::abs(t) > alias_limit()) {
        throw std::domain_error("BathModel::correlation: |t| beyond quadrature alias limit");
    }
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(axes_, axes_);
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        Cplx acc(0.0, 0.0);
        for (int a = 0; a < n_omega_; ++a) {
            const double w = omega_grid_[static_cast<std::size_t>(a)];
            acc += omega_weights_[static_cast<std::size_t>(a)] * samples_[e](a) *
                   std::exp(Cplx(0.0, -w * t));
        }
        phi(entries_[e].row, entries_[e].col) += acc / (2.0 * kPi);
    }
    if (symmetric_) {
        phi = 0.5 * (phi + phi.conjugate());  // enforce exact realness
    }
    return phi;
}

Eigen::MatrixXd BathModel::correlation_real(double t) const {
    return correlation(t).real();
}

Eigen::MatrixXcd BathModel::spectrum_tot(double omega) const {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(axes_, axes_);
    if (spectral_) {
        for (const Entry& e : entries_) {
            g(e.row, e.col) += e.g_tot(omega);
        }
        return g;
    }
    // Forward transform of the correlation backend.
    const auto pts = uniform_grid(-t_window_, t_window_, n_transform_);
    const auto w = trapezoid_weights(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        g += w[i] * std::exp(Cplx(0.0, omega * pts[i])) * phi_fn_(pts[i]);
    }
    return g;
}

BathModel::Spectra BathModel::spectrum_matrices(double omega) const {
    Spectra s;
    const Eigen::MatrixXcd gp = spectrum_tot(omega);
    const Eigen::MatrixXcd gm = spectrum_tot(-omega);
    s.tot = gp;
    s.re = 0.5 * (gp + gm.transpose());
    s.im = (gp - gm.transpose()) / Cplx(0.0, 2.0);
    return s;
}

double BathModel::axis_spectrum(int axis, double omega) const {
    if (axis < 0 || axis >= axes_) {
        throw std::invalid_argument("axis_spectrum: axis out of range");
    }
    if (spectral_) {
        for (const Entry& e : entries_) {
            if (e.row == axis && e.col == axis) {
                return 0.5 * (e.g_tot(omega) + e.g_tot(-omega)).real();
            }
        }
        return 0.0;
    }
    return spectrum_matrices(omega).re(axis, axis).real();
}

std::vector<BathModel::PairTable> BathModel::correlation_tables(
    const std::vector<double>& times) const {
    const int n = static_cast<int>(times.size());
    if (n < 1) {
        throw std::invalid_argument("correlation_tables: empty time list");
    }
    std::vector<PairTable> tables;
    if (!spectral_) {
        const double span = *std::max_element(times.begin(), times.end()) -
                            *std::min_element(times.begin(), times.end());
        if (span > t_window_ * (1.0 + 1e-12)) {
            throw std::domain_error("correlation_tables: time span outside correlation window");
        }
        // Dense entries from the backend function.
        std::vector<Eigen::MatrixXcd> phis(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                phis[static_cast<std::size_t>(i) * n + j] = phi_fn_(times[i] - times[j]);
            }
        }
        for (int r = 0; r < axes_; ++r) {
            for (int c = 0; c < axes_; ++c) {
                Eigen::MatrixXcd tab(n, n);
                bool nonzero = false;
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        const Cplx v = phis[static_cast<std::size_t>(i) * n + j](r, c);
                        tab(i, j) = v;
                        nonzero = nonzero || (std::abs(v) > 0.0);
                    }
                }
                if (nonzero) {
                    tables.push_back(PairTable{r, c, std::move(tab)});
                }
            }
        }
        return tables;
    }

    double max_span = 0.0;
    for (double t : times) {
        for (double s : times) {
            max_span = std::max(max_span, std::abs(t - s));
        }
    }
    if (max_span > alias_limit()) {
        throw std::domain_error("correlation_tables: time span beyond quadrature alias limit");
    }

    // Φ_e(t_i - t_j) = (1/2π) Σ_a w_a g_e(ω_a) e^{-iω_a t_i} e^{+iω_a t_j}
    // factorizes into one complex GEMM per entry.
    Eigen::MatrixXcd phases(n_omega_, n);
    for (int a = 0; a < n_omega_; ++a) {
        const double w = omega_grid_[static_cast<std::size_t>(a)];
        for (int i = 0; i < n; ++i) {
            phases(a, i) = std::exp(Cplx(0.0, w * times[static_cast<std::size_t>(i)]));
        }
    }
    tables.reserve(entries_.size());
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        Eigen::VectorXcd d(n_omega_);
        for (int a = 0; a < n_omega_; ++a) {
            d(a) = omega_weights_[static_cast<std::size_t>(a)] * samples_[e](a) / (2.0 * kPi);
        }
        Eigen::MatrixXcd tab = phases.adjoint() * d.asDiagonal() * phases;
        if (symmetric_) {
            tab = 0.5 * (tab + tab.conjugate());
        }
        tables.push_back(PairTable{entries_[e].row, entries_[e].col, std::move(tab)});
    }
    return tables;
}

BathModel BathModel::scaled(double factor) const {
    if (factor <= 0.0) {
        throw std::invalid_argument("BathModel::scaled: factor must be positive");
    }
    BathModel m = *this;
    if (spectral_) {
        for (Entry& e : m.entries_) {
            auto g = e.g_tot;
            e.g_tot = [g, factor](double w) { return factor * g(w); };
        }
        for (auto& v : m.samples_) {
            v *= factor;
        }
    } else {
        auto phi = phi_fn_;
        m.phi_fn_ = [phi, factor](double t) { return (factor * phi(t)).eval(); };
    }
    return m;
}

}  // namespace oqctrl
