// bath.hpp — Bath coupling spectra G(ω) and correlation functions Φ(t)
//
// A bath is described by the entries of its spectral matrix
//   G_tot(ω) = ∫ dt e^{iωt} Φ(t),
// sampled on a uniform frequency grid over [-omega_max, omega_max]. The
// correlation function is recovered by trapezoid quadrature,
//   Φ(t) = (1/2π) ∫ dω e^{-iωt} G_tot(ω).
// For the built-in families Φ(t) is real and even ("symmetric"), so the
// defining spectra coincide with G_re(ω) = ∫ dt e^{iωt} Re Φ(t).
//
// A second backend accepts Φ(t) directly; spectra are then obtained by the
// forward transform on a configured time window. This is mainly useful for
// synthetic correlation functions in tests and diagnostics.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oqctrl {

class BathModel {
public:
    using SpectralFn = std::function<std::complex<double>(double)>;
    using CorrelationFn = std::function<Eigen::MatrixXcd(double)>;

    struct Entry {
        int row{0};
        int col{0};
        SpectralFn g_tot;
    };

    struct Spectra {
        Eigen::MatrixXcd re;   // transform of Re Φ
        Eigen::MatrixXcd im;   // transform of Im Φ
        Eigen::MatrixXcd tot;  // transform of Φ
    };

    // Pair table Φ_rc(t_i - t_j) for a list of times, used by kernel code.
    struct PairTable {
        int row{0};
        int col{0};
        Eigen::MatrixXcd phi;
    };

    BathModel() = default;

    // General spectral constructor. Entries not listed are zero.
    static BathModel from_entries(int axes, std::vector<Entry> entries, double omega_max,
                                  int n_omega, bool symmetric);

    // Diagonal symmetric bath from per-axis real spectra G_i(|ω|) >= 0.
    static BathModel from_axis_spectra(std::vector<std::function<double(double)>> spectra,
                                       double omega_max, int n_omega);

    // Time-domain backend; spectra computed by forward quadrature over
    // [-t_window, t_window] with n_transform nodes.
    static BathModel from_correlation(int axes, CorrelationFn phi, bool symmetric,
                                      double t_window, int n_transform = 4097);

    static BathModel zero(int axes, double omega_max = 50.0, int n_omega = 4096);

    // G_i(ω) = coupling · |ω| · exp(-(ω/cutoff_i)²·softness⁻²), one cutoff per axis.
    static BathModel ohmic_cutoff(double coupling, const std::vector<double>& cutoffs,
                                  double softness = 1.0, double omega_max = 50.0,
                                  int n_omega = 4096);

    // Peak-normalized Lorentzian minus a second Lorentzian carving a dip at a
    // per-axis position; clipped at zero. Throws if the raw spectrum goes
    // negative by more than 5% of its peak.
    static BathModel lorentzian_dip(double center, double width,
                                    const std::vector<double>& dip_centers, double dip_width,
                                    double dip_depth, double omega_max = 50.0,
                                    int n_omega = 4096);

    // Single-axis G(ω) = coupling/|ω| on omega_min <= |ω| <= omega_band, zero outside.
    static BathModel one_over_omega(double coupling, double omega_min, double omega_band,
                                    int n_omega = 8192);

    int axes() const { return axes_; }
    bool symmetric() const { return symmetric_; }
    double omega_max() const { return omega_max_; }
    int n_omega() const { return n_omega_; }
    bool spectral_backend() const { return spectral_; }
    const std::vector<Entry>& entries() const { return entries_; }

    // Largest |t| for which the frequency-grid quadrature is trusted.
    double alias_limit() const;

    // Φ(t); throws std::domain_error beyond the alias limit.
    Eigen::MatrixXcd correlation(double t) const;
    Eigen::MatrixXd correlation_real(double t) const;

    Spectra spectrum_matrices(double omega) const;

    // Defining diagonal spectrum of one axis (real part of G_re entry).
    double axis_spectrum(int axis, double omega) const;

    // Tables Φ_rc(t_i - t_j) for all pairs of the given times, one per stored
    // entry. Evaluated with the same quadrature as correlation().
    std::vector<PairTable> correlation_tables(const std::vector<double>& times) const;

    // Same bath with every spectral entry multiplied by factor > 0.
    BathModel scaled(double factor) const;

private:
    void build_samples();
    Eigen::MatrixXcd spectrum_tot(double omega) const;

    int axes_{0};
    bool symmetric_{true};
    bool spectral_{true};

    std::vector<Entry> entries_;
    double omega_max_{0.0};
    int n_omega_{0};
    std::vector<double> omega_grid_;
    std::vector<double> omega_weights_;
    std::vector<Eigen::VectorXcd> samples_;

    CorrelationFn phi_fn_;
    double t_window_{0.0};
    int n_transform_{0};
};

}  // namespace oqctrl
