// numerics.hpp — Grid, trapezoid quadrature, and small statistics helpers

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oqctrl {

inline std::vector<double> uniform_grid(double a, double b, int n_points) {
    if (n_points < 2) {
        throw std::invalid_argument("uniform_grid: need at least 2 points");
    }
    std::vector<double> pts(static_cast<std::size_t>(n_points));
    const double h = (b - a) / static_cast<double>(n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        pts[static_cast<std::size_t>(i)] = a + h * i;
    }
    pts.back() = b;
    return pts;
}

// Composite trapezoid weights for arbitrary sorted nodes.
inline std::vector<double> trapezoid_weights(const std::vector<double>& pts) {
    const std::size_t n = pts.size();
    if (n < 2) {
        throw std::invalid_argument("trapezoid_weights: need at least 2 points");
    }
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = pts[i + 1] - pts[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

template <typename F>
double trapz(const std::vector<double>& pts, F&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        acc += 0.5 * (pts[i + 1] - pts[i]) * (f(pts[i]) + f(pts[i + 1]));
    }
    return acc;
}

inline double trapz_values(const std::vector<double>& pts, const std::vector<double>& vals) {
    if (vals.size() != pts.size()) {
        throw std::invalid_argument("trapz_values: size mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        acc += 0.5 * (pts[i + 1] - pts[i]) * (vals[i] + vals[i + 1]);
    }
    return acc;
}

// Running integral on the same nodes, result[0] = 0.
inline std::vector<double> cumtrapz(const std::vector<double>& pts, const std::vector<double>& vals) {
    if (vals.size() != pts.size()) {
        throw std::invalid_argument("cumtrapz: size mismatch");
    }
    std::vector<double> out(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (pts[i] - pts[i - 1]) * (vals[i] + vals[i - 1]);
    }
    return out;
}

inline double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("pearson_correlation: need two equal-length samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

// Max-norm distance after aligning u to v by the optimal global phase.
inline double phase_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw std::invalid_argument("phase_distance: dimension mismatch");
    }
    const std::complex<double> overlap = (u.adjoint() * v).trace();
    if (std::abs(overlap) < 1e-300) {
        return (u - v).cwiseAbs().maxCoeff();
    }
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, std::arg(overlap)));
    return (phase * u - v).cwiseAbs().maxCoeff();
}

}  // namespace oqctrl
