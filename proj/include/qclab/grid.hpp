#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qclab/errors.hpp"
#include "qclab/fft.hpp"

namespace qclab {

using cplx = std::complex<double>;

/// Uniform periodic spatial grid. Points are x_i = x_min + i*dx for
/// i = 0..n_points-1; x_max itself is the wrap-around image of x_min.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n_points = 0;

    static Grid1D make(double x_min, double x_max, std::size_t n_points) {
        if (!(x_max > x_min)) throw config_error("Grid1D: x_max must exceed x_min");
        if (n_points < 64 || !fft::is_power_of_two(n_points))
            throw config_error("Grid1D: n_points must be a power of two >= 64");
        return Grid1D{x_min, x_max, n_points};
    }

    double dx() const { return (x_max - x_min) / static_cast<double>(n_points); }
    double span() const { return x_max - x_min; }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }

    bool operator==(const Grid1D&) const = default;
};

/// Complex amplitudes on a Grid1D. Normalization is with respect to the
/// trapezoid-free Riemann sum: sum |psi_i|^2 dx.
struct WaveFunction {
    Grid1D grid;
    std::vector<cplx> amplitudes;

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s * grid.dx();
    }

    void normalize() {
        const double n2 = norm2();
        if (!(n2 > 0.0) || !std::isfinite(n2))
            throw numerical_error("WaveFunction: cannot normalize state with zero or non-finite norm");
        const double scale = 1.0 / std::sqrt(n2);
        for (auto& a : amplitudes) a *= scale;
    }

    bool finite() const {
        for (const auto& a : amplitudes)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
        return true;
    }
};

/// Analytic initial state psi(x) ~ exp(-(x-center)^2/width^2 + i momentum x/hbar).
/// With this convention the position dispersion is width/2 and the momentum
/// dispersion hbar/width, so the packet saturates the uncertainty bound.
struct GaussianPacketSpec {
    double center = 0.0;
    double momentum = 0.0;
    double width = 1.0;
    double mass = 1.0;
};

inline WaveFunction make_gaussian(const GaussianPacketSpec& spec, const Grid1D& grid,
                                  double hbar = 1.0) {
    if (!(spec.width > 0.0)) throw config_error("make_gaussian: width must be positive");
    if (!(spec.mass > 0.0)) throw config_error("make_gaussian: mass must be positive");
    const double a = spec.width;
    if (a < 4.0 * grid.dx())
        throw config_error("make_gaussian: packet width below 4*dx is unresolvable on this grid");
    if (6.0 * a > 0.5 * grid.span())
        throw config_error("make_gaussian: packet too wide for grid");
    if (spec.center - grid.x_min < 6.0 * a || grid.x_max - spec.center < 6.0 * a)
        throw config_error("make_gaussian: packet too near grid boundary");

    WaveFunction psi{grid, std::vector<cplx>(grid.n_points)};
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const double d = (x - spec.center) / a;
        const double phase = spec.momentum * x / hbar;
        psi.amplitudes[i] = std::exp(-d * d) * cplx{std::cos(phase), std::sin(phase)};
    }
    psi.normalize();
    return psi;
}

} // namespace qclab
