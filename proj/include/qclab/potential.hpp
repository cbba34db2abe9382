#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qclab/errors.hpp"
#include "qclab/grid.hpp"

namespace qclab {

enum class PotentialKind {
    free_particle,
    linear,
    gravity_uniform,
    harmonic,
    softened_coulomb,
    polynomial,
    tabulated,
};

inline std::string to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::free_particle: return "free";
        case PotentialKind::linear: return "linear";
        case PotentialKind::gravity_uniform: return "gravity_uniform";
        case PotentialKind::harmonic: return "harmonic";
        case PotentialKind::softened_coulomb: return "softened_coulomb";
        case PotentialKind::polynomial: return "polynomial";
        case PotentialKind::tabulated: return "tabulated";
    }
    return "?";
}

/// One-dimensional external potential. All built-in kinds carry an analytic
/// derivative; tabulated data does not (asking for one is a configuration
/// error, matching how the Ehrenfest force check treats it).
class PotentialSpec {
public:
    static PotentialSpec free() { return PotentialSpec(PotentialKind::free_particle); }

    /// V = slope * x.
    static PotentialSpec linear(double slope) {
        PotentialSpec p(PotentialKind::linear);
        p.p1_ = slope;
        return p;
    }

    /// V = M g x: uniform gravity acting on total mass M, with x the height.
    static PotentialSpec gravity_uniform(double total_mass, double g) {
        PotentialSpec p(PotentialKind::gravity_uniform);
        p.p1_ = total_mass;
        p.p2_ = g;
        return p;
    }

    /// V = 1/2 m omega^2 x^2.
    static PotentialSpec harmonic(double mass, double omega) {
        PotentialSpec p(PotentialKind::harmonic);
        p.p1_ = mass;
        p.p2_ = omega;
        return p;
    }

    /// V = -strength / sqrt((x-center)^2 + softening^2); positive strength
    /// is attractive.
    static PotentialSpec softened_coulomb(double strength, double softening, double center) {
        if (!(softening > 0.0))
            throw config_error("softened_coulomb: softening must be positive");
        PotentialSpec p(PotentialKind::softened_coulomb);
        p.p1_ = strength;
        p.p2_ = softening;
        p.p3_ = center;
        return p;
    }

    /// V = sum_k coeffs[k] x^k.
    static PotentialSpec polynomial(std::vector<double> coeffs) {
        PotentialSpec p(PotentialKind::polynomial);
        p.coeffs_ = std::move(coeffs);
        return p;
    }

    /// Samples on the evolution grid, one per grid point.
    static PotentialSpec tabulated(std::vector<double> samples, const Grid1D& grid) {
        if (samples.size() != grid.n_points)
            throw config_error("tabulated potential must cover the full grid (one sample per point)");
        PotentialSpec p(PotentialKind::tabulated);
        p.coeffs_ = std::move(samples);
        p.grid_ = grid;
        return p;
    }

    PotentialKind kind() const { return kind_; }

    double value(double x) const {
        switch (kind_) {
            case PotentialKind::free_particle: return 0.0;
            case PotentialKind::linear: return p1_ * x;
            case PotentialKind::gravity_uniform: return p1_ * p2_ * x;
            case PotentialKind::harmonic: return 0.5 * p1_ * p2_ * p2_ * x * x;
            case PotentialKind::softened_coulomb: {
                const double d = x - p3_;
                return -p1_ / std::sqrt(d * d + p2_ * p2_);
            }
            case PotentialKind::polynomial: {
                double v = 0.0;
                for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * x + coeffs_[k];
                return v;
            }
            case PotentialKind::tabulated: return tabulated_value(x);
        }
        return 0.0;
    }

    bool has_derivative() const { return kind_ != PotentialKind::tabulated; }

    double derivative(double x) const {
        switch (kind_) {
            case PotentialKind::free_particle: return 0.0;
            case PotentialKind::linear: return p1_;
            case PotentialKind::gravity_uniform: return p1_ * p2_;
            case PotentialKind::harmonic: return p1_ * p2_ * p2_ * x;
            case PotentialKind::softened_coulomb: {
                const double d = x - p3_;
                const double r2 = d * d + p2_ * p2_;
                return p1_ * d / (r2 * std::sqrt(r2));
            }
            case PotentialKind::polynomial: {
                double v = 0.0;
                for (std::size_t k = coeffs_.size(); k-- > 1;)
                    v = v * x + coeffs_[k] * static_cast<double>(k);
                return v;
            }
            case PotentialKind::tabulated:
                throw config_error("tabulated potential has no analytic derivative");
        }
        return 0.0;
    }

    /// Samples over an arbitrary grid; for tabulated data the grid must be
    /// the one the samples were declared on.
    std::vector<double> sample(const Grid1D& grid) const {
        if (kind_ == PotentialKind::tabulated) {
            if (!(grid == grid_))
                throw config_error("tabulated potential sampled on a different grid");
            return coeffs_;
        }
        std::vector<double> v(grid.n_points);
        for (std::size_t i = 0; i < grid.n_points; ++i) v[i] = value(grid.x(i));
        return v;
    }

    /// True when Ehrenfest means follow the classical trajectory exactly
    /// (potential at most quadratic in x).
    bool is_exactness_class() const {
        switch (kind_) {
            case PotentialKind::free_particle:
            case PotentialKind::linear:
            case PotentialKind::gravity_uniform:
            case PotentialKind::harmonic:
                return true;
            case PotentialKind::polynomial: {
                for (std::size_t k = 3; k < coeffs_.size(); ++k)
                    if (coeffs_[k] != 0.0) return false;
                return true;
            }
            default: return false;
        }
    }

    double param1() const { return p1_; }
    double param2() const { return p2_; }
    double param3() const { return p3_; }
    const std::vector<double>& table() const { return coeffs_; }

private:
    explicit PotentialSpec(PotentialKind k) : kind_(k) {}

    double tabulated_value(double x) const {
        const double dx = grid_.dx();
        double f = (x - grid_.x_min) / dx;
        if (f < 0.0) f = 0.0;
        auto i = static_cast<std::size_t>(f);
        if (i >= coeffs_.size() - 1) return coeffs_.back();
        const double t = f - static_cast<double>(i);
        return coeffs_[i] * (1.0 - t) + coeffs_[i + 1] * t;
    }

    PotentialKind kind_;
    double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
    std::vector<double> coeffs_;
    Grid1D grid_{};
};

} // namespace qclab
