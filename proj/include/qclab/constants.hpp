#pragma once

#include <cmath>
#include <numbers>

#include "qclab/errors.hpp"

namespace qclab {

/// SI values of the physical constants used throughout. h and k_B are the
/// exact 2019 SI definitions; hbar and h/k_B are derived from them in full
/// double precision so that h = 2*pi*hbar holds to round-off, not to the
/// number of printed digits.
namespace si {

inline constexpr double planck = 6.626070150e-34;               // J s (exact)
inline constexpr double hbar = planck / (2.0 * std::numbers::pi); // J s
inline constexpr double boltzmann = 1.380649000e-23;            // J/K (exact)
inline constexpr double newton_g = 6.674300000e-11;             // m^3 kg^-1 s^-2
inline constexpr double g_earth = 9.806650000;                  // m/s^2 (standard gravity)
inline constexpr double planck_over_boltzmann = planck / boltzmann; // K s, ~4.80e-11

} // namespace si

/// Value bundle handed to code that wants the constants as data rather
/// than as compile-time names.
struct Constants {
    double hbar = si::hbar;
    double h = si::planck;
    double k_B = si::boltzmann;
    double G_N = si::newton_g;
    double g_earth = si::g_earth;
    double h_over_kB = si::planck_over_boltzmann;
};

/// Exponents of (length, mass, time) carried by a physical quantity.
struct Dimension {
    int length = 0;
    int mass = 0;
    int time = 0;
};

namespace dim {
inline constexpr Dimension dimensionless{0, 0, 0};
inline constexpr Dimension length{1, 0, 0};
inline constexpr Dimension mass{0, 1, 0};
inline constexpr Dimension time{0, 0, 1};
inline constexpr Dimension velocity{1, 0, -1};
inline constexpr Dimension acceleration{1, 0, -2};
inline constexpr Dimension momentum{1, 1, -1};
inline constexpr Dimension energy{2, 1, -2};
inline constexpr Dimension action{2, 1, -1};
inline constexpr Dimension frequency{0, 0, -1};
} // namespace dim

namespace detail {
inline double ipow(double base, int e) {
    if (e < 0) return 1.0 / ipow(base, -e);
    double r = 1.0;
    while (e-- > 0) r *= base;
    return r;
}
} // namespace detail

/// Unit normalization with hbar = 1 internally. Choosing a length scale and
/// a mass scale fixes the time scale: t0 = m0 * l0^2 / hbar_SI, so that the
/// SI value of hbar maps to exactly 1.
class UnitSystem {
public:
    UnitSystem(double length_scale, double mass_scale)
        : length_scale_(length_scale), mass_scale_(mass_scale) {
        if (!(length_scale > 0.0) || !std::isfinite(length_scale) ||
            !(mass_scale > 0.0) || !std::isfinite(mass_scale)) {
            throw config_error("UnitSystem: length/mass scales must be positive and finite");
        }
        time_scale_ = mass_scale_ * length_scale_ * length_scale_ / si::hbar;
    }

    /// Natural choice for desk-scale quantum runs: everything order one for
    /// a particle of the given mass and packet size.
    static UnitSystem for_particle(double mass_kg, double length_m) {
        return UnitSystem(length_m, mass_kg);
    }

    double length_scale() const { return length_scale_; }
    double mass_scale() const { return mass_scale_; }
    double time_scale() const { return time_scale_; }

    double to_internal(double q, Dimension d) const { return q / factor(d); }
    double from_internal(double q, Dimension d) const { return q * factor(d); }

private:
    double factor(Dimension d) const {
        return detail::ipow(length_scale_, d.length) * detail::ipow(mass_scale_, d.mass) *
               detail::ipow(time_scale_, d.time);
    }

    double length_scale_;
    double mass_scale_;
    double time_scale_;
};

} // namespace qclab
