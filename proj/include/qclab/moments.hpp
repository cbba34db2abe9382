#pragma once

#include <cmath>
#include <vector>

#include "qclab/constants.hpp"
#include "qclab/errors.hpp"
#include "qclab/fft.hpp"
#include "qclab/grid.hpp"
#include "qclab/potential.hpp"

namespace qclab {

/// Expectation values and dispersions of a state, plus total energy.
struct MomentStats {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double sigma_x = 0.0;
    double sigma_p = 0.0;
    double energy = 0.0;
    double norm = 0.0;

    double uncertainty_product() const { return sigma_x * sigma_p; }
};

/// Position moments from |psi|^2, momentum moments spectrally from the
/// discrete Fourier transform, energy as <p^2>/2m + <V>.
inline MomentStats moments(const WaveFunction& psi, const PotentialSpec& potential, double mass,
                           double hbar = 1.0) {
    if (!psi.finite()) throw numerical_error("moments: state contains non-finite amplitudes");

    const auto& grid = psi.grid;
    const double dx = grid.dx();
    const std::size_t n = grid.n_points;

    double w_sum = 0.0, x_sum = 0.0, xx_sum = 0.0, v_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::norm(psi.amplitudes[i]);
        const double x = grid.x(i);
        w_sum += w;
        x_sum += w * x;
        xx_sum += w * x * x;
        v_sum += w * potential.value(x);
    }
    const double norm2 = w_sum * dx;
    const double mean_x = x_sum / w_sum;
    const double var_x = xx_sum / w_sum - mean_x * mean_x;
    const double mean_v = v_sum / w_sum;

    std::vector<cplx> phi = psi.amplitudes;
    fft::forward(phi);
    double pw_sum = 0.0, p_sum = 0.0, pp_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = std::norm(phi[j]);
        const double p = hbar * fft::wavenumber(j, n, dx);
        pw_sum += w;
        p_sum += w * p;
        pp_sum += w * p * p;
    }
    const double mean_p = p_sum / pw_sum;
    const double mean_pp = pp_sum / pw_sum;
    const double var_p = mean_pp - mean_p * mean_p;

    MomentStats s;
    s.mean_x = mean_x;
    s.mean_p = mean_p;
    s.sigma_x = std::sqrt(std::max(var_x, 0.0));
    s.sigma_p = std::sqrt(std::max(var_p, 0.0));
    s.energy = mean_pp / (2.0 * mass) + mean_v;
    s.norm = std::sqrt(norm2);
    return s;
}

/// Measured-uncertainty audit against the lower bound hbar/2.
struct HeisenbergAudit {
    double product = 0.0;        // dx * dp, units of action
    double ratio_to_bound = 0.0; // product / (hbar/2)
};

inline HeisenbergAudit heisenberg_audit(double dx_meas, double dp_meas, double hbar = si::hbar) {
    if (!(dx_meas > 0.0) || !(dp_meas > 0.0))
        throw config_error("heisenberg_audit: both uncertainties must be positive");
    HeisenbergAudit a;
    a.product = dx_meas * dp_meas;
    a.ratio_to_bound = a.product / (0.5 * hbar);
    return a;
}

} // namespace qclab
