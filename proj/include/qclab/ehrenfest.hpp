#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qclab/classical.hpp"
#include "qclab/errors.hpp"
#include "qclab/moments.hpp"
#include "qclab/potential.hpp"
#include "qclab/propagator.hpp"

namespace qclab {

namespace detail {

// d/dt of a uniformly sampled series: central differences inside,
// second-order one-sided stencils at the ends, so the output aligns with
// the input times.
inline std::vector<double> time_derivative(const std::vector<double>& y, double dt) {
    const std::size_t n = y.size();
    if (n < 3) throw config_error("time_derivative: need at least 3 recorded points");
    std::vector<double> d(n);
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dt);
    return d;
}

} // namespace detail

/// Residual of d<x>/dt = <p>/m along a recorded trajectory. The identity is
/// exact; what remains is discretization of the derivative and of the step.
inline std::vector<double> verify_ehrenfest1(const QuantumTrajectory& traj, double mass) {
    if (traj.times.size() < 3)
        throw config_error("verify_ehrenfest1: need at least 3 recorded points");
    const double dt = traj.record_dt();
    std::vector<double> mean_x(traj.stats.size());
    for (std::size_t i = 0; i < traj.stats.size(); ++i) mean_x[i] = traj.stats[i].mean_x;
    auto dxdt = detail::time_derivative(mean_x, dt);
    std::vector<double> res(dxdt.size());
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = dxdt[i] - traj.stats[i].mean_p / mass;
    return res;
}

/// Residual of d<p>/dt = -<dV/dx>. Needs the recorded states to evaluate
/// <dV/dx>, and an analytic derivative of the potential.
inline std::vector<double> verify_ehrenfest2(const QuantumTrajectory& traj,
                                             const PotentialSpec& potential) {
    if (traj.times.size() < 3)
        throw config_error("verify_ehrenfest2: need at least 3 recorded points");
    if (!potential.has_derivative())
        throw config_error("verify_ehrenfest2: potential has no analytic derivative");
    if (traj.states.size() != traj.times.size())
        throw config_error("verify_ehrenfest2: trajectory was recorded without states");

    const double dt = traj.record_dt();
    std::vector<double> mean_p(traj.stats.size());
    for (std::size_t i = 0; i < traj.stats.size(); ++i) mean_p[i] = traj.stats[i].mean_p;
    auto dpdt = detail::time_derivative(mean_p, dt);

    std::vector<double> res(dpdt.size());
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& psi = traj.states[i];
        double w_sum = 0.0, f_sum = 0.0;
        for (std::size_t j = 0; j < psi.grid.n_points; ++j) {
            const double w = std::norm(psi.amplitudes[j]);
            w_sum += w;
            f_sum += w * potential.derivative(psi.grid.x(j));
        }
        res[i] = dpdt[i] + f_sum / w_sum;
    }
    return res;
}

/// Side-by-side record of quantum expectation values and a matched
/// classical trajectory, with deviation metrics.
struct CorrespondenceReport {
    std::vector<double> times;
    std::vector<double> quantum_mean_x;
    std::vector<double> quantum_mean_p;
    std::vector<double> classical_x;
    std::vector<double> classical_p;
    std::vector<double> ehrenfest1_residual;
    std::vector<double> ehrenfest2_residual; // empty when states were not recorded
    // <V> versus V(<x>): the two candidate definitions of the classical
    // potential, reported rather than chosen between.
    std::vector<double> v_expectation;
    std::vector<double> v_at_mean;

    double max_deviation_x = 0.0;
    double max_deviation_p = 0.0;
    double deviation_growth_rate = 0.0; // least-squares slope of |dev_x|(t)
    bool exactness_class = false;       // linear/quadratic potential
};

/// Compare a quantum trajectory against a classical one on the same time
/// stamps; axis = which classical component matches the 1D quantum axis.
inline CorrespondenceReport compare_to_newton(const QuantumTrajectory& q,
                                              const ClassicalTrajectory& c,
                                              const PotentialSpec& potential, double mass,
                                              int axis = 0) {
    if (q.times.size() != c.times.size())
        throw config_error("compare_to_newton: time grids differ in length");
    for (std::size_t i = 0; i < q.times.size(); ++i)
        if (std::abs(q.times[i] - c.times[i]) > 1e-9 * (1.0 + std::abs(q.times[i])))
            throw config_error("compare_to_newton: time stamps do not match at index " +
                               std::to_string(i));

    auto pick = [axis](const Vec3& v) { return axis == 0 ? v.x : (axis == 1 ? v.y : v.z); };

    CorrespondenceReport rep;
    rep.times = q.times;
    rep.exactness_class = potential.is_exactness_class();
    const std::size_t n = q.times.size();
    rep.quantum_mean_x.resize(n);
    rep.quantum_mean_p.resize(n);
    rep.classical_x.resize(n);
    rep.classical_p.resize(n);
    rep.v_expectation.resize(n);
    rep.v_at_mean.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& st = q.stats[i];
        rep.quantum_mean_x[i] = st.mean_x;
        rep.quantum_mean_p[i] = st.mean_p;
        rep.classical_x[i] = pick(c.states[i].positions[0]);
        rep.classical_p[i] = pick(c.states[i].momenta[0]);
        // <V> recovered from <H> minus the kinetic part.
        const double kinetic = (st.sigma_p * st.sigma_p + st.mean_p * st.mean_p) / (2.0 * mass);
        rep.v_expectation[i] = st.energy - kinetic;
        rep.v_at_mean[i] = potential.value(st.mean_x);

        rep.max_deviation_x = std::max(rep.max_deviation_x,
                                       std::abs(st.mean_x - rep.classical_x[i]));
        rep.max_deviation_p = std::max(rep.max_deviation_p,
                                       std::abs(st.mean_p - rep.classical_p[i]));
    }

    rep.ehrenfest1_residual = verify_ehrenfest1(q, mass);
    if (!q.states.empty() && potential.has_derivative())
        rep.ehrenfest2_residual = verify_ehrenfest2(q, potential);

    // Least-squares slope of |x_q - x_cl| against t.
    double st2 = 0.0, st_ = 0.0, sy = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = std::abs(rep.quantum_mean_x[i] - rep.classical_x[i]);
        st_ += rep.times[i];
        st2 += rep.times[i] * rep.times[i];
        sy += dev;
        sty += rep.times[i] * dev;
    }
    const double denom = static_cast<double>(n) * st2 - st_ * st_;
    rep.deviation_growth_rate = denom != 0.0 ? (static_cast<double>(n) * sty - st_ * sy) / denom : 0.0;
    return rep;
}

} // namespace qclab
