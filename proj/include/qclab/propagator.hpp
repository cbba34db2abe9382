#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qclab/errors.hpp"
#include "qclab/fft.hpp"
#include "qclab/grid.hpp"
#include "qclab/moments.hpp"
#include "qclab/potential.hpp"

namespace qclab {

enum class Method { split_step, crank_nicolson };

struct EvolutionConfig {
    double dt = 1e-3;
    std::size_t n_steps = 0;
    std::size_t record_every = 1;
    Method method = Method::split_step;
    bool record_states = false; // keep a snapshot of psi at each recorded step
    double hbar = 1.0;
};

/// Moments (and optionally states) sampled along an evolution.
struct QuantumTrajectory {
    std::vector<double> times;
    std::vector<MomentStats> stats;
    std::vector<WaveFunction> states;
    double max_leakage = 0.0;
    bool leakage_warning = false;

    double record_dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

namespace detail {

// Fraction of the norm sitting in the outermost 5% of points at each edge.
inline double boundary_leakage(const WaveFunction& psi) {
    const std::size_t n = psi.grid.n_points;
    const std::size_t band = std::max<std::size_t>(1, n / 20);
    double outer = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::norm(psi.amplitudes[i]);
        total += w;
        if (i < band || i >= n - band) outer += w;
    }
    return total > 0.0 ? outer / total : 0.0;
}

inline void check_state(const WaveFunction& psi, std::size_t step, QuantumTrajectory& traj) {
    if (!psi.finite())
        throw numerical_error("evolve: non-finite amplitude at step " + std::to_string(step));
    const double leak = boundary_leakage(psi);
    traj.max_leakage = std::max(traj.max_leakage, leak);
    if (leak > 1e-3)
        throw numerical_error("evolve: boundary leakage " + std::to_string(leak) +
                              " exceeds 1e-3 at step " + std::to_string(step));
    if (leak > 1e-6) traj.leakage_warning = true;
}

// Thomas solve of a cyclic tridiagonal system with constant coefficients:
// diag b (varies per row), off-diagonals a (constant), corners a as well.
// Sherman-Morrison with one presolved correction vector.
class CyclicTridiagonal {
public:
    CyclicTridiagonal(std::vector<cplx> diag, cplx off) : b_(std::move(diag)), a_(off) {
        const std::size_t n = b_.size();
        gamma_ = -b_[0];
        bp_ = b_;
        bp_[0] -= gamma_;
        bp_[n - 1] -= a_ * a_ / gamma_;
        std::vector<cplx> u(n, cplx{0.0, 0.0});
        u[0] = gamma_;
        u[n - 1] = a_;
        z_ = solve_plain(u);
    }

    std::vector<cplx> solve(const std::vector<cplx>& r) const {
        const std::size_t n = b_.size();
        std::vector<cplx> x = solve_plain(r);
        const cplx num = x[0] + a_ * x[n - 1] / gamma_;
        const cplx den = 1.0 + z_[0] + a_ * z_[n - 1] / gamma_;
        const cplx fact = num / den;
        for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z_[i];
        return x;
    }

private:
    std::vector<cplx> solve_plain(const std::vector<cplx>& r) const {
        const std::size_t n = bp_.size();
        std::vector<cplx> x(n), scratch(n);
        cplx beta = bp_[0];
        x[0] = r[0] / beta;
        for (std::size_t i = 1; i < n; ++i) {
            scratch[i] = a_ / beta;
            beta = bp_[i] - a_ * scratch[i];
            x[i] = (r[i] - a_ * x[i - 1]) / beta;
        }
        for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i + 1] * x[i + 1];
        return x;
    }

    std::vector<cplx> b_, bp_, z_;
    cplx a_;
    cplx gamma_;
};

} // namespace detail

/// Strang-split evolution of i hbar dpsi/dt = (p^2/2m + V) psi: kinetic
/// half-step in momentum space, potential full step, kinetic half-step.
/// Adjacent kinetic half-steps are merged between unrecorded steps.
inline std::pair<WaveFunction, QuantumTrajectory> evolve_split_step(WaveFunction psi,
                                                                    const PotentialSpec& V,
                                                                    double mass,
                                                                    const EvolutionConfig& cfg) {
    const auto& grid = psi.grid;
    const std::size_t n = grid.n_points;
    const double dx = grid.dx();
    const double hbar = cfg.hbar;

    std::vector<cplx> half_kin(n), full_kin(n), pot_phase(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = fft::wavenumber(j, n, dx);
        const double ang = -hbar * k * k * cfg.dt / (4.0 * mass);
        half_kin[j] = {std::cos(ang), std::sin(ang)};
        full_kin[j] = {std::cos(2.0 * ang), std::sin(2.0 * ang)};
    }
    const auto v_samples = V.sample(grid);
    for (std::size_t i = 0; i < n; ++i) {
        const double ang = -v_samples[i] * cfg.dt / hbar;
        pot_phase[i] = {std::cos(ang), std::sin(ang)};
    }

    QuantumTrajectory traj;
    auto record = [&](std::size_t step) {
        detail::check_state(psi, step, traj);
        traj.times.push_back(static_cast<double>(step) * cfg.dt);
        traj.stats.push_back(moments(psi, V, mass, hbar));
        if (cfg.record_states) traj.states.push_back(psi);
    };
    record(0);

    auto mul = [&](const std::vector<cplx>& f) {
        for (std::size_t i = 0; i < n; ++i) psi.amplitudes[i] *= f[i];
    };

    bool in_momentum_space = false;
    for (std::size_t step = 1; step <= cfg.n_steps; ++step) {
        if (!in_momentum_space) {
            fft::forward(psi.amplitudes);
            mul(half_kin);
        } else {
            mul(full_kin); // merged trailing+leading kinetic half-steps
        }
        fft::inverse(psi.amplitudes);
        mul(pot_phase);
        fft::forward(psi.amplitudes);
        in_momentum_space = true;

        const bool rec = (step % cfg.record_every == 0) || step == cfg.n_steps;
        if (rec) {
            mul(half_kin);
            fft::inverse(psi.amplitudes);
            in_momentum_space = false;
            record(step);
        }
    }
    return {std::move(psi), std::move(traj)};
}

/// Crank-Nicolson evolution with the periodic finite-difference Laplacian;
/// an independent discretization used to cross-check the split-step kernel.
inline std::pair<WaveFunction, QuantumTrajectory> evolve_crank_nicolson(WaveFunction psi,
                                                                        const PotentialSpec& V,
                                                                        double mass,
                                                                        const EvolutionConfig& cfg) {
    const auto& grid = psi.grid;
    const std::size_t n = grid.n_points;
    const double dx = grid.dx();
    const double hbar = cfg.hbar;
    if (cfg.dt > 0.5 * mass * dx * dx / hbar)
        throw config_error("crank_nicolson: dt exceeds the 0.5*m*dx^2/hbar accuracy margin");

    const double kin = hbar * hbar / (2.0 * mass * dx * dx);
    const auto v_samples = V.sample(grid);
    const cplx itheta{0.0, cfg.dt / (2.0 * hbar)};

    // A psi(t+dt) = B psi(t), A = 1 + i dt H / (2 hbar), B its conjugate stencil.
    std::vector<cplx> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = 1.0 + itheta * (2.0 * kin + v_samples[i]);
    const cplx off = itheta * (-kin);
    detail::CyclicTridiagonal solver(diag, off);

    QuantumTrajectory traj;
    auto record = [&](std::size_t step) {
        detail::check_state(psi, step, traj);
        traj.times.push_back(static_cast<double>(step) * cfg.dt);
        traj.stats.push_back(moments(psi, V, mass, hbar));
        if (cfg.record_states) traj.states.push_back(psi);
    };
    record(0);

    std::vector<cplx> rhs(n);
    for (std::size_t step = 1; step <= cfg.n_steps; ++step) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx left = psi.amplitudes[(i + n - 1) % n];
            const cplx right = psi.amplitudes[(i + 1) % n];
            rhs[i] = psi.amplitudes[i] - itheta * (2.0 * kin * psi.amplitudes[i] -
                                                   kin * (left + right) +
                                                   v_samples[i] * psi.amplitudes[i]);
        }
        psi.amplitudes = solver.solve(rhs);
        if (step % cfg.record_every == 0 || step == cfg.n_steps) record(step);
    }
    return {std::move(psi), std::move(traj)};
}

/// Time evolution dispatcher; validates the shared preconditions.
inline std::pair<WaveFunction, QuantumTrajectory> evolve(const WaveFunction& psi0,
                                                         const PotentialSpec& V, double mass,
                                                         const EvolutionConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw config_error("evolve: dt must be positive");
    if (cfg.record_every < 1) throw config_error("evolve: record_every must be >= 1");
    if (cfg.n_steps % cfg.record_every != 0)
        throw config_error("evolve: n_steps must be a multiple of record_every");
    if (!(mass > 0.0)) throw config_error("evolve: mass must be positive");
    const double n2 = psi0.norm2();
    if (std::abs(n2 - 1.0) > 1e-6)
        throw config_error("evolve: initial state must be normalized");
    switch (cfg.method) {
        case Method::split_step: return evolve_split_step(psi0, V, mass, cfg);
        case Method::crank_nicolson: return evolve_crank_nicolson(psi0, V, mass, cfg);
    }
    throw config_error("evolve: unknown method");
}

/// Time for a free Gaussian packet of initial size a to reach total width
/// 2a: the positive root of a(t) = 2a, i.e. (sqrt(3)/2) m a^2 / hbar.
inline double doubling_time(double mass, double a, double hbar = 1.0) {
    if (!(mass > 0.0) || !(a > 0.0))
        throw config_error("doubling_time: mass and width must be positive");
    return 0.5 * std::sqrt(3.0) * mass * a * a / hbar;
}

struct SpreadResult {
    double width = 0.0;           // a(t) = sqrt(a^2 + 4 hbar^2 t^2 / (m^2 a^2))
    bool asymptotic_branch = false; // true once 2 hbar t / (m a^2) > 10
};

/// Free-packet width after time t, with the large-t branch flagged where
/// a(t) ~ 2 hbar t / (m a).
inline SpreadResult asymptotic_spread(double mass, double a, double t, double hbar = 1.0) {
    if (!(mass > 0.0) || !(a > 0.0))
        throw config_error("asymptotic_spread: mass and width must be positive");
    if (t < 0.0) throw config_error("asymptotic_spread: t must be non-negative");
    const double u = 2.0 * hbar * t / (mass * a * a);
    SpreadResult r;
    r.width = a * std::sqrt(1.0 + u * u);
    r.asymptotic_branch = u > 10.0;
    return r;
}

} // namespace qclab
