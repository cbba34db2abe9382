// Scratch probes, round 3: acceptance-criterion-6 configuration.
#include <cstdio>
#include <cmath>
#include "qclab/grid.hpp"
#include "qclab/perturbation.hpp"
#include "qclab/propagator.hpp"
#include "qclab/ehrenfest.hpp"

using namespace qclab;

static double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int main() {
    // Hard box + V' = x^3 + x^2: F0 = 0 by parity, F1 and F2 nonzero,
    // remainder should be O(lambda^3).
    {
        auto g = Grid1D::make(-4.0, 4.0, 512);
        auto v0 = PotentialSpec::free();
        auto vp = PotentialSpec::polynomial({0.0, 0.0, 1.0, 1.0}); // x^2 + x^3
        auto spec = solve_spectrum(v0, 1.0, g, 64);
        auto series = build_series(spec, 0, v0, vp, 2);
        std::printf("box3: E0=%.9f F0=%.3e F1=%.6f F2=%.6f tails=%.1e,%.1e\n",
                    spec.eigenvalues[0], series.forces[0], series.forces[1], series.forces[2],
                    series.tail_share[0], series.tail_share[1]);
        std::vector<double> lams{1e-3, 1.78e-3, 3.16e-3, 5.62e-3, 1e-2}, rs;
        for (double lam : lams) {
            auto orc = oracle_exact(v0, vp, lam, 0, g, 1.0);
            rs.push_back(std::abs(orc.force - series.force(lam)));
            std::printf("  lam=%.3e F_or=%.9f F_series=%.9f R=%.3e\n", lam, orc.force,
                        series.force(lam), rs.back());
        }
        std::printf("box3 slope = %.3f  (runtime target: K=64)\n", fit_slope(lams, rs));
    }

    // Ehrenfest residual convergence order for harmonic, dense recording.
    {
        auto g = Grid1D::make(-16.0, 16.0, 256);
        const double m = 1.0;
        auto v = PotentialSpec::harmonic(m, 1.0);
        auto psi = make_gaussian({1.5, 0.0, std::sqrt(2.0), m}, g);
        std::vector<double> dts{4e-3, 2e-3, 1e-3}, r1s, r2s;
        for (double dt : dts) {
            EvolutionConfig cfg;
            cfg.dt = dt;
            cfg.n_steps = static_cast<std::size_t>(std::llround(2.0 / dt));
            cfg.record_every = 1;
            cfg.record_states = true;
            auto [pf, qt] = evolve(psi, v, m, cfg);
            auto r1 = verify_ehrenfest1(qt, m);
            auto r2 = verify_ehrenfest2(qt, v);
            double m1 = 0, m2 = 0;
            for (double x : r1) m1 = std::max(m1, std::abs(x));
            for (double x : r2) m2 = std::max(m2, std::abs(x));
            r1s.push_back(m1);
            r2s.push_back(m2);
            std::printf("  dt=%.0e max|res1|=%.3e max|res2|=%.3e\n", dt, m1, m2);
        }
        std::printf("orders: res1 %.3f res2 %.3f\n",
                    std::log(r1s[0] / r1s[2]) / std::log(4.0),
                    std::log(r2s[0] / r2s[2]) / std::log(4.0));
    }

    // Softened coulomb residual order.
    {
        auto g = Grid1D::make(-30.0, 30.0, 512);
        const double m = 1.0;
        auto v = PotentialSpec::softened_coulomb(5.0, 1.0, 0.0);
        auto psi = make_gaussian({3.0, 0.0, 2.0, m}, g);
        std::vector<double> dts{4e-3, 2e-3, 1e-3}, r2s;
        for (double dt : dts) {
            EvolutionConfig cfg;
            cfg.dt = dt;
            cfg.n_steps = static_cast<std::size_t>(std::llround(2.0 / dt));
            cfg.record_every = 1;
            cfg.record_states = true;
            auto [pf, qt] = evolve(psi, v, m, cfg);
            auto r2 = verify_ehrenfest2(qt, v);
            double m2 = 0;
            for (double x : r2) m2 = std::max(m2, std::abs(x));
            r2s.push_back(m2);
            std::printf("  dt=%.0e max|res2|=%.3e\n", dt, m2);
        }
        std::printf("coulomb res2 order: %.3f\n", std::log(r2s[0] / r2s[2]) / std::log(4.0));
    }

    // Free/linear: residual at machine floor for all dt.
    {
        auto g = Grid1D::make(-24.0, 24.0, 512);
        const double m = 1.0;
        auto v = PotentialSpec::linear(0.5);
        auto psi = make_gaussian({0.0, 1.0, 1.0, m}, g);
        for (double dt : {4e-3, 1e-3}) {
            EvolutionConfig cfg;
            cfg.dt = dt;
            cfg.n_steps = static_cast<std::size_t>(std::llround(2.0 / dt));
            cfg.record_every = 1;
            cfg.record_states = true;
            auto [pf, qt] = evolve(psi, v, m, cfg);
            auto r1 = verify_ehrenfest1(qt, m);
            auto r2 = verify_ehrenfest2(qt, v);
            double m1 = 0, m2 = 0;
            for (double x : r1) m1 = std::max(m1, std::abs(x));
            for (double x : r2) m2 = std::max(m2, std::abs(x));
            std::printf("  linear dt=%.0e res1=%.3e res2=%.3e\n", dt, m1, m2);
        }
    }
    return 0;
}
