#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "qclab/errors.hpp"
#include "qclab/grid.hpp"
#include "qclab/potential.hpp"

namespace qclab {

namespace detail {

// H = p^2/2m + V0 on the grid nodes with zero boundary values just outside
// the first and last node: a symmetric tridiagonal matrix with constant
// off-diagonal.
struct Tridiag {
    std::vector<double> diag;
    double off = 0.0;

    std::size_t size() const { return diag.size(); }
};

inline Tridiag grid_hamiltonian(const PotentialSpec& v0, const Grid1D& grid, double mass,
                                double hbar) {
    const double dx = grid.dx();
    const double kin = hbar * hbar / (2.0 * mass * dx * dx);
    const auto v = v0.sample(grid);
    Tridiag t;
    t.diag.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) t.diag[i] = 2.0 * kin + v[i];
    t.off = -kin;
    return t;
}

// Number of eigenvalues of T strictly below x (Sturm / LDL^T inertia count).
inline std::size_t sturm_count(const Tridiag& t, double x) {
    const double e2 = t.off * t.off;
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t count = 0;
    double q = t.diag[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < t.size(); ++i) {
        double denom = q;
        if (std::abs(denom) < tiny) denom = (denom < 0.0 ? -tiny : tiny);
        q = t.diag[i] - x - e2 / denom;
        if (q < 0.0) ++count;
    }
    return count;
}

// k-th (0-based) eigenvalue by bisection on the Sturm count. The fixed
// iteration count makes the result bit-stable for fixed inputs.
inline double eigenvalue_by_index(const Tridiag& t, std::size_t k) {
    double lo = t.diag[0], hi = t.diag[0];
    for (double d : t.diag) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    lo -= 2.0 * std::abs(t.off) + 1.0;
    hi += 2.0 * std::abs(t.off) + 1.0;
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sturm_count(t, mid) <= k) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Tridiagonal LU solve with partial pivoting (dgtsv-style, with a second
// superdiagonal for the row swaps). Solves (T - shift I) x = b in place.
inline void shifted_solve(const Tridiag& t, double shift, std::vector<double>& b) {
    const std::size_t n = t.size();
    std::vector<double> dl(n, t.off), d(n), du(n, t.off), du2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
    dl[0] = du[n - 1] = 0.0;

    const double tiny = 1e-300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i + 1])) {
            if (std::abs(d[i]) < tiny) d[i] = tiny;
            const double mult = dl[i + 1] / d[i];
            d[i + 1] -= mult * du[i];
            b[i + 1] -= mult * b[i];
            du2[i] = 0.0;
            dl[i + 1] = 0.0;
        } else {
            const double mult = d[i] / dl[i + 1];
            d[i] = dl[i + 1];
            const double tmp_d = d[i + 1];
            d[i + 1] = du[i] - mult * tmp_d;
            du2[i] = (i + 2 < n) ? du[i + 1] : 0.0;
            du[i] = tmp_d;
            if (i + 2 < n) du[i + 1] *= -mult;
            dl[i + 1] = 0.0;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= mult * b[i];
        }
    }
    if (std::abs(d[n - 1]) < tiny) d[n - 1] = tiny;
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 1; i-- > 1;) {
        std::size_t j = i - 1;
        b[j] = (b[j] - du[j] * b[j + 1] - du2[j] * b[j + 2]) / d[j];
    }
}

// Inverse iteration at the bisected eigenvalue; the nearly singular solve
// amplifies precisely the wanted eigenvector component.
inline std::vector<double> eigenvector_at(const Tridiag& t, double lambda) {
    const std::size_t n = t.size();
    std::vector<double> v(n);
    std::uint64_t lcg = 0x9e3779b97f4a7c15ull; // fixed seed: bit-stable output
    for (auto& x : v) {
        lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
        x = static_cast<double>(lcg >> 11) / 9007199254740992.0 - 0.5;
    }
    for (int pass = 0; pass < 3; ++pass) {
        shifted_solve(t, lambda, v);
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        for (auto& x : v) x /= nrm;
    }
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0)
        for (auto& x : v) x = -x;
    return v;
}

} // namespace detail

/// Lowest-K eigenpairs of the grid Hamiltonian. Eigenvectors are real and
/// normalized with the dx weight, so they are valid wave functions.
struct Spectrum {
    Grid1D grid;
    double mass = 1.0;
    double hbar = 1.0;
    std::vector<double> eigenvalues;              // ascending
    std::vector<std::vector<double>> eigenvectors; // [k][i], sum v^2 dx = 1
    double gap_min = 0.0;
    double spectral_width = 0.0;

    std::size_t n_states() const { return eigenvalues.size(); }

    WaveFunction state(std::size_t k) const {
        WaveFunction psi{grid, std::vector<cplx>(grid.n_points)};
        for (std::size_t i = 0; i < grid.n_points; ++i) psi.amplitudes[i] = eigenvectors[k][i];
        return psi;
    }
};

/// Diagonalize H0 = p^2/2m + V0 for the lowest n_states levels; rejects
/// near-degenerate spectra (nondegeneracy is a scope restriction, not a
/// numerical accident to be papered over).
inline Spectrum solve_spectrum(const PotentialSpec& v0, double mass, const Grid1D& grid,
                               std::size_t n_states, double hbar = 1.0) {
    if (!(mass > 0.0)) throw config_error("solve_spectrum: mass must be positive");
    if (n_states == 0) throw config_error("solve_spectrum: need at least one state");
    if (n_states > grid.n_points / 4)
        throw config_error("solve_spectrum: K must not exceed n_points/4");

    const auto t = detail::grid_hamiltonian(v0, grid, mass, hbar);
    Spectrum s;
    s.grid = grid;
    s.mass = mass;
    s.hbar = hbar;
    s.eigenvalues.resize(n_states);
    s.eigenvectors.resize(n_states);

    const double inv_sqrt_dx = 1.0 / std::sqrt(grid.dx());
    for (std::size_t k = 0; k < n_states; ++k) {
        s.eigenvalues[k] = detail::eigenvalue_by_index(t, k);
        auto v = detail::eigenvector_at(t, s.eigenvalues[k]);
        for (auto& x : v) x *= inv_sqrt_dx;
        s.eigenvectors[k] = std::move(v);
    }

    // One modified Gram-Schmidt pass tightens orthogonality to round-off.
    const double dx = grid.dx();
    for (std::size_t k = 0; k < n_states; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            double ov = 0.0;
            for (std::size_t i = 0; i < grid.n_points; ++i)
                ov += s.eigenvectors[k][i] * s.eigenvectors[j][i];
            ov *= dx;
            for (std::size_t i = 0; i < grid.n_points; ++i)
                s.eigenvectors[k][i] -= ov * s.eigenvectors[j][i];
        }
        double nrm = 0.0;
        for (double x : s.eigenvectors[k]) nrm += x * x;
        nrm = std::sqrt(nrm * dx);
        for (auto& x : s.eigenvectors[k]) x /= nrm;
    }

    s.spectral_width = s.eigenvalues.back() - s.eigenvalues.front();
    s.gap_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n_states; ++k)
        s.gap_min = std::min(s.gap_min, s.eigenvalues[k] - s.eigenvalues[k - 1]);
    if (n_states > 1 && s.gap_min <= 1e-8 * s.spectral_width)
        throw config_error("solve_spectrum: near-degenerate spectrum (gap " +
                           std::to_string(s.gap_min) + "), outside this method's scope");
    return s;
}

/// The three first-order force pieces, reported separately: which of them
/// vanish depends on the parity of V0, V' and the target state.
struct Force1Breakdown {
    double dvprime_term = 0.0;     // -<psi0| dV'/dx |psi0>
    double dv0_cross_right = 0.0;  // -<psi0| dV0/dx |psi1>
    double dv0_cross_left = 0.0;   // -<psi1| dV0/dx |psi0>

    double total() const { return dvprime_term + dv0_cross_right + dv0_cross_left; }
};

struct PerturbationOptions {
    bool strict_truncation = false; // escalate the basis-tail guard to an error
    double tail_tolerance = 1e-6;
};

/// Energy corrections eps_L, wave-function corrections psi^(L) in the |k>
/// basis, and Ehrenfest force corrections F^(L), for H = H0 + lambda V'.
struct PerturbationSeries {
    std::size_t target_level = 0;
    std::size_t order_max = 0;
    std::vector<double> epsilons;                  // eps_1 .. eps_Lmax
    std::vector<std::vector<double>> coefficients; // <k|psi^(L)>, L = 1 .. Lmax
    std::vector<double> forces;                    // F^(0) .. F^(Lmax)
    Force1Breakdown f1;
    std::vector<double> tail_share; // top-10%-of-basis share per order
    bool truncation_warning = false;

    double energy(double lambda, double e0) const {
        double e = e0, lam = 1.0;
        for (double eps : epsilons) {
            lam *= lambda;
            e += lam * eps;
        }
        return e;
    }

    double force(double lambda) const {
        double f = 0.0, lam = 1.0;
        for (double fl : forces) {
            f += lam * fl;
            lam *= lambda;
        }
        return f;
    }
};

inline PerturbationSeries build_series(const Spectrum& spec, std::size_t n,
                                       const PotentialSpec& v0, const PotentialSpec& vprime,
                                       std::size_t order_max,
                                       const PerturbationOptions& opts = {}) {
    const std::size_t kk = spec.n_states();
    if (n >= kk) throw config_error("build_series: target level outside computed spectrum");
    if (!vprime.has_derivative() || !v0.has_derivative())
        throw config_error("build_series: potentials must have analytic derivatives");

    const auto& grid = spec.grid;
    const double dx = grid.dx();
    const std::size_t npts = grid.n_points;

    // Matrix elements W[a][b] = <a|V'|b> over the K included states.
    std::vector<double> vp(npts), dv0(npts), dvp(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        const double x = grid.x(i);
        vp[i] = vprime.value(x);
        dv0[i] = v0.derivative(x);
        dvp[i] = vprime.derivative(x);
    }
    std::vector<std::vector<double>> w(kk, std::vector<double>(kk));
    for (std::size_t a = 0; a < kk; ++a)
        for (std::size_t b = a; b < kk; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < npts; ++i)
                s += spec.eigenvectors[a][i] * vp[i] * spec.eigenvectors[b][i];
            w[a][b] = w[b][a] = s * dx;
        }

    PerturbationSeries out;
    out.target_level = n;
    out.order_max = order_max;

    // c[L][k] = <k|psi^(L)>; c[0] is the unperturbed unit vector.
    std::vector<std::vector<double>> c(order_max + 1, std::vector<double>(kk, 0.0));
    c[0][n] = 1.0;

    const std::size_t tail_start = kk - std::max<std::size_t>(1, kk / 10);
    for (std::size_t order = 1; order <= order_max; ++order) {
        // eps_L = <psi0|V'|psi^(L-1)>
        double eps = 0.0;
        for (std::size_t j = 0; j < kk; ++j) eps += w[n][j] * c[order - 1][j];
        out.epsilons.push_back(eps);

        for (std::size_t k = 0; k < kk; ++k) {
            if (k == n) continue; // primed sum: the k = n coefficient stays zero
            double num = 0.0;
            for (std::size_t j = 0; j < kk; ++j) num += w[k][j] * c[order - 1][j];
            for (std::size_t m = 1; m < order; ++m) num -= out.epsilons[m - 1] * c[order - m][k];
            c[order][k] = num / (spec.eigenvalues[n] - spec.eigenvalues[k]);
        }

        double head = 0.0, tail = 0.0;
        for (std::size_t k = 0; k < kk; ++k) {
            const double q = c[order][k] * c[order][k];
            head += q;
            if (k >= tail_start) tail += q;
        }
        const double share = head > 0.0 ? tail / head : 0.0;
        out.tail_share.push_back(share);
        if (share > opts.tail_tolerance) {
            if (opts.strict_truncation)
                throw config_error("build_series: basis truncation tail " + std::to_string(share) +
                                   " exceeds tolerance at order " + std::to_string(order));
            out.truncation_warning = true;
        }
        out.coefficients.push_back(c[order]);
    }

    // Position-space corrections for the force matrix elements.
    std::vector<std::vector<double>> u(order_max + 1, std::vector<double>(npts, 0.0));
    for (std::size_t i = 0; i < npts; ++i) u[0][i] = spec.eigenvectors[n][i];
    for (std::size_t order = 1; order <= order_max; ++order)
        for (std::size_t k = 0; k < kk; ++k)
            if (c[order][k] != 0.0)
                for (std::size_t i = 0; i < npts; ++i)
                    u[order][i] += c[order][k] * spec.eigenvectors[k][i];

    auto bracket = [&](const std::vector<double>& a, const std::vector<double>& g,
                       const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < npts; ++i) s += a[i] * g[i] * b[i];
        return s * dx;
    };

    for (std::size_t order = 0; order <= order_max; ++order) {
        double f = 0.0;
        for (std::size_t m = 0; m <= order; ++m) f -= bracket(u[m], dv0, u[order - m]);
        for (std::size_t m = 0; m + 1 <= order; ++m) f -= bracket(u[m], dvp, u[order - m - 1]);
        out.forces.push_back(f);
    }
    if (order_max >= 1) {
        out.f1.dvprime_term = -bracket(u[0], dvp, u[0]);
        out.f1.dv0_cross_right = -bracket(u[0], dv0, u[1]);
        out.f1.dv0_cross_left = -bracket(u[1], dv0, u[0]);
    }
    return out;
}

/// eps_L for target level n (spec op wrapper).
inline double energy_correction(const Spectrum& spec, std::size_t n, const PotentialSpec& vprime,
                                std::size_t order, const PerturbationOptions& opts = {}) {
    if (order == 0) throw config_error("energy_correction: order must be >= 1");
    const auto series = build_series(spec, n, PotentialSpec::free(), vprime, order, opts);
    return series.epsilons[order - 1];
}

/// <k|psi^(L)> coefficient array for target level n.
inline std::vector<double> wavefunction_correction(const Spectrum& spec, std::size_t n,
                                                   const PotentialSpec& vprime, std::size_t order,
                                                   const PerturbationOptions& opts = {}) {
    if (order == 0) {
        std::vector<double> c(spec.n_states(), 0.0);
        c[n] = 1.0;
        return c;
    }
    const auto series = build_series(spec, n, PotentialSpec::free(), vprime, order, opts);
    return series.coefficients[order - 1];
}

/// F^(L) for target level n.
inline double force_correction(const Spectrum& spec, std::size_t n, const PotentialSpec& v0,
                               const PotentialSpec& vprime, std::size_t order,
                               const PerturbationOptions& opts = {}) {
    const auto series = build_series(spec, n, v0, vprime, order, opts);
    return series.forces[order];
}

/// Brute-force referee: full diagonalization of H0 + lambda V' with the
/// continued level found by overlap with the unperturbed state, not by
/// index.
struct OracleResult {
    double energy = 0.0;
    double force = 0.0;              // -<dV0/dx + lambda dV'/dx>
    double vprime_expectation = 0.0; // <V'>, for Hellmann-Feynman checks
    double overlap = 0.0;            // |<level(lambda)|n(0)>|
    std::vector<double> eigenvector; // dx-normalized
};

inline OracleResult oracle_exact(const PotentialSpec& v0, const PotentialSpec& vprime,
                                 double lambda, std::size_t n, const Grid1D& grid, double mass,
                                 double hbar = 1.0) {
    std::vector<double> samples(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        samples[i] = v0.value(x) + lambda * vprime.value(x);
    }
    const auto perturbed = PotentialSpec::tabulated(samples, grid);
    const auto t = detail::grid_hamiltonian(perturbed, grid, mass, hbar);

    const std::size_t track_window = n + 6;
    const double dx = grid.dx();
    const double inv_sqrt_dx = 1.0 / std::sqrt(dx);

    const auto reference = solve_spectrum(v0, mass, grid, n + 1, hbar);
    const auto& ref_vec = reference.eigenvectors[n];

    OracleResult best;
    for (std::size_t k = 0; k < track_window; ++k) {
        const double ev = detail::eigenvalue_by_index(t, k);
        auto v = detail::eigenvector_at(t, ev);
        for (auto& x : v) x *= inv_sqrt_dx;
        double ov = 0.0;
        for (std::size_t i = 0; i < grid.n_points; ++i) ov += v[i] * ref_vec[i];
        ov = std::abs(ov * dx);
        if (ov > best.overlap) {
            best.overlap = ov;
            best.energy = ev;
            best.eigenvector = std::move(v);
        }
    }
    if (best.overlap < 0.5)
        throw numerical_error("oracle_exact: level tracking lost (max overlap " +
                              std::to_string(best.overlap) + " < 0.5)");

    double f = 0.0, vp = 0.0;
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const double w = best.eigenvector[i] * best.eigenvector[i];
        f -= w * (v0.derivative(x) + lambda * vprime.derivative(x));
        vp += w * vprime.value(x);
    }
    best.force = f * dx;
    best.vprime_expectation = vp * dx;
    return best;
}

} // namespace qclab
