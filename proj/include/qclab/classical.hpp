#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qclab/errors.hpp"
#include "qclab/potential.hpp"

namespace qclab {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Positions, momenta and masses of a set of point bodies.
struct ClassicalState {
    std::vector<Vec3> positions;
    std::vector<Vec3> momenta;
    std::vector<double> masses;

    std::size_t size() const { return positions.size(); }

    void validate() const {
        if (positions.size() != momenta.size() || positions.size() != masses.size())
            throw config_error("ClassicalState: array lengths disagree");
        for (double m : masses)
            if (!(m > 0.0)) throw config_error("ClassicalState: masses must be positive");
    }

    Vec3 total_momentum() const {
        Vec3 p{};
        for (const auto& pi : momenta) p += pi;
        return p;
    }

    Vec3 center_of_mass() const {
        Vec3 r{};
        double m = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            r += positions[i] * masses[i];
            m += masses[i];
        }
        return r / m;
    }
};

/// Magnetic field map with an optional analytic gradient of (mu . B);
/// without one, a central-difference fallback is used.
struct BFieldMap {
    std::function<Vec3(const Vec3&)> field;
    // gradient[c] = partial of B components with respect to coordinate c.
    std::function<void(const Vec3&, Vec3 out[3])> jacobian;
};

enum class ForceKind {
    uniform_gravity,
    harmonic,
    point_mass,
    constant_electric,
    uniform_magnetic,
    magnetic_moment,
    potential_1d,
};

/// External force acting on every body of a state. EM fields use Gaussian
/// units: the magnetic force carries an explicit 1/c.
class ForceField {
public:
    /// F = -m g e_z.
    static ForceField uniform_gravity(double g) {
        ForceField f(ForceKind::uniform_gravity);
        f.s1_ = g;
        return f;
    }

    /// F = -m omega^2 r.
    static ForceField harmonic(double omega) {
        ForceField f(ForceKind::harmonic);
        f.s1_ = omega;
        return f;
    }

    /// F = -GM0 m (r - r0) / (|r - r0|^2 + s^2)^(3/2).
    static ForceField point_mass(double gm0, Vec3 r0, double softening = 0.0) {
        if (softening < 0.0) throw config_error("point_mass: softening must be >= 0");
        ForceField f(ForceKind::point_mass);
        f.s1_ = gm0;
        f.s2_ = softening;
        f.v1_ = r0;
        return f;
    }

    /// F = Q E.
    static ForceField constant_electric(double charge, Vec3 e_field) {
        ForceField f(ForceKind::constant_electric);
        f.s1_ = charge;
        f.v1_ = e_field;
        return f;
    }

    /// F = (Q/c) v x B; integrated with the Boris rotation.
    static ForceField uniform_magnetic(double charge, Vec3 b_field, double c = 1.0) {
        if (!(b_field.norm() > 0.0)) throw config_error("uniform_magnetic: |B| must be positive");
        ForceField f(ForceKind::uniform_magnetic);
        f.s1_ = charge;
        f.s2_ = c;
        f.v1_ = b_field;
        return f;
    }

    /// F = -grad(mu . B(r)).
    static ForceField magnetic_moment(Vec3 mu, BFieldMap map) {
        if (!map.field) throw config_error("magnetic_moment: field map is required");
        ForceField f(ForceKind::magnetic_moment);
        f.v1_ = mu;
        f.map_ = std::move(map);
        return f;
    }

    /// Motion along x under F = -dV/dx of a 1D potential: the classical
    /// twin of a quantum scenario, for side-by-side comparisons.
    static ForceField potential_1d(PotentialSpec v) {
        if (!v.has_derivative())
            throw config_error("potential_1d: potential needs an analytic derivative");
        ForceField f(ForceKind::potential_1d);
        f.pot_ = std::move(v);
        return f;
    }

    ForceKind kind() const { return kind_; }
    double charge() const { return s1_; }
    double light_speed() const { return s2_; }
    Vec3 b_field() const { return v1_; }

    Vec3 force(const Vec3& r, double mass, double initial_separation = 0.0) const {
        switch (kind_) {
            case ForceKind::uniform_gravity: return {0.0, 0.0, -mass * s1_};
            case ForceKind::harmonic: return r * (-mass * s1_ * s1_);
            case ForceKind::point_mass: {
                const Vec3 d = r - v1_;
                const double dist = d.norm();
                if ((s2_ > 0.0 && dist < 10.0 * s2_) ||
                    (initial_separation > 0.0 && dist < 1e-9 * initial_separation))
                    throw numerical_error("point_mass: trajectory approached the singularity, step rejected");
                const double r2 = d.dot(d) + s2_ * s2_;
                return d * (-s1_ * mass / (r2 * std::sqrt(r2)));
            }
            case ForceKind::constant_electric: return v1_ * s1_;
            case ForceKind::magnetic_moment: return magnetic_moment_force(v1_, map_, r);
            case ForceKind::potential_1d: return {-pot_.derivative(r.x), 0.0, 0.0};
            case ForceKind::uniform_magnetic:
                throw config_error("uniform_magnetic is velocity-dependent; integrate() handles it");
        }
        return {};
    }

    double potential(const Vec3& r, double mass) const {
        switch (kind_) {
            case ForceKind::uniform_gravity: return mass * s1_ * r.z;
            case ForceKind::harmonic: return 0.5 * mass * s1_ * s1_ * r.dot(r);
            case ForceKind::point_mass: {
                const Vec3 d = r - v1_;
                return -s1_ * mass / std::sqrt(d.dot(d) + s2_ * s2_);
            }
            case ForceKind::constant_electric: return -s1_ * v1_.dot(r);
            case ForceKind::uniform_magnetic: return 0.0; // magnetic force does no work
            case ForceKind::magnetic_moment: return v1_.dot(map_.field(r));
            case ForceKind::potential_1d: return pot_.value(r.x);
        }
        return 0.0;
    }

    Vec3 angular_momentum_center() const {
        return kind_ == ForceKind::point_mass ? v1_ : Vec3{};
    }

    /// F = -grad(mu . B): analytic Jacobian when supplied, otherwise
    /// central differences of the scalar mu . B.
    static Vec3 magnetic_moment_force(const Vec3& mu, const BFieldMap& map, const Vec3& r) {
        if (!map.field) throw config_error("magnetic_moment_force: gradient unavailable (no field map)");
        if (map.jacobian) {
            Vec3 db[3];
            map.jacobian(r, db);
            return {-mu.dot(db[0]), -mu.dot(db[1]), -mu.dot(db[2])};
        }
        const double h = 1e-6 * std::max(1.0, r.norm());
        auto scalar = [&](const Vec3& p) { return mu.dot(map.field(p)); };
        return {-(scalar({r.x + h, r.y, r.z}) - scalar({r.x - h, r.y, r.z})) / (2.0 * h),
                -(scalar({r.x, r.y + h, r.z}) - scalar({r.x, r.y - h, r.z})) / (2.0 * h),
                -(scalar({r.x, r.y, r.z + h}) - scalar({r.x, r.y, r.z - h})) / (2.0 * h)};
    }

private:
    explicit ForceField(ForceKind k) : kind_(k) {}

    ForceKind kind_;
    double s1_ = 0.0, s2_ = 0.0;
    Vec3 v1_{};
    BFieldMap map_{};
    PotentialSpec pot_ = PotentialSpec::free();
};

inline Vec3 magnetic_moment_force(const Vec3& mu, const BFieldMap& map, const Vec3& r) {
    return ForceField::magnetic_moment_force(mu, map, r);
}

/// Recorded states plus conserved-quantity logs.
struct ClassicalTrajectory {
    std::vector<double> times;
    std::vector<ClassicalState> states;
    std::vector<double> energies;
    std::vector<Vec3> angular_momenta; // about the field's natural center
    std::vector<Vec3> total_momenta;
};

namespace detail {

inline void record_classical(ClassicalTrajectory& traj, double t, const ClassicalState& s,
                             double energy, const Vec3& l_center) {
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.energies.push_back(energy);
    Vec3 l{};
    for (std::size_t i = 0; i < s.size(); ++i)
        l += (s.positions[i] - l_center).cross(s.momenta[i]);
    traj.angular_momenta.push_back(l);
    traj.total_momenta.push_back(s.total_momentum());
}

} // namespace detail

/// Velocity-Verlet (or Boris, for a uniform magnetic field) integration of
/// all bodies of a state under one external force field.
inline ClassicalTrajectory integrate(const ClassicalState& s0, const ForceField& field, double dt,
                                     std::size_t n_steps, std::size_t record_every = 1) {
    s0.validate();
    if (!(dt > 0.0)) throw config_error("integrate: dt must be positive");
    if (record_every < 1) throw config_error("integrate: record_every must be >= 1");

    ClassicalState s = s0;
    const std::size_t nb = s.size();
    ClassicalTrajectory traj;
    const Vec3 l_center = field.angular_momentum_center();

    double init_sep = 0.0;
    if (field.kind() == ForceKind::point_mass)
        for (const auto& r : s.positions)
            init_sep = std::max(init_sep, (r - field.angular_momentum_center()).norm());

    auto energy = [&]() {
        double e = 0.0;
        for (std::size_t i = 0; i < nb; ++i)
            e += s.momenta[i].dot(s.momenta[i]) / (2.0 * s.masses[i]) +
                 field.potential(s.positions[i], s.masses[i]);
        return e;
    };
    detail::record_classical(traj, 0.0, s, energy(), l_center);

    if (field.kind() == ForceKind::uniform_magnetic) {
        // Boris rotation: preserves |v| exactly for a pure magnetic force.
        const Vec3 b = field.b_field();
        for (std::size_t step = 1; step <= n_steps; ++step) {
            for (std::size_t i = 0; i < nb; ++i) {
                const double m = s.masses[i];
                const Vec3 t = b * (field.charge() * dt / (2.0 * m * field.light_speed()));
                const Vec3 v = s.momenta[i] / m;
                const Vec3 v_prime = v + v.cross(t);
                const Vec3 v_plus = v + v_prime.cross(t) * (2.0 / (1.0 + t.dot(t)));
                s.momenta[i] = v_plus * m;
                s.positions[i] += v_plus * dt;
            }
            if (step % record_every == 0 || step == n_steps)
                detail::record_classical(traj, static_cast<double>(step) * dt, s, energy(), l_center);
        }
        return traj;
    }

    std::vector<Vec3> f(nb);
    for (std::size_t i = 0; i < nb; ++i) f[i] = field.force(s.positions[i], s.masses[i], init_sep);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        for (std::size_t i = 0; i < nb; ++i) {
            s.momenta[i] += f[i] * (0.5 * dt);
            s.positions[i] += s.momenta[i] * (dt / s.masses[i]);
        }
        for (std::size_t i = 0; i < nb; ++i) {
            f[i] = field.force(s.positions[i], s.masses[i], init_sep);
            s.momenta[i] += f[i] * (0.5 * dt);
        }
        if (step % record_every == 0 || step == n_steps)
            detail::record_classical(traj, static_cast<double>(step) * dt, s, energy(), l_center);
    }
    return traj;
}

/// Gyration diagnostics measured from an actual Boris trajectory.
struct LorentzCheck {
    double cyclotron_freq = 0.0;  // measured, to compare with Q|B|/(M c)
    double radius = 0.0;          // measured orbit radius
    double max_speed_drift = 0.0; // max relative |v| change over the run
};

inline LorentzCheck lorentz_step_check(double charge, Vec3 b_field, Vec3 v0, double mass,
                                       double c = 1.0, double dt = 0.0) {
    if (!(b_field.norm() > 0.0)) throw config_error("lorentz_step_check: zero field");
    const double omega_scale = std::abs(charge) * b_field.norm() / (mass * c);
    if (dt <= 0.0) dt = 1e-3 / omega_scale;

    ClassicalState s;
    s.positions = {Vec3{}};
    s.momenta = {v0 * mass};
    s.masses = {mass};
    const auto field = ForceField::uniform_magnetic(charge, b_field, c);

    // One full revolution plus margin.
    const auto n_steps = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / (omega_scale * dt))) + 1;
    const auto traj = integrate(s, field, dt, n_steps, 1);

    const Vec3 b_hat = b_field / b_field.norm();
    auto perp = [&](const Vec3& v) { return v - b_hat * v.dot(b_hat); };

    const double speed0 = traj.states.front().momenta[0].norm() / mass;
    LorentzCheck out;
    double angle = 0.0;
    std::size_t steps_used = 0;
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const Vec3 va = perp(traj.states[i - 1].momenta[0]) / mass;
        const Vec3 vb = perp(traj.states[i].momenta[0]) / mass;
        if (va.norm() == 0.0 || vb.norm() == 0.0) break;
        angle += std::atan2(va.cross(vb).norm(), va.dot(vb));
        ++steps_used;
        const double speed = traj.states[i].momenta[0].norm() / mass;
        out.max_speed_drift = std::max(out.max_speed_drift, std::abs(speed - speed0) / speed0);
        if (angle >= 2.0 * std::numbers::pi) break;
    }
    if (steps_used == 0) { // v parallel to B: no gyration
        out.cyclotron_freq = 0.0;
        out.radius = 0.0;
        return out;
    }
    out.cyclotron_freq = angle / (static_cast<double>(steps_used) * dt);

    Vec3 center{};
    for (std::size_t i = 0; i <= steps_used; ++i) center += perp(traj.states[i].positions[0]);
    center = center / static_cast<double>(steps_used + 1);
    double radius = 0.0;
    for (std::size_t i = 0; i <= steps_used; ++i)
        radius += (perp(traj.states[i].positions[0]) - center).norm();
    out.radius = radius / static_cast<double>(steps_used + 1);
    return out;
}

/// Pairwise interaction law shared by all body pairs of a many-body system.
struct PairPotential {
    enum class Kind { gravity, spring } kind = Kind::gravity;
    double g_const = 1.0; // gravity: U = -G mi mj / r
    double stiffness = 1.0;
    double rest_length = 0.0; // spring: U = k (r - r0)^2 / 2

    double energy(double r, double mi, double mj) const {
        if (kind == Kind::gravity) return -g_const * mi * mj / r;
        const double d = r - rest_length;
        return 0.5 * stiffness * d * d;
    }

    // Magnitude of dU/dr; the force on body i is -(dU/dr) * unit(ri - rj).
    double dU_dr(double r, double mi, double mj) const {
        if (kind == Kind::gravity) return g_const * mi * mj / (r * r);
        return stiffness * (r - rest_length);
    }
};

struct ManyBodySystem {
    std::vector<double> masses;
    PairPotential pair;
};

/// Symplectic (velocity-Verlet) integration of the canonical equations for
/// S bodies with translation-invariant pair potentials. Pair forces are
/// accumulated antisymmetrically, so total momentum is conserved exactly.
inline ClassicalTrajectory canonical_many_body(const ManyBodySystem& sys, ClassicalState s,
                                               double dt, std::size_t n_steps,
                                               std::size_t record_every = 1) {
    s.validate();
    if (sys.masses.size() != s.size())
        throw config_error("canonical_many_body: system/state size mismatch");
    if (!(dt > 0.0)) throw config_error("canonical_many_body: dt must be positive");
    const std::size_t nb = s.size();

    double init_min_sep = 0.0;
    if (nb > 1) {
        init_min_sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = i + 1; j < nb; ++j)
                init_min_sep = std::min(init_min_sep, (s.positions[i] - s.positions[j]).norm());
    }

    auto forces = [&](std::vector<Vec3>& f) {
        for (auto& fi : f) fi = Vec3{};
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = i + 1; j < nb; ++j) {
                const Vec3 d = s.positions[i] - s.positions[j];
                const double r = d.norm();
                if (sys.pair.kind == PairPotential::Kind::gravity && r < 1e-9 * init_min_sep)
                    throw numerical_error("canonical_many_body: bodies collided, step rejected");
                const Vec3 fij = d * (-sys.pair.dU_dr(r, s.masses[i], s.masses[j]) / r);
                f[i] += fij;
                f[j] -= fij;
            }
    };
    auto energy = [&]() {
        double e = 0.0;
        for (std::size_t i = 0; i < nb; ++i) e += s.momenta[i].dot(s.momenta[i]) / (2.0 * s.masses[i]);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = i + 1; j < nb; ++j)
                e += sys.pair.energy((s.positions[i] - s.positions[j]).norm(), s.masses[i],
                                     s.masses[j]);
        return e;
    };

    ClassicalTrajectory traj;
    detail::record_classical(traj, 0.0, s, energy(), Vec3{});

    std::vector<Vec3> f(nb);
    forces(f);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        for (std::size_t i = 0; i < nb; ++i) {
            s.momenta[i] += f[i] * (0.5 * dt);
            s.positions[i] += s.momenta[i] * (dt / s.masses[i]);
        }
        forces(f);
        for (std::size_t i = 0; i < nb; ++i) s.momenta[i] += f[i] * (0.5 * dt);
        if (step % record_every == 0 || step == n_steps)
            detail::record_classical(traj, static_cast<double>(step) * dt, s, energy(), Vec3{});
    }
    return traj;
}

} // namespace qclab
