#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qclab/boundary.hpp"
#include "qclab/csv.hpp"
#include "qclab/errors.hpp"

namespace qclab {

struct BundledScenario {
    std::string name;
    std::string annotation;
    std::string text;
};

/// The shipped scenario set: one per study area, runnable as files via
/// export or directly by name.
inline const std::vector<BundledScenario>& bundled_scenarios() {
    static const std::vector<BundledScenario> list = {

        {"uncertainty-audit", "Heisenberg products for macroscopic position/momentum measurements",
         R"(schema_version = 1
[scenario]
name = uncertainty-audit
kind = heisenberg_audit
annotation = Heisenberg products for macroscopic position/momentum measurements

[audit]
# name  dx_m  dp_kg_m_per_s
case = rule-of-thumb 1e-6 1e-11
case = ligo-mirror 1e-18 4e-15

[ligo]
dx_m = 1e-18
dp_kg_m_s = 4e-15

[checks]
saturation_rel_tol = 1e-6
ligo_product_J_s = 4e-33
ligo_product_rel_tol = 1e-9
ligo_ratio = 80
ligo_ratio_rel_tol = 0.1
rule_of_thumb_ratio_min = 1e17
)"},

        {"free-diffusion-electron", "free wave-packet spreading against the closed-form width",
         R"(schema_version = 1
[scenario]
name = free-diffusion-electron
kind = quantum_spread
annotation = free wave-packet spreading against the closed-form width

[units]
# SI inputs below; internally everything is normalized so hbar = 1
length_scale = 1e-6
mass_scale = 9.109e-31

[grid]
x_min = -32e-6
x_max = 32e-6
n_points = 4096

[packet]
center = 0
momentum = 0
width = 1e-6
mass = 9.109e-31

[potential]
kind = free

[evolution]
method = split_step
dt = 3.74e-11
n_steps = 600
record_every = 10

[checks]
spread_rel_tol = 1e-4
leakage_tol = 1e-6
norm_tol = 1e-8
)"},

        {"doubling-times", "wave-packet doubling times across twelve decades of mass",
         R"(schema_version = 1
[scenario]
name = doubling-times
kind = doubling_times
annotation = wave-packet doubling times across twelve decades of mass

[cases]
# name  mass_kg  width_m  reference_s
case = electron 9.109e-31 1e-6 1e-8
case = hydrogen 1.6735e-27 1e-6 1e-5
case = one-gram 1e-3 1e-6 1e19

[checks]
factor_tol = 2
)"},

        {"ehrenfest-free", "Ehrenfest identities for a free packet",
         R"(schema_version = 1
[scenario]
name = ehrenfest-free
kind = correspondence
annotation = Ehrenfest identities for a free packet

[grid]
x_min = -24
x_max = 24
n_points = 512

[packet]
center = -4
momentum = 2
width = 1
mass = 4

[potential]
kind = free

[evolution]
method = split_step
dt = 1e-3
n_steps = 4000
record_every = 4

[checks]
max_deviation_span_frac = 1e-9
residual1_max = 1e-9
residual2_max = 1e-9
uncertainty_floor_violation_max = 1e-9
leakage_tol = 1e-6
)"},

        {"gravity-drop", "uniform gravity: quantum means against the Newton trajectory",
         R"(schema_version = 1
[scenario]
name = gravity-drop
kind = correspondence
annotation = uniform gravity: quantum means against the Newton trajectory

[grid]
x_min = -26
x_max = 26
n_points = 1024

[packet]
center = 10
momentum = 0
width = 1
mass = 20

[potential]
kind = gravity_uniform
total_mass = 20
g = 0.044

[evolution]
method = split_step
dt = 2e-3
n_steps = 15000
record_every = 100

[checks]
max_deviation_span_frac = 1e-6
residual1_max = 1e-6
residual2_max = 1e-6
uncertainty_floor_violation_max = 1e-9
leakage_tol = 1e-6
)"},

        {"harmonic-newton", "harmonic trap: quantum means against the Newton trajectory",
         R"(schema_version = 1
[scenario]
name = harmonic-newton
kind = correspondence
annotation = harmonic trap: quantum means against the Newton trajectory

[grid]
x_min = -20
x_max = 20
n_points = 512

[packet]
center = 2
momentum = 0
width = 1.4142135623730951
mass = 1

[potential]
kind = harmonic
mass = 1
omega = 1

[evolution]
method = split_step
dt = 1e-3
n_steps = 31400
record_every = 100

[checks]
max_deviation_span_frac = 1e-6
uncertainty_floor_violation_max = 1e-9
leakage_tol = 1e-6
)"},

        {"coulomb-deviation", "soft-Coulomb well, broad packet: correspondence breakdown",
         R"(schema_version = 1
[scenario]
name = coulomb-deviation
kind = correspondence
annotation = soft-Coulomb well, broad packet: correspondence breakdown

[grid]
x_min = -40
x_max = 40
n_points = 1024

[packet]
center = 3
momentum = 0
width = 2
mass = 1

[potential]
kind = softened_coulomb
strength = 5
softening = 1
center = 0

[evolution]
method = split_step
dt = 1e-3
n_steps = 20000
record_every = 200

[checks]
min_deviation_span_frac = 1e-3
leakage_tol = 1e-3
)"},

        {"constant-e-field", "charged body in a constant electric field",
         R"(schema_version = 1
[scenario]
name = constant-e-field
kind = correspondence
annotation = charged body in a constant electric field

[grid]
x_min = -30
x_max = 30
n_points = 512

[packet]
center = -6
momentum = 4
width = 1
mass = 8

[potential]
# V = Q E x for charge 2 in field 0.8
kind = linear
slope = 1.6

[evolution]
method = split_step
dt = 2e-3
n_steps = 6000
record_every = 50

[checks]
max_deviation_span_frac = 1e-6
residual1_max = 1e-7
residual2_max = 1e-7
uncertainty_floor_violation_max = 1e-9
leakage_tol = 1e-6
)"},

        {"lorentz-gyration", "cyclotron gyration under the Boris rotation",
         R"(schema_version = 1
[scenario]
name = lorentz-gyration
kind = lorentz_gyration
annotation = cyclotron gyration under the Boris rotation

[field]
charge = 1
b = 0 0 1
v0 = 1 0 0
mass = 1
c = 1

[checks]
freq_rel_tol = 1e-6
radius_rel_tol = 1e-6
speed_drift_tol = 1e-12
)"},

        {"magnetic-moment-force", "force on a magnetic moment in a field gradient",
         R"(schema_version = 1
[scenario]
name = magnetic-moment-force
kind = magnetic_moment
annotation = force on a magnetic moment in a field gradient

[moment]
mu = 0 0 0.6
field_gradient = 0.9

[checks]
force_abs_tol = 1e-12
fd_tol = 1e-9
)"},

        {"many-body-canonical", "three-body spring system: canonical conservation laws",
         R"(schema_version = 1
[scenario]
name = many-body-canonical
kind = many_body
annotation = three-body spring system: canonical conservation laws

[bodies]
# mass x y z px py pz
body = 1 1.0 0 0  0.3 0.1 0
body = 2 -0.5 0.8 0  -0.2 0.2 0.1
body = 3 0 -0.6 0.4  0.1 -0.3 0
pair_kind = spring
stiffness = 0.7
rest_length = 0

[evolution]
dt = 1e-3
n_steps = 50000
record_every = 500

[checks]
energy_rel_tol = 1e-6
l_rel_tol = 1e-6
p_abs_tol = 1e-12
)"},

        {"kepler-orbit", "two-body gravitational orbit: long-horizon conservation",
         R"(schema_version = 1
[scenario]
name = kepler-orbit
kind = classical_orbit
annotation = two-body gravitational orbit: long-horizon conservation

[bodies]
# mass x y z px py pz   (circular pair, period 4*pi)
body = 1 1 0 0  0 0.5 0
body = 1 -1 0 0  0 -0.5 0
pair_kind = gravity
g_const = 1

[evolution]
dt = 6.283185307179586e-4
n_steps = 400000
record_every = 1000

[checks]
energy_rel_tol = 1e-8
l_rel_tol = 1e-8
p_abs_tol = 1e-12
)"},

        {"multipole-expansion", "multipole expansion of a distant-mass potential",
         R"(schema_version = 1
[scenario]
name = multipole-expansion
kind = multipole_report
annotation = multipole expansion of a distant-mass potential

[body]
# mass x y z
constituent = 1.5 100.7 3.2 -1.1
constituent = 2.5 99.4 2.1 -2.6
constituent = 1.0 100.1 4.0 -2.2
constituent = 3.0 99.9 2.6 -1.4

[source]
g_m0 = 50
position = 0 0 0

[checks]
dipole_rel_tol = 1e-15
taylor_rel_tol = 1e-6
coefficient_factor_band = 1e-5
slope_band = 0.05
)"},

        {"tidal-sweep", "quadrupole tide on a spring-bound two-constituent body",
         R"(schema_version = 1
[scenario]
name = tidal-sweep
kind = tidal_sweep
annotation = quadrupole tide on a spring-bound two-constituent body

[body]
constituent = 1 60 0 0.5
constituent = 1 60 0 -0.5
spring_stiffness = 4

[source]
g_m0 = 2.16e6
position = 0 0 0

[internal_grid]
x_min = -12
x_max = 12
n_points = 512
n_states = 48

[sweep]
lambdas = 1e-3 1.78e-3 3.16e-3 5.62e-3 1e-2

[checks]
slope_min = 2.7
f1_parity_tol = 1e-10
deformation_slope_band = 0.05
)"},

        {"perturbation-lambda-sweep", "perturbation series against exact diagonalization",
         R"(schema_version = 1
[scenario]
name = perturbation-lambda-sweep
kind = perturbation_sweep
annotation = perturbation series against exact diagonalization

[spectrum_grid]
x_min = -4
x_max = 4
n_points = 512
n_states = 64
level = 0
mass = 1

[v0]
# hard box through the grid edges
kind = free

[vprime]
kind = polynomial
coefficients = 0 0 1 1

[sweep]
lambdas = 1e-3 1.78e-3 3.16e-3 5.62e-3 1e-2

[checks]
slope_min = 2.7
tail_tol = 1e-6
hf_tol = 1e-6
)"},

        {"boundary-temps", "quantum-classical boundary temperatures for cited experiments",
         R"(schema_version = 1
[scenario]
name = boundary-temps
kind = boundary_temps
annotation = quantum-classical boundary temperatures for cited experiments

[cards]
# built-in deck used when no cards are listed here

[checks]
within_factor = 2.1
rows_within_min = 3
anomalies_expected = 1
)"},
    };
    return list;
}

inline const BundledScenario* find_bundled(const std::string& name) {
    for (const auto& b : bundled_scenarios())
        if (b.name == name) return &b;
    return nullptr;
}

/// Write the bundled scenario files, the built-in card deck and the
/// reference-number set into a directory.
inline std::vector<std::string> export_reference(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    fs::create_directories(fs::path(dir) / "scenarios");

    for (const auto& b : bundled_scenarios()) {
        const auto path = (fs::path(dir) / "scenarios" / (b.name + ".scenario")).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw config_error("export_reference: cannot write " + path);
        out << b.text;
        written.push_back(path);
    }

    {
        const auto path = (fs::path(dir) / "boundary_cards.csv").string();
        CsvWriter csv(path, {"name", "nu_hz", "size", "n_constituents", "reference_k"});
        for (const auto& c : builtin_card_deck())
            csv.raw_row({c.name, format_double(c.frequency_hz), c.size_descriptor,
                         format_double(c.n_constituents),
                         format_double(c.reference_temperature_k)});
        written.push_back(path);
    }

    {
        const auto path = (fs::path(dir) / "reference_values.csv").string();
        CsvWriter csv(path, {"name", "value", "units", "note"});
        csv.raw_row({"hbar", format_double(si::hbar), "J s", "reduced Planck constant"});
        csv.raw_row({"planck", format_double(si::planck), "J s", "Planck constant"});
        csv.raw_row({"boltzmann", format_double(si::boltzmann), "J/K", "Boltzmann constant"});
        csv.raw_row({"newton_g", format_double(si::newton_g), "m^3 kg^-1 s^-2",
                     "gravitational constant"});
        csv.raw_row({"g_earth", format_double(si::g_earth), "m/s^2", "standard gravity"});
        csv.raw_row({"h_over_kB", format_double(si::planck_over_boltzmann), "K s",
                     "boundary-temperature coefficient"});
        csv.raw_row({"doubling-electron", "1e-8", "s",
                     "cited doubling time, electron packet of width 1 um"});
        csv.raw_row({"doubling-hydrogen", "1e-5", "s",
                     "cited doubling time, hydrogen packet of width 1 um"});
        csv.raw_row({"doubling-one-gram", "1e19", "s",
                     "cited doubling time, 1 g body, packet width 1 um"});
        csv.raw_row({"electron-spread-1s", "100", "m",
                     "cited 1-second free spread of a 1 um electron packet"});
        csv.raw_row({"ligo-product", "4e-26", "erg s",
                     "cited mirror uncertainty product"});
        csv.raw_row({"ligo-ratio", "80", "1",
                     "cited factor above the hbar/2 bound"});
        written.push_back(path);
    }
    return written;
}

} // namespace qclab
