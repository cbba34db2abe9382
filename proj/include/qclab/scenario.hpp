#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qclab/classical.hpp"
#include "qclab/constants.hpp"
#include "qclab/errors.hpp"
#include "qclab/grid.hpp"
#include "qclab/potential.hpp"
#include "qclab/propagator.hpp"

namespace qclab {

/// Parsed scenario file: `key = value` lines grouped under `[section]`
/// headers, `#` comments, repeated keys collected in order. The format has
/// no expressions; every value is a literal.
class ScenarioConfig {
public:
    static ScenarioConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open scenario file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    static ScenarioConfig parse(const std::string& text, const std::string& origin = "<inline>") {
        ScenarioConfig cfg;
        cfg.origin_ = origin;
        std::istringstream in(text);
        std::string line, section;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw config_error(origin + ":" + std::to_string(lineno) +
                                       ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                cfg.sections_[section]; // ensure the section exists even if empty
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": expected key = value, got '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
            cfg.sections_[section].emplace_back(key, value);
        }
        return cfg;
    }

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    bool has(const std::string& section, const std::string& key) const {
        return find(section, key) != nullptr;
    }

    std::string get(const std::string& section, const std::string& key) const {
        const std::string* v = find(section, key);
        if (!v)
            throw config_error(origin_ + ": missing field '" + key + "' in section [" + section +
                               "]");
        return *v;
    }

    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        const std::string* v = find(section, key);
        return v ? *v : fallback;
    }

    double get_double(const std::string& section, const std::string& key) const {
        return to_double(get(section, key), section, key);
    }

    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const {
        const std::string* v = find(section, key);
        return v ? to_double(*v, section, key) : fallback;
    }

    std::size_t get_size(const std::string& section, const std::string& key) const {
        const double d = get_double(section, key);
        if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d)))
            throw config_error(origin_ + ": field '" + key + "' in [" + section +
                               "] must be a non-negative integer");
        return static_cast<std::size_t>(d);
    }

    std::size_t get_size_or(const std::string& section, const std::string& key,
                            std::size_t fallback) const {
        return has(section, key) ? get_size(section, key) : fallback;
    }

    /// All values of a repeated key, in file order.
    std::vector<std::string> get_all(const std::string& section, const std::string& key) const {
        std::vector<std::string> out;
        auto it = sections_.find(section);
        if (it == sections_.end()) return out;
        for (const auto& [k, v] : it->second)
            if (k == key) out.push_back(v);
        return out;
    }

    /// Whitespace-separated doubles in one value.
    std::vector<double> get_numbers(const std::string& section, const std::string& key) const {
        return split_numbers(get(section, key), section, key);
    }

    Vec3 get_vec3(const std::string& section, const std::string& key) const {
        const auto v = get_numbers(section, key);
        if (v.size() != 3)
            throw config_error(origin_ + ": field '" + key + "' in [" + section +
                               "] must hold exactly 3 numbers");
        return {v[0], v[1], v[2]};
    }

    std::vector<double> split_numbers(const std::string& text, const std::string& section,
                                      const std::string& key) const {
        std::vector<double> out;
        std::istringstream in(text);
        std::string tok;
        while (in >> tok) out.push_back(to_double(tok, section, key));
        return out;
    }

    const std::string& origin() const { return origin_; }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    const std::string* find(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        if (it == sections_.end()) return nullptr;
        for (const auto& [k, v] : it->second)
            if (k == key) return &v;
        return nullptr;
    }

    double to_double(const std::string& s, const std::string& section,
                     const std::string& key) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw config_error(origin_ + ": field '" + key + "' in [" + section +
                               "]: cannot parse number from '" + s + "'");
        }
    }

    std::string origin_;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

/// Builders shared by the scenario pipelines.
namespace build {

inline Grid1D grid(const ScenarioConfig& cfg, const std::string& section = "grid") {
    return Grid1D::make(cfg.get_double(section, "x_min"), cfg.get_double(section, "x_max"),
                        cfg.get_size(section, "n_points"));
}

inline GaussianPacketSpec packet(const ScenarioConfig& cfg, const std::string& section = "packet") {
    GaussianPacketSpec p;
    p.center = cfg.get_double(section, "center");
    p.momentum = cfg.get_double_or(section, "momentum", 0.0);
    p.width = cfg.get_double(section, "width");
    p.mass = cfg.get_double(section, "mass");
    return p;
}

inline PotentialSpec potential(const ScenarioConfig& cfg, const Grid1D& grid,
                               const std::string& section = "potential") {
    const std::string kind = cfg.get(section, "kind");
    if (kind == "free") return PotentialSpec::free();
    if (kind == "linear") return PotentialSpec::linear(cfg.get_double(section, "slope"));
    if (kind == "gravity_uniform")
        return PotentialSpec::gravity_uniform(cfg.get_double(section, "total_mass"),
                                              cfg.get_double(section, "g"));
    if (kind == "harmonic")
        return PotentialSpec::harmonic(cfg.get_double(section, "mass"),
                                       cfg.get_double(section, "omega"));
    if (kind == "softened_coulomb")
        return PotentialSpec::softened_coulomb(cfg.get_double(section, "strength"),
                                               cfg.get_double(section, "softening"),
                                               cfg.get_double_or(section, "center", 0.0));
    if (kind == "polynomial")
        return PotentialSpec::polynomial(cfg.get_numbers(section, "coefficients"));
    if (kind == "tabulated") {
        auto samples = cfg.get_numbers(section, "samples");
        return PotentialSpec::tabulated(std::move(samples), grid);
    }
    throw config_error("unknown potential kind '" + kind + "' in [" + section + "]");
}

inline EvolutionConfig evolution(const ScenarioConfig& cfg,
                                 const std::string& section = "evolution") {
    EvolutionConfig e;
    e.dt = cfg.get_double(section, "dt");
    e.n_steps = cfg.get_size(section, "n_steps");
    e.record_every = cfg.get_size_or(section, "record_every", 1);
    const std::string method = cfg.get_or(section, "method", "split_step");
    if (method == "split_step") e.method = Method::split_step;
    else if (method == "crank_nicolson") e.method = Method::crank_nicolson;
    else throw config_error("unknown evolution method '" + method + "'");
    e.record_states = cfg.get_or(section, "record_states", "false") == "true";
    return e;
}

inline std::optional<UnitSystem> units(const ScenarioConfig& cfg) {
    if (!cfg.has_section("units")) return std::nullopt;
    return UnitSystem(cfg.get_double("units", "length_scale"),
                      cfg.get_double("units", "mass_scale"));
}

} // namespace build

} // namespace qclab
