// SPDX-License-Identifier: Apache-2.0
//
// eit-coherence: field degrees of freedom from radiation operators and cross-spectral densities
// Copyright (C) 2026 The eit-coherence authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "../geometry.hpp"
#include "../source_model.hpp"
#include "../wigner.hpp"

namespace eit::io
{

// Scenario files are flat "key = value" lines. A "[section]" header prefixes the keys
// that follow with "section."; keys may also be written dotted at any point. Comments
// start with '#' or ';'. All lengths are in wavelengths.

enum class Task
{
    svd,
    csd_map,
    mi_map,
    wigner,
    ndf,
    hyperbolas,
    monte_carlo,
    equivalence
};

inline constexpr std::string_view task_names[] = {"svd",        "csd-map",     "mi-map",      "wigner",
                                                  "ndf",        "hyperbolas",  "monte-carlo", "equivalence"};

inline std::string_view task_name(Task t) { return task_names[static_cast<std::size_t>(t)]; }

inline std::optional<Task> task_from_name(std::string_view s)
{
    for (std::size_t i = 0; i < std::size(task_names); ++i)
        if (task_names[i] == s)
            return static_cast<Task>(i);
    return std::nullopt;
}

/// One resolved configuration value: its text, the line it came from (0 for defaults).
struct Setting
{
    std::string value;
    std::size_t line = 0;
    bool from_default = true;
};

enum class ObservationShape
{
    arc,
    grid,
    hyperbola
};

struct Scenario
{
    Task task = Task::svd;
    WaveContext wc;

    LineSource source;
    IntensityProfile intensity;
    double nodes_per_wavelength = 20.0;
    QuadratureRule rule = QuadratureRule::gauss;

    ObservationShape shape = ObservationShape::arc;
    bool continuous = true;
    double radius = 0.0;
    std::size_t arc_points = 0;
    double y_min = 0.0, y_max = 0.0, z_min = 0.0, z_max = 0.0;
    std::size_t ny = 0, nz = 0;
    Point through;
    double s_max = 0.0, ds = 0.0;

    double epsilon = 1e-2;
    std::size_t modes = 20;

    Point r1;
    double exclusion = 0.0;

    WignerOptions wigner;

    std::string ndf_estimator;
    std::optional<double> source_area;
    double omega_prime = std::numbers::pi;

    std::size_t realizations = 0;
    std::uint64_t seed = 0;
    std::size_t mc_modes = 0;

    std::string output_dir;
    bool dump_matrix = false;

    /// Every known key with its effective value, for the manifest.
    std::map<std::string, Setting> settings;

    SourceModel source_model() const { return build_quadrature(source, intensity, wc, nodes_per_wavelength, rule); }

    ObservationSet observation() const
    {
        ObservationSet o;
        switch (shape)
        {
        case ObservationShape::arc:
            o = semicircular_arc(radius, arc_points);
            break;
        case ObservationShape::grid:
            o = planar_grid(y_min, y_max, ny, z_min, z_max, nz);
            break;
        case ObservationShape::hyperbola:
            o = trace_hyperbola(xi_of_point(through, source), source, s_max, ds);
            break;
        }
        return continuous ? o : o.as_point_set();
    }
};

namespace detail
{
struct KeySpec
{
    std::string_view name;
    std::string_view fallback; ///< default text; empty means "unset"
    bool required = false;
};

// clang-format off
inline constexpr KeySpec known_keys[] = {
    {"task", "", false},
    {"wave.lambda", "", true},
    {"source.length", "", true},
    {"source.intensity", "1", false},
    {"source.intensity_table", "", false},
    {"source.nodes_per_wavelength", "20", false},
    {"source.rule", "gauss", false},
    {"observation.kind", "auto", false},
    {"observation.mode", "continuous", false},
    {"observation.radius", "200", false},
    {"observation.points", "720", false},
    {"observation.y_min", "-40", false},
    {"observation.y_max", "40", false},
    {"observation.z_min", "1", false},
    {"observation.z_max", "80", false},
    {"observation.ny", "200", false},
    {"observation.nz", "200", false},
    {"observation.through_y", "20", false},
    {"observation.through_z", "16", false},
    {"observation.s_max", "300", false},
    {"observation.ds", "0.05", false},
    {"spectrum.epsilon", "0.01", false},
    {"spectrum.modes", "20", false},
    {"coherence.r1_y", "20", false},
    {"coherence.r1_z", "16", false},
    {"coherence.exclusion", "0.25", false},
    {"wigner.window_half_width", "8", false},
    {"wigner.n_k", "256", false},
    {"wigner.k_max_factor", "1.5", false},
    {"wigner.stride", "10", false},
    {"ndf.estimator", "phase-space", false},
    {"ndf.source_area", "", false},
    {"ndf.sphere_radius", "", false},
    {"ndf.omega_prime", "", false},
    {"ndf.theta_max_deg", "", false},
    {"monte_carlo.realizations", "10000", false},
    {"monte_carlo.seed", "1", false},
    {"monte_carlo.modes", "10", false},
    {"output.dir", "out", false},
    {"output.dump_matrix", "false", false},
};
// clang-format on

inline const KeySpec *find_key(std::string_view name)
{
    for (const auto &k : known_keys)
        if (k.name == name)
            return &k;
    return nullptr;
}

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Reader
{
public:
    explicit Reader(std::map<std::string, Setting> &s) : s_(s) {}

    const Setting &at(const std::string &key) const { return s_.at(key); }
    bool set(const std::string &key) const { return !s_.at(key).value.empty(); }
    bool given(const std::string &key) const { return !s_.at(key).from_default; }

    [[noreturn]] void fail(const std::string &key, const std::string &why) const
    {
        const auto &st = s_.at(key);
        std::string where = st.line ? "line " + std::to_string(st.line) + ": " : "default for ";
        throw ParseError(where + "'" + key + "': " + why, key, st.line);
    }

    double real(const std::string &key) const
    {
        const auto &v = at(key).value;
        double out = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
            fail(key, "expected a number, got '" + v + "'");
        return out;
    }

    double positive(const std::string &key) const
    {
        const double v = real(key);
        if (!(v > 0.0))
            fail(key, "must be positive");
        return v;
    }

    std::uint64_t integer(const std::string &key, std::uint64_t min_value = 0) const
    {
        const auto &v = at(key).value;
        std::uint64_t out = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size())
            fail(key, "expected a nonnegative integer, got '" + v + "'");
        if (out < min_value)
            fail(key, "must be at least " + std::to_string(min_value));
        return out;
    }

    bool boolean(const std::string &key) const
    {
        const auto &v = at(key).value;
        if (v == "true" || v == "yes" || v == "1")
            return true;
        if (v == "false" || v == "no" || v == "0")
            return false;
        fail(key, "expected true or false, got '" + v + "'");
    }

    std::string choice(const std::string &key, std::initializer_list<std::string_view> options) const
    {
        const auto &v = at(key).value;
        for (auto o : options)
            if (v == o)
                return v;
        std::string list;
        for (auto o : options)
            list += (list.empty() ? "" : ", ") + std::string(o);
        fail(key, "expected one of {" + list + "}, got '" + v + "'");
    }

    std::vector<double> real_list(const std::string &key) const
    {
        std::vector<double> out;
        std::string_view rest = at(key).value;
        while (!rest.empty())
        {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            double x = 0.0;
            const auto res = std::from_chars(item.data(), item.data() + item.size(), x);
            if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size())
                fail(key, "expected a comma-separated list of numbers");
            out.push_back(x);
            if (comma == std::string_view::npos)
                break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

private:
    std::map<std::string, Setting> &s_;
};
} // namespace detail

/// Parses and validates a scenario. task_hint is the CLI subcommand, if any; a task key
/// in the file must then agree with it.
inline Scenario parse_scenario(std::string_view text, std::optional<Task> task_hint = std::nullopt)
{
    Scenario sc;
    for (const auto &k : detail::known_keys)
        sc.settings[std::string(k.name)] = Setting{std::string(k.fallback), 0, true};

    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);)
    {
        ++line_no;
        auto line = detail::trim(raw);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF"))
            line = detail::trim(line.substr(3));
        if (line.empty() || line.front() == '#' || line.front() == ';')
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(line_no) + ": malformed section header", "", line_no);
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (section.empty())
                throw ParseError("line " + std::to_string(line_no) + ": empty section name", "", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'", "", line_no);
        const std::string name(detail::trim(line.substr(0, eq)));
        auto value = detail::trim(line.substr(eq + 1));
        if (const auto hash = value.find(" #"); hash != std::string_view::npos)
            value = detail::trim(value.substr(0, hash));
        if (name.empty())
            throw ParseError("line " + std::to_string(line_no) + ": missing key", "", line_no);
        const std::string key = section.empty() || name.find('.') != std::string::npos ? name : section + "." + name;
        if (!detail::find_key(key))
            throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", key, line_no);
        auto &st = sc.settings[key];
        if (!st.from_default)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' (first set on line " +
                                 std::to_string(st.line) + ")",
                             key, line_no);
        if (value.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty value for '" + key + "'", key, line_no);
        st = Setting{std::string(value), line_no, false};
    }

    for (const auto &k : detail::known_keys)
        if (k.required && sc.settings[std::string(k.name)].from_default)
            throw ParseError("missing required key '" + std::string(k.name) + "'", std::string(k.name), 0);

    detail::Reader r(sc.settings);

    // task
    if (r.given("task"))
    {
        const auto t = task_from_name(r.at("task").value);
        if (!t)
            r.fail("task", "unknown task '" + r.at("task").value + "'");
        if (task_hint && *task_hint != *t)
            r.fail("task", "file asks for '" + r.at("task").value + "' but the command is '" +
                               std::string(task_name(*task_hint)) + "'");
        sc.task = *t;
    }
    else if (task_hint)
    {
        sc.task = *task_hint;
        sc.settings["task"].value = std::string(task_name(*task_hint));
    }
    else
    {
        throw ParseError("missing required key 'task'", "task", 0);
    }

    const double lambda = r.positive("wave.lambda");
    sc.wc = WaveContext::from_wavelength(lambda);
    auto len = [&](const std::string &key) { return r.positive(key) * lambda; };
    auto coord = [&](const std::string &key) { return r.real(key) * lambda; };

    sc.source = LineSource::with_length(len("source.length"));
    if (r.set("source.intensity_table"))
    {
        if (r.given("source.intensity"))
            r.fail("source.intensity_table", "give either source.intensity or source.intensity_table, not both");
        auto table = r.real_list("source.intensity_table");
        for (double v : table)
            if (!(v >= 0.0))
                r.fail("source.intensity_table", "intensities must be nonnegative");
        sc.intensity = tabulated_intensity(std::move(table), sc.source);
    }
    else
    {
        const double level = r.real("source.intensity");
        if (!(level >= 0.0))
            r.fail("source.intensity", "must be nonnegative");
        sc.intensity = homogeneous_intensity(level);
    }
    sc.nodes_per_wavelength = r.positive("source.nodes_per_wavelength");
    if (sc.nodes_per_wavelength < 4.0)
        r.fail("source.nodes_per_wavelength", "at least 4 nodes per wavelength are required");
    sc.rule = r.choice("source.rule", {"gauss", "midpoint"}) == "gauss" ? QuadratureRule::gauss
                                                                         : QuadratureRule::midpoint;

    // observation
    std::string kind = r.choice("observation.kind", {"auto", "arc", "grid", "hyperbola"});
    if (kind == "auto")
    {
        switch (sc.task)
        {
        case Task::csd_map:
        case Task::mi_map:
            kind = "grid";
            break;
        case Task::wigner:
        case Task::hyperbolas:
            kind = "hyperbola";
            break;
        default:
            kind = "arc";
        }
        sc.settings["observation.kind"].value = kind;
    }
    sc.shape = kind == "arc" ? ObservationShape::arc : kind == "grid" ? ObservationShape::grid : ObservationShape::hyperbola;
    sc.continuous = r.choice("observation.mode", {"continuous", "points"}) == "continuous";
    sc.radius = len("observation.radius");
    sc.arc_points = r.integer("observation.points", 1);
    sc.y_min = coord("observation.y_min");
    sc.y_max = coord("observation.y_max");
    sc.z_min = coord("observation.z_min");
    sc.z_max = coord("observation.z_max");
    sc.ny = r.integer("observation.ny", 2);
    sc.nz = r.integer("observation.nz", 2);
    if (!(sc.y_max > sc.y_min))
        r.fail("observation.y_max", "must exceed observation.y_min");
    if (!(sc.z_max > sc.z_min))
        r.fail("observation.z_max", "must exceed observation.z_min");
    sc.through = yz(coord("observation.through_y"), coord("observation.through_z"));
    if (!(sc.through.z > 0.0))
        r.fail("observation.through_z", "must be positive");
    sc.s_max = len("observation.s_max");
    sc.ds = len("observation.ds");
    if (sc.ds >= sc.s_max)
        r.fail("observation.ds", "must be smaller than observation.s_max");

    sc.epsilon = r.positive("spectrum.epsilon");
    if (!(sc.epsilon < 1.0))
        r.fail("spectrum.epsilon", "must lie in (0, 1)");
    sc.modes = r.integer("spectrum.modes", 1);

    sc.r1 = yz(coord("coherence.r1_y"), coord("coherence.r1_z"));
    sc.exclusion = len("coherence.exclusion");

    sc.wigner.window_half_width = len("wigner.window_half_width");
    sc.wigner.n_k = r.integer("wigner.n_k", 2);
    sc.wigner.k_max_factor = r.positive("wigner.k_max_factor");
    sc.wigner.stride = r.integer("wigner.stride", 1);

    sc.ndf_estimator = r.choice("ndf.estimator", {"phase-space", "sphere", "radiometric", "eigen"});
    if (r.set("ndf.source_area") && r.set("ndf.sphere_radius"))
        r.fail("ndf.sphere_radius", "give either ndf.source_area or ndf.sphere_radius, not both");
    if (r.set("ndf.source_area"))
        sc.source_area = r.positive("ndf.source_area") * lambda * lambda;
    else if (r.set("ndf.sphere_radius"))
    {
        const double rad = len("ndf.sphere_radius");
        sc.source_area = 4.0 * std::numbers::pi * rad * rad;
    }
    if (r.set("ndf.omega_prime") && r.set("ndf.theta_max_deg"))
        r.fail("ndf.theta_max_deg", "give either ndf.omega_prime or ndf.theta_max_deg, not both");
    if (r.set("ndf.omega_prime"))
    {
        sc.omega_prime = r.real("ndf.omega_prime");
        if (!(sc.omega_prime >= 0.0 && sc.omega_prime <= std::numbers::pi))
            r.fail("ndf.omega_prime", "must lie in [0, pi]");
    }
    else if (r.set("ndf.theta_max_deg"))
    {
        const double deg = r.real("ndf.theta_max_deg");
        if (!(deg >= 0.0 && deg <= 90.0))
            r.fail("ndf.theta_max_deg", "must lie in [0, 90]");
        const double s = std::sin(deg * std::numbers::pi / 180.0);
        sc.omega_prime = std::numbers::pi * s * s;
    }
    if ((sc.ndf_estimator == "sphere" || sc.ndf_estimator == "radiometric") && !sc.source_area)
        r.fail("ndf.estimator", "estimator '" + sc.ndf_estimator + "' needs ndf.source_area or ndf.sphere_radius");

    sc.realizations = r.integer("monte_carlo.realizations", 2);
    sc.seed = r.integer("monte_carlo.seed");
    sc.mc_modes = r.integer("monte_carlo.modes", 1);

    sc.output_dir = r.at("output.dir").value;
    sc.dump_matrix = r.boolean("output.dump_matrix");
    return sc;
}

inline Scenario load_scenario(const std::filesystem::path &path, std::optional<Task> task_hint = std::nullopt)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot read scenario '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str(), task_hint);
}

} // namespace eit::io
