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

#include <boost/version.hpp>
#include <filesystem>
#include <iostream>
#include <new>
#include <optional>
#include <string>

#include <openssl/opensslv.h>

#include "../coherence.hpp"
#include "../ndf_estimators.hpp"
#include "../spectral.hpp"
#include "../stochastic.hpp"
#include "../wigner.hpp"
#include "csv.hpp"
#include "output.hpp"
#include "scenario.hpp"

namespace eit::io
{

inline constexpr std::string_view tool_version = "1.0.0";

namespace exit_code
{
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int io = 2;
inline constexpr int numerical = 3;
} // namespace exit_code

struct RunOptions
{
    std::optional<std::filesystem::path> out_dir; ///< overrides output.dir
    bool log_bits = false;                        ///< mutual information in bits instead of nats
    std::ostream *out = &std::cout;               ///< stdout-style results (the ndf task)
};

struct RunReport
{
    int exit_code = exit_code::ok;
    std::string diagnostic;
    std::filesystem::path out_dir;
    nlohmann::json results;
};

namespace detail
{
using nlohmann::json;

inline json scenario_echo(const Scenario &sc)
{
    json j = json::object();
    for (const auto &[key, st] : sc.settings)
        j[key] = {{"value", st.value}, {"default", st.from_default}};
    return j;
}

inline json units_note(const Scenario &sc)
{
    return {
        {"wavelength", sc.wc.wavelength},
        {"lengths", "wavelengths: y, z, s, xi and every length in the scenario are divided by lambda"},
        {"wavenumbers", "radians per wavelength: k_s and centroids are multiplied by lambda (beta = 2 pi)"},
        {"field_quantities",
         "sigma_n, lambda_n, CSD and WDF values use lengths in the unit of wave.lambda, unit source intensity"},
        {"mask", "0 ok, 1 near r1, 2 near source, 3 saturated, 4 failed"},
    };
}

inline json conventions(const RunOptions &opt)
{
    return {
        {"time_dependence", "exp(+j omega t)"},
        {"green_function", "exp(-j beta R) / (4 pi R)"},
        {"csd_prefactor", "1/(16 pi^2), from G G*"},
        {"observation_weights", "sqrt(weight) row scaling in continuous mode"},
        {"wdf_kernel", "exp(+j k ds), outgoing waves at k = +beta; Hann taper"},
        {"mutual_information_unit", opt.log_bits ? "bits" : "nats"},
        {"ndf_threshold", "lambda_n >= epsilon * lambda_1"},
    };
}

inline json point_json(const Point &p, double lambda) { return {{"y", p.y / lambda}, {"z", p.z / lambda}}; }

struct Pending
{
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::pair<std::string, CMatrix>> matrices;
    json results = json::object();
};

inline double nan() { return std::numeric_limits<double>::quiet_NaN(); }

inline void task_svd(const Scenario &sc, Pending &out)
{
    const auto obs = sc.observation();
    const auto src = sc.source_model();
    const auto a = build_radiation_matrix(obs, src, sc.wc);
    const auto dec = singular_decompose(a);
    CsvTable t({"n", "sigma_n", "lambda_n", "gap", "alignment"});
    std::vector<double> sq;
    for (Eigen::Index n = 0; n < dec.singular_values.size(); ++n)
    {
        const double s = dec.singular_values(n);
        sq.push_back(s * s);
        t.row({static_cast<double>(n + 1), s, s * s, nan(), nan()});
    }
    out.files.emplace_back("spectra.csv", t.str());
    if (sc.dump_matrix)
        out.matrices.emplace_back("radiation_matrix", a.entries);
    out.results = {{"rows", a.rows()},
                   {"cols", a.cols()},
                   {"sigma_1", dec.singular_values(0)},
                   {"ndf", ndf_from_spectrum(sq, sc.epsilon)},
                   {"epsilon", sc.epsilon}};
}

inline void task_equivalence(const Scenario &sc, Pending &out)
{
    const auto obs = sc.observation();
    const auto src = sc.source_model();
    const auto a = build_radiation_matrix(obs, src, sc.wc);
    const auto dec = singular_decompose(a);
    const CMatrix w = build_csd_matrix(obs, src, sc.wc);
    const auto eig = eigen_decompose(w);
    const auto rank = static_cast<std::size_t>(dec.singular_values.size());
    const std::size_t n_modes = std::min(sc.modes, rank);
    const auto rep = equivalence_report(dec, eig, n_modes);

    const double s1sq = dec.singular_values(0) * dec.singular_values(0);
    double max_gap = 0.0;
    CsvTable t({"n", "sigma_n", "lambda_n", "gap", "alignment"});
    for (std::size_t n = 0; n < rank; ++n)
    {
        const auto i = static_cast<Eigen::Index>(n);
        const double s = dec.singular_values(i), l = eig.eigenvalues(i);
        const double gap = std::abs(l - s * s) / s1sq;
        max_gap = std::max(max_gap, gap);
        t.row({static_cast<double>(n + 1), s, l, gap, n < n_modes ? rep.modes[n].alignment : nan()});
    }
    out.files.emplace_back("spectra.csv", t.str());
    if (sc.dump_matrix)
    {
        out.matrices.emplace_back("radiation_matrix", a.entries);
        out.matrices.emplace_back("csd_matrix", w);
    }
    std::vector<double> sq;
    for (Eigen::Index n = 0; n < dec.singular_values.size(); ++n)
        sq.push_back(dec.singular_values(n) * dec.singular_values(n));
    out.results = {{"max_gap", max_gap},
                   {"compared_modes", n_modes},
                   {"min_alignment", rep.min_alignment},
                   {"max_principal_angle", rep.max_principal_angle},
                   {"ndf_eigen", ndf_from_spectrum(eig.eigenvalues, sc.epsilon)},
                   {"ndf_svd", ndf_from_spectrum(sq, sc.epsilon)},
                   {"ndf_phase_space", ndf_phase_space(line_source_phase_space(sc.source, sc.wc))},
                   {"epsilon", sc.epsilon}};
}

inline void append_curve(CsvTable &t, const ObservationSet &c, double xi, double lambda,
                         const std::function<bool(const Point &)> &keep = {})
{
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!keep || keep(c.points[i]))
            t.row({c.arclength[i] / lambda, c.points[i].y / lambda, c.points[i].z / lambda, xi / lambda});
}

inline ObservationSet trace_any(double xi, const LineSource &src, double s_max, double ds)
{
    if (std::abs(std::abs(xi) - src.length()) <= 1e-12 * src.length())
        return trace_degenerate_ray(xi, src, s_max, ds);
    return trace_hyperbola(xi, src, s_max, ds);
}

inline void task_hyperbolas(const Scenario &sc, Pending &out)
{
    const double lambda = sc.wc.wavelength;
    CsvTable t({"s", "y", "z", "xi"});
    const auto family = q_xi_set(sc.source, sc.wc);
    for (double xi : family)
        append_curve(t, trace_any(xi, sc.source, sc.s_max, sc.ds), xi, lambda);
    out.files.emplace_back("hyperbolas.csv", t.str());
    json xis = json::array();
    for (double xi : family)
        xis.push_back(xi / lambda);
    out.results = {{"groups", family.size()}, {"xi", xis}, {"points", t.rows()}};
}

inline void require_shape(const Scenario &sc, std::initializer_list<ObservationShape> ok, const char *what)
{
    for (auto s : ok)
        if (sc.shape == s)
            return;
    const auto &st = sc.settings.at("observation.kind");
    throw ParseError(std::string("task '") + std::string(task_name(sc.task)) + "' needs " + what + ", got '" +
                         st.value + "'",
                     "observation.kind", st.line);
}

inline void task_map(const Scenario &sc, const RunOptions &opt, Pending &out)
{
    require_shape(sc, {ObservationShape::grid}, "observation.kind = grid");
    const double lambda = sc.wc.wavelength;
    const auto grid = sc.observation();
    const auto src = sc.source_model();
    const auto map = coherence_map(sc.r1, grid, src, sc.wc, sc.exclusion);

    CsvTable t({"y", "z", "abs_mu", opt.log_bits ? "mi_bits" : "mi_nats", "mask"});
    std::optional<CsvTable> csd;
    if (sc.task == Task::csd_map)
        csd.emplace(std::vector<std::string>{"y", "z", "w12_re", "w12_im", "intensity"});
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const auto &p = grid.points[i];
        const auto m = map.mask[i];
        const auto &s = map.samples[i];
        const bool has_mu = m == MapMask::ok || m == MapMask::saturated;
        const double mi = has_mu ? (opt.log_bits ? nats_to_bits(s.mi_nats) : s.mi_nats) : nan();
        t.row({p.y / lambda, p.z / lambda, has_mu ? std::abs(s.mu) : nan(), mi, static_cast<double>(m)});
        if (csd)
            csd->row({p.y / lambda, p.z / lambda, has_mu ? s.w12.real() : nan(), has_mu ? s.w12.imag() : nan(),
                      has_mu ? s.i2 : nan()});
    }

    // Q_xi family and the hyperbola through r1, clipped to the grid.
    const double xi_r1 = xi_of_point(sc.r1, sc.source);
    const double reach = std::hypot(std::max(std::abs(sc.y_min), std::abs(sc.y_max)), sc.z_max) + sc.source.length();
    const double step = 0.5 * std::min((sc.y_max - sc.y_min) / static_cast<double>(sc.ny - 1),
                                       (sc.z_max - sc.z_min) / static_cast<double>(sc.nz - 1));
    auto inside = [&](const Point &p) {
        return p.y >= sc.y_min && p.y <= sc.y_max && p.z >= sc.z_min && p.z <= sc.z_max;
    };
    CsvTable overlay({"s", "y", "z", "xi"});
    auto family = q_xi_set(sc.source, sc.wc);
    family.push_back(xi_r1);
    for (double xi : family)
        append_curve(overlay, trace_any(xi, sc.source, reach, step), xi, lambda, inside);

    out.files.emplace_back("map.csv", t.str());
    if (csd)
        out.files.emplace_back("csd.csv", csd->str());
    out.files.emplace_back("overlay.csv", overlay.str());

    out.results = {{"r1", point_json(sc.r1, lambda)},
                   {"xi_r1", xi_r1 / lambda},
                   {"points", grid.size()},
                   {"masked", map.masked_count()},
                   {"exclusion_radius", sc.exclusion / lambda}};
    if (const auto best = map.argmax_abs_mu())
    {
        const auto &p = grid.points[*best];
        out.results["argmax"] = {{"y", p.y / lambda},
                                 {"z", p.z / lambda},
                                 {"abs_mu", std::abs(map.samples[*best].mu)},
                                 {"xi", xi_of_point(p, sc.source) / lambda},
                                 {"within_one_cell_of_xi_r1",
                                  hyperbola_within_one_cell(grid, *best, xi_r1, sc.source)}};
    }
}

inline void task_wigner(const Scenario &sc, Pending &out)
{
    require_shape(sc, {ObservationShape::hyperbola, ObservationShape::arc}, "observation.kind = hyperbola or arc");
    const double lambda = sc.wc.wavelength;
    const auto curve = sc.observation();
    const auto src = sc.source_model();
    const auto map = wdf_along_curve(curve, src, sc.wc, sc.wigner);
    const auto marg = wdf_marginals(map);

    CsvTable t({"s", "k_s", "wdf"});
    CsvTable cols({"s", "centroid_k", "spread_k", "negative_mass", "truncated", "intensity"});
    for (std::size_t i = 0; i < map.s_values.size(); ++i)
    {
        for (std::size_t k = 0; k < map.k_values.size(); ++k)
            t.row({map.s_values[i] / lambda, map.k_values[k] * lambda,
                   map.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))});
        double c = nan(), sp = nan(), neg = nan();
        try
        {
            const auto cen = spectral_centroid(map, map.s_values[i]);
            c = cen.centroid * lambda;
            sp = cen.spread * lambda;
            neg = cen.negative_mass;
        }
        catch (const DomainError &)
        {
        }
        cols.row({map.s_values[i] / lambda, c, sp, neg, map.truncated[i] ? 1.0 : 0.0, marg.intensity_vs_s[i]});
    }
    out.files.emplace_back("wigner.csv", t.str());
    out.files.emplace_back("wigner_columns.csv", cols.str());

    // Outermost column whose lag window is complete.
    std::size_t far = map.s_values.size() - 1;
    while (far > 0 && map.truncated[far])
        --far;
    const auto last = spectral_centroid(map, map.s_values[far]);
    out.results = {{"columns", map.s_values.size()},
                   {"n_k", map.k_values.size()},
                   {"k_max", map.k_values.back() * lambda},
                   {"window_half_width", map.window_half_width / lambda},
                   {"taper", "hann"},
                   {"lag_step", map.lag_step / lambda},
                   {"max_imag_ratio", map.max_imag_ratio},
                   {"total_power", wdf_total_power(map)},
                   {"outer_column", {{"s", last.s / lambda}, {"centroid_over_beta", last.centroid / sc.wc.wavenumber}}}};
    if (sc.shape == ObservationShape::hyperbola)
        out.results["curve"] = {{"through", point_json(sc.through, lambda)},
                                {"xi", xi_of_point(sc.through, sc.source) / lambda}};
}

inline void task_ndf(const Scenario &sc, const RunOptions &opt, Pending &out)
{
    const double lambda = sc.wc.wavelength;
    json doc = {{"estimator", sc.ndf_estimator}};
    if (sc.ndf_estimator == "phase-space")
    {
        const auto d = line_source_phase_space(sc.source, sc.wc);
        doc["inputs"] = {{"source_length", sc.source.length() / lambda}, {"n_dims", d.n_dims}};
        doc["value"] = ndf_phase_space(d);
    }
    else if (sc.ndf_estimator == "sphere")
    {
        doc["inputs"] = {{"source_area", *sc.source_area / (lambda * lambda)}};
        doc["value"] = ndf_sphere(*sc.source_area, sc.wc);
    }
    else if (sc.ndf_estimator == "radiometric")
    {
        const auto e = ndf_radiometric(*sc.source_area, sc.omega_prime, sc.wc);
        doc["inputs"] = {{"source_area", e.source_area / (lambda * lambda)},
                         {"projected_solid_angle", e.projected_solid_angle}};
        doc["value"] = e.n_cells;
        doc["etendue"] = e.etendue / (lambda * lambda);
        doc["cell"] = e.cell / (lambda * lambda);
        doc["assumes_full_visibility"] = e.assumes_full_visibility;
    }
    else
    {
        const auto obs = sc.observation();
        const auto eig = eigen_decompose(build_csd_matrix(obs, sc.source_model(), sc.wc));
        doc["inputs"] = {{"source_length", sc.source.length() / lambda},
                         {"epsilon", sc.epsilon},
                         {"observation_points", obs.size()},
                         {"nodes_per_wavelength", sc.nodes_per_wavelength}};
        doc["value"] = ndf_from_spectrum(eig.eigenvalues, sc.epsilon);
    }
    *opt.out << doc.dump() << '\n';
    out.files.emplace_back("ndf.json", doc.dump(2) + "\n");
    out.results = doc;
}

inline void task_monte_carlo(const Scenario &sc, Pending &out)
{
    EnsembleConfig cfg;
    cfg.n_realizations = sc.realizations;
    cfg.seed = sc.seed;
    cfg.src = sc.source_model();
    cfg.obs = sc.observation();
    cfg.wc = sc.wc;
    const auto eig = eigen_decompose(build_csd_matrix(cfg.obs, cfg.src, cfg.wc));
    const std::size_t n = std::min(sc.mc_modes, static_cast<std::size_t>(eig.eigenvalues.size()));
    const CMatrix c = kl_coefficient_covariance(cfg, eig, n);
    const double m = static_cast<double>(cfg.n_realizations);

    CsvTable spec({"n", "lambda_empirical", "lambda_analytic"});
    CsvTable cov({"n", "m", "re", "im"});
    double worst_diag = 0.0, worst_off = 0.0;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
    {
        const double li = eig.eigenvalues(i);
        spec.row({static_cast<double>(i + 1), c(i, i).real(), li});
        worst_diag = std::max(worst_diag, std::abs(c(i, i).real() - li) / (li / std::sqrt(m)));
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
        {
            cov.row({static_cast<double>(i + 1), static_cast<double>(j + 1), c(i, j).real(), c(i, j).imag()});
            if (i != j)
                worst_off = std::max(worst_off, std::abs(c(i, j)) / std::sqrt(li * eig.eigenvalues(j) / m));
        }
    }
    out.files.emplace_back("mc_spectrum.csv", spec.str());
    out.files.emplace_back("kl_covariance.csv", cov.str());
    out.results = {{"realizations", cfg.n_realizations},
                   {"seed", cfg.seed},
                   {"rng_algorithm", std::string(rng_algorithm)},
                   {"modes", n},
                   {"max_diagonal_deviation_in_sigma", worst_diag},
                   {"max_offdiagonal_in_sigma", worst_off}};
}
} // namespace detail

/// Runs one scenario: computes, then writes every artifact and manifest.json into the
/// output directory. Never throws; failures are reported through the exit code.
inline RunReport run_scenario(const Scenario &sc, const RunOptions &opt = {})
{
    RunReport report;
    report.out_dir = opt.out_dir.value_or(std::filesystem::path(sc.output_dir));
    try
    {
        OutputDir dir(report.out_dir);
        detail::Pending pending;
        switch (sc.task)
        {
        case Task::svd:
            detail::task_svd(sc, pending);
            break;
        case Task::equivalence:
            detail::task_equivalence(sc, pending);
            break;
        case Task::hyperbolas:
            detail::task_hyperbolas(sc, pending);
            break;
        case Task::csd_map:
        case Task::mi_map:
            detail::task_map(sc, opt, pending);
            break;
        case Task::wigner:
            detail::task_wigner(sc, pending);
            break;
        case Task::ndf:
            detail::task_ndf(sc, opt, pending);
            break;
        case Task::monte_carlo:
            detail::task_monte_carlo(sc, pending);
            break;
        }

        for (const auto &[name, text] : pending.files)
            dir.write(name, text);
        for (const auto &[stem, m] : pending.matrices)
            dir.write_matrix(stem, m);

        nlohmann::json manifest = {
            {"tool", {{"name", "eit"}, {"version", std::string(tool_version)}}},
            {"task", std::string(task_name(sc.task))},
            {"scenario", detail::scenario_echo(sc)},
            {"units", detail::units_note(sc)},
            {"conventions", detail::conventions(opt)},
            {"results", pending.results},
            {"libraries",
             {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"boost", BOOST_LIB_VERSION},
              {"openssl", OPENSSL_VERSION_TEXT}}},
        };
        dir.write_manifest(manifest);
        report.results = std::move(pending.results);
    }
    catch (const ParseError &e)
    {
        report.exit_code = exit_code::usage;
        report.diagnostic = e.what();
    }
    catch (const IoError &e)
    {
        report.exit_code = exit_code::io;
        report.diagnostic = e.what();
    }
    catch (const Error &e)
    {
        report.exit_code = exit_code::numerical;
        report.diagnostic = e.what();
    }
    catch (const std::bad_alloc &)
    {
        report.exit_code = exit_code::numerical;
        report.diagnostic = "out of memory";
    }
    return report;
}

} // namespace eit::io
