// SPDX-License-Identifier: Apache-2.0
//
// masc - Mars integrated sensing and communication simulation library
// Copyright (C) 2026 The masc authors
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

#include "masc/figures.hpp"
#include "masc/estimation_bounds.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace masc;

PYBIND11_MODULE(_masc, m)
{
    m.doc() = "MASC Mars ISAC simulation core";
    m.attr("__version__") = MASC_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<VisibilityError>(m, "VisibilityError", PyExc_ValueError);
    py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

    // config and figure runs
    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readwrite("master_seed", &ScenarioConfig::master_seed)
        .def_readwrite("mc_trials", &ScenarioConfig::mc_trials)
        .def_readwrite("estimation_trials", &ScenarioConfig::estimation_trials)
        .def_readonly("dust_preset", &ScenarioConfig::dust_preset)
        .def("canonical_text", [](const ScenarioConfig &c) { return canonical_config_text(c); })
        .def("hash", [](const ScenarioConfig &c) { return config_hash(c); });

    m.def("default_config", &default_config);
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_keys", &config_keys);
    m.def("figure_names", &figure_names);

    py::class_<OutputFile>(m, "OutputFile")
        .def_readonly("figure_id", &OutputFile::figure_id)
        .def_readonly("path", &OutputFile::path)
        .def_readonly("row_count", &OutputFile::row_count);
    py::class_<RunManifest>(m, "RunManifest")
        .def_readonly("config_hash", &RunManifest::config_hash)
        .def_readonly("tool_version", &RunManifest::tool_version)
        .def_readonly("master_seed", &RunManifest::master_seed)
        .def_readonly("outputs", &RunManifest::outputs)
        .def_readonly("flagged_rows", &RunManifest::flagged_rows)
        .def("json", &RunManifest::json);

    m.def(
        "run_figure",
        [](const std::string &figure, const ScenarioConfig &cfg, const std::string &out_dir, int workers)
        {
            RunOptions o;
            o.workers = workers;
            py::gil_scoped_release release;
            return run_figure(figure_from_string(figure), cfg, out_dir, o);
        },
        py::arg("figure"), py::arg("config"), py::arg("out_dir"), py::arg("workers") = 1);

    // propagation
    m.def("fspl_one_way", &fspl_one_way, py::arg("d"), py::arg("wavelength"));
    m.def("fspl_two_way", &fspl_two_way, py::arg("d"), py::arg("wavelength"));
    m.def(
        "dust_alpha_db_per_km", [](const std::string &preset, double lambda) { return dust_alpha(dust_preset(preset), lambda); },
        py::arg("preset"), py::arg("wavelength"));
    m.def("fresnel_reflection", &fresnel_reflection, py::arg("eps_r"), py::arg("theta_inc"));
    m.def(
        "upa_array_factor",
        [](double theta, double phi, double lambda, int n_h, int n_v, double spacing)
        {
            ArrayConfig a;
            a.n_h = n_h;
            a.n_v = n_v;
            a.spacing_h_m = a.spacing_v_m = spacing;
            return upa_array_factor(a, theta, phi, lambda);
        },
        py::arg("theta"), py::arg("phi"), py::arg("wavelength"), py::arg("n_h") = 8, py::arg("n_v") = 8,
        py::arg("spacing") = 0.075);
    m.def("orbital_period", [](double h) { OrbitConfig o; o.altitude_m = h; return orbital_period(o); }, py::arg("altitude_m") = 400e3);

    // mapping and bounds
    m.def("delta_alpha", &delta_alpha, py::arg("snr"), py::arg("kappa"));
    m.def("map_doppler_sens_to_comm", &map_doppler_sens_to_comm, py::arg("f_sens"), py::arg("v_rover_dot_u"), py::arg("wavelength"));
    m.def(
        "crlb_alpha",
        [](double snr, int n, double ell)
        {
            FimSpec s;
            s.snr_linear = snr;
            s.n_obs = n;
            s.path_len_ell = ell;
            return crlb_alpha(s);
        },
        py::arg("snr"), py::arg("n_obs"), py::arg("ell"));
    m.def(
        "crlb_doppler",
        [](double snr, int n, double window)
        {
            FimSpec s;
            s.snr_linear = snr;
            s.n_obs = n;
            s.obs_window_T_s = window;
            return crlb_doppler(s, true);
        },
        py::arg("snr"), py::arg("n_obs"), py::arg("window_s"));

    // optimisation kernels
    m.def("project_constant_modulus", &project_constant_modulus, py::arg("target"));
    m.def(
        "admm_capacity_covariance",
        [](const cmat &H, double p2, double sigma2) { return admm_capacity_covariance(H, p2, sigma2).R; },
        py::arg("H"), py::arg("p2"), py::arg("sigma2") = 1.0);
    m.def("capacity_logdet", &capacity_logdet, py::arg("H"), py::arg("W"), py::arg("p2"), py::arg("sigma2"));
    m.def(
        "pareto_front",
        [](const std::vector<std::pair<double, double>> &pts)
        {
            std::vector<ParetoPoint> v;
            for (size_t i = 0; i < pts.size(); ++i)
            {
                ParetoPoint p;
                p.eta_eff = pts[i].first;
                p.c_eff_bps_hz = pts[i].second;
                p.sweep_index = int(i);
                v.push_back(p);
            }
            std::vector<int> idx;
            for (const auto &p : prune_dominated(v))
                idx.push_back(p.sweep_index);
            return idx;
        },
        py::arg("points"), "Indices of the non-dominated (coverage, capacity) points, ascending coverage");
}
