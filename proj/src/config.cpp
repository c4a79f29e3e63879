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

#include "masc/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

namespace masc
{
    namespace
    {
        std::string fmt(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return "";
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        double to_double(const std::string &v)
        {
            size_t pos = 0;
            double x = std::stod(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument("trailing characters");
            return x;
        }

        long long to_int(const std::string &v)
        {
            size_t pos = 0;
            long long x = std::stoll(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument("trailing characters");
            return x;
        }

        struct Entry
        {
            std::function<void(ScenarioConfig &, const std::string &)> set;
            std::function<std::string(const ScenarioConfig &)> get;
        };

        template <class F>
        Entry real(F ref)
        {
            return {[ref](ScenarioConfig &c, const std::string &v) { ref(c) = to_double(v); },
                    [ref](const ScenarioConfig &c) { return fmt(ref(const_cast<ScenarioConfig &>(c))); }};
        }

        template <class F>
        Entry integer(F ref)
        {
            return {[ref](ScenarioConfig &c, const std::string &v) { ref(c) = std::remove_reference_t<decltype(ref(c))>(to_int(v)); },
                    [ref](const ScenarioConfig &c) { return std::to_string(ref(const_cast<ScenarioConfig &>(c))); }};
        }

#define MASC_REAL(expr) real([](ScenarioConfig &c) -> double & { return expr; })
#define MASC_INT(expr) integer([](ScenarioConfig &c) -> auto & { return expr; })

        const std::map<std::string, Entry> &registry()
        {
            static const std::map<std::string, Entry> r = []
            {
                std::map<std::string, Entry> m;
                m["orbit.altitude_m"] = MASC_REAL(c.scene.orbit.altitude_m);
                m["orbit.mars_radius_m"] = MASC_REAL(c.scene.orbit.mars_radius_m);
                m["orbit.mu_mars"] = MASC_REAL(c.scene.orbit.mu_mars);
                m["orbit.phase0_rad"] = MASC_REAL(c.scene.orbit.phase0_rad);

                m["array.n_h"] = MASC_INT(c.scene.array.n_h);
                m["array.n_v"] = MASC_INT(c.scene.array.n_v);
                m["array.spacing_h_m"] = MASC_REAL(c.scene.array.spacing_h_m);
                m["array.spacing_v_m"] = MASC_REAL(c.scene.array.spacing_v_m);
                m["array.n_rf"] = MASC_INT(c.scene.array.n_rf);
                m["array.element_gain_dbi"] = {
                    [](ScenarioConfig &c, const std::string &v)
                    {
                        c.scene.array.element_gain_dBi = to_double(v);
                        c.scene.array.max_gain_linear = db2lin(c.scene.array.element_gain_dBi);
                    },
                    [](const ScenarioConfig &c) { return fmt(c.scene.array.element_gain_dBi); }};

                m["radio.freq_hz"] = MASC_REAL(c.scene.radio.freq_hz);
                m["radio.bandwidth_hz"] = MASC_REAL(c.scene.radio.bandwidth_hz);
                m["radio.noise_figure_db"] = MASC_REAL(c.scene.radio.noise_figure_db);
                m["radio.noise_temp_k"] = MASC_REAL(c.scene.radio.noise_temp_k);
                m["radio.pulse_duration_s"] = MASC_REAL(c.scene.radio.pulse_duration_s);

                m["dust.preset"] = {
                    [](ScenarioConfig &c, const std::string &v)
                    {
                        DustScenario d = dust_preset(v);
                        d.eps_real = c.scene.dust.eps_real;
                        d.eps_imag = c.scene.dust.eps_imag;
                        d.mean_radius_m = c.scene.dust.mean_radius_m;
                        c.scene.dust = d;
                        c.dust_preset = v;
                    },
                    [](const ScenarioConfig &c) { return c.dust_preset; }};
                m["dust.permittivity"] = {
                    [](ScenarioConfig &c, const std::string &v)
                    {
                        apply_permittivity_preset(c.scene.dust, v);
                        c.permittivity_preset = v;
                    },
                    [](const ScenarioConfig &c) { return c.permittivity_preset; }};
                m["dust.density_per_m3"] = MASC_REAL(c.scene.dust.particle_density_per_m3);
                m["dust.layer_height_m"] = MASC_REAL(c.scene.dust.layer_height_m);
                m["dust.mean_radius_m"] = MASC_REAL(c.scene.dust.mean_radius_m);
                m["dust.eps_real"] = MASC_REAL(c.scene.dust.eps_real);
                m["dust.eps_imag"] = MASC_REAL(c.scene.dust.eps_imag);
                m["dust.d_max_m"] = MASC_REAL(c.scene.dust.d_max_m);
                m["dust.storm_radius_rad"] = MASC_REAL(c.scene.dust.storm_radius_rad);
                m["dust.storm_center_theta_rad"] = MASC_REAL(c.scene.dust.storm_center_theta_rad);
                m["dust.storm_center_phi_rad"] = MASC_REAL(c.scene.dust.storm_center_phi_rad);
                m["dust.background_fraction"] = MASC_REAL(c.scene.dust.background_fraction);

                m["ground.g0"] = MASC_REAL(c.scene.ground.g0_linear);
                m["ground.boresight_rad"] = MASC_REAL(c.scene.ground.boresight_rad);
                m["ground.directivity_n"] = MASC_REAL(c.scene.ground.directivity_n);
                m["ground.rcs_m2"] = MASC_REAL(c.scene.ground.rcs_m2);
                m["ground.central_angle_rad"] = MASC_REAL(c.scene.ground.central_angle_rad);
                m["ground.azimuth_rad"] = MASC_REAL(c.scene.ground.azimuth_rad);
                m["ground.velocity_x_mps"] = MASC_REAL(c.scene.ground.velocity_mps.x());
                m["ground.velocity_y_mps"] = MASC_REAL(c.scene.ground.velocity_mps.y());
                m["ground.velocity_z_mps"] = MASC_REAL(c.scene.ground.velocity_mps.z());

                m["terrain.n_paths"] = MASC_INT(c.terrain_paths);
                m["terrain.eps_r"] = MASC_REAL(c.terrain_eps_r);
                m["terrain.spread_rad"] = MASC_REAL(c.terrain_spread_rad);

                m["channel.wind_x_mps"] = MASC_REAL(c.scene.wind_mps.x());
                m["channel.wind_y_mps"] = MASC_REAL(c.scene.wind_mps.y());
                m["channel.wind_z_mps"] = MASC_REAL(c.scene.wind_mps.z());
                m["channel.sigma_mis2"] = MASC_REAL(c.scene.sigma_mis2);
                m["channel.l_other"] = MASC_REAL(c.scene.l_other);

                m["power.p1_w"] = MASC_REAL(c.pipeline.sensing.p1_w);
                m["power.p2_w"] = MASC_REAL(c.pipeline.robust.p2_w);

                m["thresholds.gamma_sens_db"] = {
                    [](ScenarioConfig &c, const std::string &v) { c.pipeline.sensing.gamma_sens_linear = db2lin(to_double(v)); },
                    [](const ScenarioConfig &c) { return fmt(lin2db(c.pipeline.sensing.gamma_sens_linear)); }};
                m["thresholds.gamma_comm"] = MASC_REAL(c.pipeline.robust.gamma_th_linear);
                m["thresholds.eps_out"] = MASC_REAL(c.pipeline.eps_out);

                m["sensing.max_iter"] = MASC_INT(c.pipeline.sensing.max_iter);
                m["sensing.delta"] = MASC_REAL(c.pipeline.sensing.delta);
                m["sensing.m_streams"] = MASC_INT(c.pipeline.sensing.m_streams);

                m["uncertainty.kappa"] = MASC_REAL(c.pipeline.uncertainty.kappa_scale);
                m["uncertainty.csi_level"] = MASC_REAL(c.pipeline.uncertainty.csi_uncertainty_level);

                m["robust.rho_leak"] = MASC_REAL(c.pipeline.robust.rho_leak);
                m["robust.beta_max"] = MASC_REAL(c.pipeline.robust.beta_max);
                m["robust.gamma_edge"] = MASC_REAL(c.pipeline.robust.gamma_edge);
                m["robust.omp_l"] = MASC_INT(c.pipeline.robust.omp_L);
                m["robust.admm_rho"] = MASC_REAL(c.pipeline.robust.admm.rho);
                m["robust.admm_max_iter"] = MASC_INT(c.pipeline.robust.admm.max_iter);
                m["robust.admm_eps"] = MASC_REAL(c.pipeline.robust.admm.eps_abs);

                m["estimation.n_obs"] = MASC_INT(c.pipeline.estimation.n_obs);
                m["estimation.window_s"] = MASC_REAL(c.pipeline.estimation.window_s);
                m["estimation.trials"] = MASC_INT(c.estimation_trials);

                m["frame.t_frame_s"] = MASC_REAL(c.frame.t_frame_s);
                m["frame.t_sens_min_s"] = MASC_REAL(c.frame.t_sens_min_s);
                m["frame.t_comm_max_s"] = MASC_REAL(c.frame.t_comm_max_s);

                m["sweep.eta_low"] = MASC_REAL(c.sweep.low);
                m["sweep.eta_high"] = MASC_REAL(c.sweep.high);
                m["sweep.eta_step"] = MASC_REAL(c.sweep.step);

                m["grid.n_theta"] = MASC_INT(c.pipeline.n_theta);
                m["grid.n_phi"] = MASC_INT(c.pipeline.n_phi);

                m["mc.trials"] = MASC_INT(c.mc_trials);
                m["mc.pareto_trials"] = MASC_INT(c.pipeline.n_mc);

                m["seed.master"] = {
                    [](ScenarioConfig &c, const std::string &v)
                    {
                        size_t pos = 0;
                        c.master_seed = std::stoull(v, &pos);
                        if (pos != v.size())
                            throw std::invalid_argument("trailing characters");
                    },
                    [](const ScenarioConfig &c) { return std::to_string(c.master_seed); }};
                return m;
            }();
            return r;
        }
#undef MASC_REAL
#undef MASC_INT
    }

    ScenarioConfig::ScenarioConfig()
    {
        scene.dust = masc::dust_preset(dust_preset);
        finalize();
    }

    void ScenarioConfig::finalize()
    {
        scene.terrain = generate_terrain(scene.orbit, scene.ground, terrain_paths, terrain_eps_r, terrain_spread_rad, 1);
    }

    void ScenarioConfig::validate() const
    {
        scene.orbit.validate();
        scene.array.validate();
        scene.radio.validate();
        scene.dust.validate();
        scene.ground.validate();
        pipeline.uncertainty.validate();
        frame.validate();
        (void)sweep.values();
        if (terrain_paths < 0)
            throw ValidationError("terrain.n_paths must be >= 0");
        if (!(terrain_eps_r > 1.0))
            throw ValidationError("terrain.eps_r must exceed 1");
        if (!(scene.sigma_mis2 >= 0.0))
            throw ValidationError("channel.sigma_mis2 must be >= 0");
        if (!(scene.l_other >= 1.0))
            throw ValidationError("channel.l_other is a loss and must be >= 1");
        if (!(pipeline.sensing.p1_w > 0.0) || !(pipeline.robust.p2_w > 0.0))
            throw ValidationError("power.p1_w and power.p2_w must be positive");
        if (!(pipeline.eps_out >= 0.0 && pipeline.eps_out <= 1.0))
            throw ValidationError("thresholds.eps_out must lie in [0, 1]");
        if (pipeline.n_theta < 3 || pipeline.n_phi < 3)
            throw ValidationError("grid.n_theta and grid.n_phi must be >= 3");
        if (pipeline.sensing.m_streams < 0 || pipeline.sensing.m_streams > scene.array.n_rf)
            throw ValidationError("sensing.m_streams must lie in [0, array.n_rf]");
        if (mc_trials < 1 || pipeline.n_mc < 1)
            throw ValidationError("mc.trials and mc.pareto_trials must be >= 1");
        if (estimation_trials < 100)
            throw ValidationError("estimation.trials must be >= 100");
        if (pipeline.robust.omp_L < 1)
            throw ValidationError("robust.omp_l must be >= 1");
        if (!(pipeline.robust.beta_max >= 1.0) || !(pipeline.robust.gamma_edge >= 1.0))
            throw ValidationError("robust.beta_max and robust.gamma_edge must be >= 1");
        if (!(scene.ground.central_angle_rad <= max_central_angle(scene.orbit)))
            throw ValidationError("ground node lies outside the visible region");
    }

    ScenarioConfig default_config()
    {
        return ScenarioConfig();
    }

    ScenarioConfig parse_config(const std::string &text)
    {
        ScenarioConfig cfg;
        const auto &reg = registry();
        std::istringstream in(text);
        std::string line;
        int no = 0;
        while (std::getline(in, line))
        {
            ++no;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected 'key = value'", no);
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (val.empty())
                throw ConfigError("missing value for '" + key + "'", no);

            if (key == "preset")
            {
                if (val != "table1_default")
                    throw ConfigError("unknown preset '" + val + "' (table1_default)", no);
                cfg = ScenarioConfig();
                continue;
            }
            const auto it = reg.find(key);
            if (it == reg.end())
                throw ConfigError("unknown key '" + key + "'", no);
            try
            {
                it->second.set(cfg, val);
            }
            catch (const ValidationError &e)
            {
                throw ConfigError(e.what(), no);
            }
            catch (const std::exception &)
            {
                throw ConfigError("cannot parse value '" + val + "' for '" + key + "'", no);
            }
        }
        cfg.finalize();
        cfg.validate();
        return cfg;
    }

    ScenarioConfig load_config(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw ConfigError("cannot open config file '" + path + "'", 0);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_config(ss.str());
    }

    std::string canonical_config_text(const ScenarioConfig &cfg)
    {
        std::string out;
        for (const auto &[k, e] : registry())
            out += k + " = " + e.get(cfg) + "\n";
        return out;
    }

    std::vector<std::string> config_keys()
    {
        std::vector<std::string> k;
        for (const auto &[key, e] : registry())
            k.push_back(key);
        return k;
    }

    std::string presets_text()
    {
        const ScenarioConfig c;
        const auto &s = c.scene;
        std::ostringstream o;
        o << "table1_default\n";
        o << "  orbit.altitude_m          = " << fmt(s.orbit.altitude_m) << "\n";
        o << "  orbital speed (m/s)       = " << fmt(orbital_speed(s.orbit)) << "\n";
        o << "  radio.freq_hz             = " << fmt(s.radio.freq_hz) << "\n";
        o << "  radio.bandwidth_hz        = " << fmt(s.radio.bandwidth_hz) << "\n";
        o << "  wavelength (m)            = " << fmt(s.radio.wavelength()) << "\n";
        o << "  array                     = " << s.array.n_h << "x" << s.array.n_v << " UPA, "
          << fmt(s.array.spacing_h_m) << " m spacing, " << fmt(s.array.element_gain_dBi) << " dBi\n";
        o << "  array.n_rf                = " << s.array.n_rf << " (sweep 4..64)\n";
        o << "  power.p1_w / power.p2_w   = " << fmt(c.pipeline.sensing.p1_w) << " / " << fmt(c.pipeline.robust.p2_w) << "\n";
        o << "  thresholds.gamma_sens_db  = " << fmt(lin2db(c.pipeline.sensing.gamma_sens_linear)) << "\n";
        o << "  thresholds.gamma_comm     = " << fmt(c.pipeline.robust.gamma_th_linear) << "\n";
        o << "  thresholds.eps_out        = " << fmt(c.pipeline.eps_out) << "\n";
        o << "  ground.rcs_m2             = " << fmt(s.ground.rcs_m2) << "\n";
        for (const char *name : {"light", "medium", "severe"})
        {
            DustScenario d = dust_preset(name);
            o << "dust_" << name << "\n";
            o << "  dust.density_per_m3       = " << fmt(d.particle_density_per_m3) << "\n";
            o << "  dust.layer_height_m       = " << fmt(d.layer_height_m) << "\n";
            o << "  alpha (dB/km, text eps)   = " << fmt(dust_alpha(d, s.radio.wavelength())) << "\n";
        }
        o << "dust.permittivity\n  text   = 1.55 + 6.3j\n  table2 = 2.5 + 0.05j\n";
        return o.str();
    }
}
