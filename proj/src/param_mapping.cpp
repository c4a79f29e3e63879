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

#include "masc/param_mapping.hpp"
#include "masc/estimation_bounds.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <random>

namespace masc
{
    void UncertaintyModel::validate() const
    {
        if (!(kappa_scale > 0.0))
            throw ValidationError("uncertainty.kappa must be positive");
        if (!(csi_uncertainty_level >= 0.0 && csi_uncertainty_level <= 0.8))
            throw ValidationError("uncertainty.csi_level must lie in [0, 0.8]");
    }

    double delta_alpha(double snr_sens, double kappa_scale)
    {
        if (!(snr_sens > 0.0))
            return std::numeric_limits<double>::infinity();
        return kappa_scale / std::sqrt(snr_sens);
    }

    double estimate_alpha_from_echo(double p_r, double p_t, double g_t, double g_r, double sigma_rcs,
                                    double lambda, double r_t, double r_r, double ell)
    {
        const double num = p_r * std::pow(4.0 * pi, 3) * r_t * r_t * r_r * r_r;
        const double den = p_t * g_t * g_r * sigma_rcs * lambda * lambda;
        const double arg = num / den;
        if (!(arg > 0.0) || !std::isfinite(arg) || !(ell > 0.0))
            throw EstimationError("estimate_alpha_from_echo: non-positive log argument or path length");
        return -std::log(arg) / (2.0 * ell);
    }

    double alpha_from_main_path(double main_magnitude, double sigma_rcs, double slant_range, double lambda, double ell)
    {
        const double arg = main_magnitude * std::sqrt(fspl_two_way(slant_range, lambda) / sigma_rcs);
        if (!(arg > 0.0) || !(ell > 0.0))
            throw EstimationError("alpha_from_main_path: non-positive echo magnitude or path length");
        return -std::log(arg) / (2.0 * ell);
    }

    Vec3 triangulate_position(double tau_main, double theta_hat, double phi_hat)
    {
        const double d = speed_of_light * tau_main / 2.0;
        return d * los_unit_vector(theta_hat, phi_hat);
    }

    Vec3 to_inertial(const OrbitState &state, const Vec3 &local)
    {
        return state.position_m + satellite_frame(state) * local;
    }

    double map_doppler_sens_to_comm(double f_sens, double v_rover_dot_u, double lambda)
    {
        return f_sens / 2.0 - 2.0 * v_rover_dot_u / lambda;
    }

    double map_doppler_printed(double f_sens, double v_sat_dot_u, double v_rover_dot_u, double lambda)
    {
        return f_sens / 2.0 - v_sat_dot_u / lambda + v_rover_dot_u / lambda;
    }

    DelayMap map_delays(double tau_main, const std::vector<double> &tau_terrain)
    {
        DelayMap m;
        m.tau_los = tau_main / 2.0;
        for (double t : tau_terrain)
            m.tau_nlos.push_back(t / 2.0);
        return m;
    }

    std::vector<double> phase_offsets(double f_c, double tau_los, const std::vector<double> &tau_nlos)
    {
        std::vector<double> out;
        for (double t : tau_nlos)
        {
            double p = std::remainder(2.0 * pi * f_c * (tau_los - t), 2.0 * pi); // [-pi, pi]
            if (p <= -pi)
                p += 2.0 * pi;
            out.push_back(p);
        }
        return out;
    }

    std::vector<uint8_t> detect_boundaries(const rvec &field, const VisibleRegion &grid)
    {
        const int nt = grid.n_theta, np = grid.n_phi;
        if (nt < 3 || np < 3)
            throw std::invalid_argument("detect_boundaries: grid must be at least 3x3");
        if (field.size() != Eigen::Index(nt) * np)
            throw std::invalid_argument("detect_boundaries: field size does not match grid");

        const double dth = grid.theta_max_rad / nt, dph = 2.0 * pi / np;
        auto at = [&](int i, int j)
        { return field(Eigen::Index(i) * np + ((j % np) + np) % np); };

        rvec mag(field.size());
        for (int i = 0; i < nt; ++i)
        {
            const double sin_t = std::sin((i + 0.5) * dth);
            for (int j = 0; j < np; ++j)
            {
                double g_t;
                if (i == 0)
                    g_t = (at(1, j) - at(0, j)) / dth;
                else if (i == nt - 1)
                    g_t = (at(nt - 1, j) - at(nt - 2, j)) / dth;
                else
                    g_t = (at(i + 1, j) - at(i - 1, j)) / (2.0 * dth);
                const double g_p = (at(i, j + 1) - at(i, j - 1)) / (2.0 * sin_t * dph);
                mag(Eigen::Index(i) * np + j) = std::hypot(g_t, g_p);
            }
        }

        const double mu = mag.mean();
        const double var = (mag.array() - mu).square().mean();
        std::vector<uint8_t> mask(field.size(), 0);
        if (!(var > 0.0))
            return mask;
        const double thr = mu + 2.0 * std::sqrt(var);
        for (Eigen::Index c = 0; c < mag.size(); ++c)
            mask[c] = mag(c) > thr ? 1 : 0;
        return mask;
    }

    MappedParameters map_sensing_realization(const Scene &scene, const ChannelRealization &sensing)
    {
        const double lambda = scene.radio.wavelength();
        const LookGeometry lg = look_geometry(scene.orbit, scene.ground.central_angle_rad, scene.ground.azimuth_rad);

        MappedParameters m;
        m.alpha_np_per_m = sensing.ell_m > 0.0
                               ? alpha_from_main_path(std::abs(sensing.los_coeff), scene.ground.rcs_m2, lg.slant_range_m, lambda, sensing.ell_m)
                               : 0.0;

        std::vector<double> tau_terrain;
        for (const auto &p : sensing.nlos)
            tau_terrain.push_back(p.delay_s);
        const DelayMap dm = map_delays(sensing.main_delay_s, tau_terrain);
        m.tau_los_s = dm.tau_los;
        m.tau_nlos_s = dm.tau_nlos;

        const double vr = scene.ground.velocity_mps.dot(lg.u_local);
        m.doppler_comm_hz = map_doppler_sens_to_comm(sensing.main_doppler_hz, vr, lambda);
        for (const auto &p : sensing.nlos)
        {
            const LookGeometry pg = look_geometry(scene.orbit, p.theta_rad, p.phi_rad);
            m.nlos_doppler_comm_hz.push_back(map_doppler_sens_to_comm(p.doppler_hz, scene.ground.velocity_mps.dot(pg.u_local), lambda));
        }
        return m;
    }

    EnvironmentEstimate build_environment_estimate(const Scene &scene, const VisibleRegion &grid, const rvec &snr_field,
                                                   double snr_node, const UncertaintyModel &unc,
                                                   const EstimationSettings &est, uint64_t seed)
    {
        const double lambda = scene.radio.wavelength();
        const double u = unc.csi_uncertainty_level;
        const double np_to_db = 10.0 / std::log(10.0) * 1e3; // Np/m -> dB/km
        std::mt19937_64 rng(mix_seed(seed, 0xa1fa));
        std::normal_distribution<double> nd(0.0, 1.0);

        const std::vector<double> t = observation_times(est.n_obs, est.window_s);
        auto alpha_std_db = [&](double snr, double ell)
        {
            if (!(snr > 0.0) || !(ell > 0.0))
                return 0.0;
            FimSpec fs;
            fs.snr_linear = snr;
            fs.n_obs = est.n_obs;
            fs.path_len_ell = ell;
            return std::sqrt(crlb_alpha(fs)) * np_to_db;
        };

        EnvironmentEstimate e;
        const size_t n = grid.size();
        e.alpha_hat.resize(n);
        e.alpha_lo.resize(n);
        e.alpha_hi.resize(n);
        for (size_t c = 0; c < n; ++c)
        {
            const GridCell &cell = grid.grid[c];
            const LookGeometry lg = look_geometry(scene.orbit, cell.theta_rad, cell.phi_rad);
            const double truth = dust_alpha_at(scene, cell.theta_rad, cell.phi_rad);
            const double ell = dust_path_length(scene, lg.zenith_rad);
            const double noise = nd(rng);
            const double a_hat = std::max(0.0, truth + est.noise_scale * alpha_std_db(snr_field(c), ell) * noise);
            const double da = std::max(delta_alpha(est.n_obs * snr_field(c), unc.kappa_scale), u * a_hat);
            e.alpha_hat(c) = a_hat;
            e.alpha_lo(c) = a_hat - da;
            e.alpha_hi(c) = a_hat + da;
        }
        e.boundary_mask = detect_boundaries(e.alpha_hat, grid);

        // Ground node: position from the echo delay, dust and Doppler with CRLB-level noise
        const LookGeometry lg = look_geometry(scene.orbit, scene.ground.central_angle_rad, scene.ground.azimuth_rad);
        const ChannelRealization sens = sensing_channel(scene, 0.0);
        e.zenith_node_rad = lg.zenith_rad;
        e.ell_node_m = dust_path_length(scene, lg.zenith_rad);

        const double a_true = dust_alpha_at(scene, scene.ground.central_angle_rad, scene.ground.azimuth_rad);
        e.alpha_node_hat = std::max(0.0, a_true + est.noise_scale * alpha_std_db(snr_node, e.ell_node_m) * nd(rng));
        const double da = std::max(delta_alpha(est.n_obs * snr_node, unc.kappa_scale), u * e.alpha_node_hat);
        e.alpha_node_lo = e.alpha_node_hat - da;
        e.alpha_node_hi = e.alpha_node_hat + da;

        // Nearest grid cell decides whether the node sits on a detected storm edge
        size_t best = 0;
        double best_d = 1e300;
        for (size_t c = 0; c < n; ++c)
        {
            const double d = ground_separation(grid.grid[c].theta_rad, grid.grid[c].phi_rad,
                                               scene.ground.central_angle_rad, scene.ground.azimuth_rad);
            if (d < best_d)
                best_d = d, best = c;
        }
        e.node_on_boundary = n > 0 && e.boundary_mask[best];

        e.look_theta_hat = lg.look_angle_rad;
        e.look_phi_hat = lg.azimuth_rad;
        e.position_hat = triangulate_position(sens.main_delay_s, e.look_theta_hat, e.look_phi_hat);

        double f_sens = sens.main_doppler_hz;
        if (snr_node > 0.0)
        {
            FimSpec fs;
            fs.snr_linear = snr_node;
            fs.n_obs = est.n_obs;
            fs.t_bar_sq = mean_square_time(t);
            f_sens += est.noise_scale * std::sqrt(crlb_doppler(fs)) * nd(rng);
        }
        e.doppler_comm_hz = map_doppler_sens_to_comm(f_sens, scene.ground.velocity_mps.dot(lg.u_local), lambda);

        std::vector<double> tau_terrain;
        for (const auto &p : sens.nlos)
        {
            tau_terrain.push_back(p.delay_s);
            e.reflection_hat.push_back(p.reflection);
        }
        const DelayMap dm = map_delays(sens.main_delay_s, tau_terrain);
        e.tau_los_s = dm.tau_los;
        e.tau_nlos_s = dm.tau_nlos;
        e.phase_offsets_rad = phase_offsets(scene.radio.freq_hz, e.tau_los_s, e.tau_nlos_s);
        return e;
    }

    std::string environment_estimate_json(const EnvironmentEstimate &est)
    {
        nlohmann::json j;
        auto vec = [](const rvec &v)
        { return std::vector<double>(v.data(), v.data() + v.size()); };
        j["alpha_hat_db_per_km"] = vec(est.alpha_hat);
        j["alpha_min_db_per_km"] = vec(est.alpha_lo);
        j["alpha_max_db_per_km"] = vec(est.alpha_hi);
        j["boundary_mask"] = std::vector<int>(est.boundary_mask.begin(), est.boundary_mask.end());
        j["node"] = {{"alpha_hat_db_per_km", est.alpha_node_hat},
                     {"alpha_min_db_per_km", est.alpha_node_lo},
                     {"alpha_max_db_per_km", est.alpha_node_hi},
                     {"on_boundary", est.node_on_boundary},
                     {"dust_path_m", est.ell_node_m}};
        j["position_m"] = {est.position_hat.x(), est.position_hat.y(), est.position_hat.z()};
        j["doppler_comm_hz"] = est.doppler_comm_hz;
        j["tau_los_s"] = est.tau_los_s;
        j["tau_nlos_s"] = est.tau_nlos_s;
        j["phase_offsets_rad"] = est.phase_offsets_rad;
        j["reflection_hat"] = est.reflection_hat;
        return j.dump();
    }
}
