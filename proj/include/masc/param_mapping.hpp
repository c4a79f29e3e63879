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

#pragma once

#include "masc/channel_model.hpp"

namespace masc
{
    struct UncertaintyModel
    {
        double kappa_scale = 0.5;
        double csi_uncertainty_level = 0.3;

        void validate() const;
    };

    struct EnvironmentEstimate
    {
        // Dust field over the sensing grid, dB/km
        rvec alpha_hat;
        rvec alpha_lo, alpha_hi;
        std::vector<uint8_t> boundary_mask;

        // Ground-node direction
        double alpha_node_hat = 0.0; // dB/km
        double alpha_node_lo = 0.0;
        double alpha_node_hi = 0.0;
        bool node_on_boundary = false;
        double ell_node_m = 0.0;
        double zenith_node_rad = 0.0;

        Vec3 position_hat = Vec3::Zero(); // satellite frame
        double look_theta_hat = 0.0;
        double look_phi_hat = 0.0;
        double doppler_comm_hz = 0.0;
        double tau_los_s = 0.0;
        std::vector<double> tau_nlos_s;
        std::vector<double> phase_offsets_rad;
        std::vector<double> reflection_hat; // signed Fresnel coefficients of the terrain paths
    };

    double delta_alpha(double snr_sens, double kappa_scale);

    double estimate_alpha_from_echo(double p_r, double p_t, double g_t, double g_r, double sigma_rcs,
                                    double lambda, double r_t, double r_r, double ell);

    // Dust coefficient (natural units) recovered from the magnitude of the sensing main-path coefficient
    double alpha_from_main_path(double main_magnitude, double sigma_rcs, double slant_range, double lambda, double ell);

    Vec3 triangulate_position(double tau_main, double theta_hat, double phi_hat);
    Vec3 to_inertial(const OrbitState &state, const Vec3 &local);

    double map_doppler_sens_to_comm(double f_sens, double v_rover_dot_u, double lambda);
    // Literal satellite/rover-velocity form; kept for comparison runs only
    double map_doppler_printed(double f_sens, double v_sat_dot_u, double v_rover_dot_u, double lambda);

    struct DelayMap
    {
        double tau_los = 0.0;
        std::vector<double> tau_nlos;
    };
    DelayMap map_delays(double tau_main, const std::vector<double> &tau_terrain);

    std::vector<double> phase_offsets(double f_c, double tau_los, const std::vector<double> &tau_nlos);

    // field is indexed like VisibleRegion::grid (theta-major)
    std::vector<uint8_t> detect_boundaries(const rvec &field, const VisibleRegion &grid);

    // One-way parameters recovered from a sensing-phase realisation, without estimation noise
    struct MappedParameters
    {
        double alpha_np_per_m = 0.0;
        double tau_los_s = 0.0;
        std::vector<double> tau_nlos_s;
        double doppler_comm_hz = 0.0;
        std::vector<double> nlos_doppler_comm_hz;
    };
    MappedParameters map_sensing_realization(const Scene &scene, const ChannelRealization &sensing);

    struct EstimationSettings
    {
        int n_obs = 256;
        double window_s = 0.05;
        double noise_scale = 1.0; // 0 disables estimation noise
    };

    // Sensed parameters = truth + Gaussian noise at the CRLB level; then mapped to the communication phase.
    // snr_field holds the per-cell sensing SNR of the deployed sensing precoder. Interval half-widths use the
    // SNR integrated over the n_obs observations.
    EnvironmentEstimate build_environment_estimate(const Scene &scene, const VisibleRegion &grid, const rvec &snr_field,
                                                   double snr_node, const UncertaintyModel &unc,
                                                   const EstimationSettings &est, uint64_t seed);

    // JSON text with documented field names
    std::string environment_estimate_json(const EnvironmentEstimate &est);
}
