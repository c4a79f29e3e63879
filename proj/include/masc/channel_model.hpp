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

#include "masc/common.hpp"
#include "masc/orbit_geometry.hpp"

#include <random>

namespace masc
{
    struct DustScenario
    {
        std::string name = "medium";
        double particle_density_per_m3 = 3e8;
        double layer_height_m = 20e3;
        double mean_radius_m = 1.5e-6;
        double eps_real = 1.55;
        double eps_imag = 6.3;
        double d_max_m = 0.0; // <= 0: tangent path through the layer shell

        // Optional storm footprint. Outside the footprint alpha is scaled by background_fraction.
        double storm_radius_rad = 0.0; // <= 0: storm covers the whole visible region
        double storm_center_theta_rad = 0.0;
        double storm_center_phi_rad = 0.0;
        double background_fraction = 0.0;

        void validate() const;
    };

    // Named presets: "none", "light", "medium", "severe"
    DustScenario dust_preset(const std::string &name);

    // Permittivity presets: "text" (1.55, 6.3) and "table2" (2.5, 0.05)
    void apply_permittivity_preset(DustScenario &dust, const std::string &name);

    struct ArrayConfig
    {
        int n_h = 8;
        int n_v = 8;
        double spacing_h_m = 0.075;
        double spacing_v_m = 0.075;
        double element_gain_dBi = 28.0;
        double max_gain_linear = 630.957344480193; // 28 dBi
        int n_rf = 16;

        int n_elements() const { return n_h * n_v; }
        void validate() const;
    };

    struct RadioConfig
    {
        double freq_hz = 2e9;
        double bandwidth_hz = 20e6;
        double noise_figure_db = 2.0;
        double noise_temp_k = 0.0;          // <= 0: derived from the noise figure at 290 K
        double pulse_duration_s = 50e-6;    // sensing chirp length; compression gain = B * T

        double wavelength() const { return speed_of_light / freq_hz; }
        double noise_temperature() const { return noise_temp_k > 0.0 ? noise_temp_k : reference_temp_k * db2lin(noise_figure_db); }
        double noise_power_w() const { return boltzmann * bandwidth_hz * noise_temperature(); }
        double processing_gain() const { return bandwidth_hz * pulse_duration_s; }
        void validate() const;
    };

    struct GroundNodeConfig
    {
        double g0_linear = 1.0;
        double boresight_rad = 0.0; // measured from local zenith
        double directivity_n = 1.0;
        double rcs_m2 = 200.0;
        Vec3 velocity_mps = Vec3(1.0, 0.0, 0.0); // satellite frame (along, cross, nadir)
        double central_angle_rad = 0.06;
        double azimuth_rad = 0.3;

        void validate() const;
    };

    struct TerrainPath
    {
        double d1_m = 0.0; // satellite to reflection point
        double d2_m = 0.0; // reflection point to ground node
        double incidence_rad = 0.0;
        double eps_r = 2.5;
        double theta_rad = 0.0; // reflection point, central angle
        double phi_rad = 0.0;
        double effective_dust_angle_rad = 0.0;
    };

    // Everything the propagation model needs for one scene.
    struct Scene
    {
        OrbitConfig orbit;
        ArrayConfig array;
        RadioConfig radio;
        DustScenario dust;
        GroundNodeConfig ground;
        std::vector<TerrainPath> terrain;
        Vec3 wind_mps = Vec3(20.0, 0.0, 0.0); // satellite frame
        double sigma_mis2 = 0.01;
        double l_other = 1.0;
    };

    // Deterministic scatterer placement around the ground node
    std::vector<TerrainPath> generate_terrain(const OrbitConfig &orbit, const GroundNodeConfig &node,
                                              int n_paths, double eps_r, double spread_rad, uint64_t seed);

    double fspl_one_way(double d, double lambda);
    double fspl_two_way(double d, double lambda);

    double dust_alpha(const DustScenario &dust, double lambda); // dB/km
    double db_per_km_to_np_per_m(double alpha_db_km);
    double dust_gain(double alpha_db_km, double theta_elev, double d, double d_max);

    // Dust coefficient (dB/km) in a given ground direction, honouring the storm footprint
    double dust_alpha_at(const Scene &scene, double theta, double phi);
    // Effective path length inside the dust layer for a ray with the given zenith angle at the ground
    double dust_path_length(const Scene &scene, double zenith_rad);

    double upa_array_factor(const ArrayConfig &arr, double theta, double phi, double lambda);
    // Unit-modulus steering vector, element index = iv * n_h + ih
    cvec steering_vector(const ArrayConfig &arr, double theta, double phi, double lambda);
    // Same, from direction cosines
    cvec steering_vector_u(const ArrayConfig &arr, double ux, double uy, double lambda);

    double ground_gain(const GroundNodeConfig &node, double arrival_rad);

    // Per-element channel gain magnitudes, dust broadcast over elements
    cvec channel_gain_vector(const Scene &scene, double theta, double phi);

    double fresnel_reflection(double eps_r, double theta_inc);

    double doppler_sensing(const Vec3 &v_sat, const Vec3 &v_wind, const Vec3 &v_rover, const Vec3 &u, double lambda);
    double doppler_comm(const Vec3 &v_sat, const Vec3 &v_wind, const Vec3 &v_rover, const Vec3 &u, double lambda);

    enum class ChannelPhase
    {
        Sensing,
        Communication
    };

    struct PathComponent
    {
        cplx coeff = 0.0;       // includes fading for communication NLOS paths
        double delay_s = 0.0;
        double doppler_hz = 0.0;
        cplx fading = 1.0;
        double reflection = 0.0; // signed Fresnel coefficient
        double theta_rad = 0.0;  // reflection point direction
        double phi_rad = 0.0;
        double alpha_np_per_m = 0.0; // dust coefficient along this path
        double ell_m = 0.0;          // dust path length (one pass)
    };

    struct ChannelRealization
    {
        ChannelPhase phase = ChannelPhase::Sensing;
        cplx los_coeff = 0.0;
        double main_delay_s = 0.0;
        double main_doppler_hz = 0.0;
        double alpha_np_per_m = 0.0; // natural-units dust coefficient on the main path
        double ell_m = 0.0;          // dust path length on the main path
        std::vector<PathComponent> nlos;
        cplx misalign = 0.0;

        cplx total() const;
    };

    ChannelRealization sensing_channel(const Scene &scene, double t);
    ChannelRealization comm_channel(const Scene &scene, double t, uint64_t rng_seed);

    // Communication realisation with every path re-attenuated by a uniform dust coefficient (Np/m)
    ChannelRealization with_dust(const ChannelRealization &real, double alpha_np_per_m);

    // Array-domain channel vector h so that the received signal is h^H w; normalised to unit noise power.
    // Each path adds its carrier phase exp(-j 2 pi f_c tau) so multipath combines coherently.
    cvec comm_channel_vector(const Scene &scene, const ChannelRealization &real);

    // Standard complex normal CN(0, 1)
    cplx complex_normal(std::mt19937_64 &rng);
}
