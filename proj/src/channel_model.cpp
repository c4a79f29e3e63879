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

#include "masc/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace masc
{
    void DustScenario::validate() const
    {
        if (!(particle_density_per_m3 >= 0.0))
            throw ValidationError("dust.density must be non-negative");
        if (!(eps_imag > 0.0))
            throw ValidationError("dust.eps_imag must be positive");
        if (!(layer_height_m >= 0.0))
            throw ValidationError("dust.layer_height_m must be non-negative");
        if (!(mean_radius_m > 0.0))
            throw ValidationError("dust.mean_radius_m must be positive");
        if (!(background_fraction >= 0.0 && background_fraction <= 1.0))
            throw ValidationError("dust.background_fraction must lie in [0, 1]");
    }

    DustScenario dust_preset(const std::string &name)
    {
        DustScenario d;
        d.name = name;
        if (name == "none")
        {
            d.particle_density_per_m3 = 0.0;
            d.layer_height_m = 0.0;
        }
        else if (name == "light")
        {
            d.particle_density_per_m3 = 1e8;
            d.layer_height_m = 10e3;
        }
        else if (name == "medium")
        {
            d.particle_density_per_m3 = 3e8;
            d.layer_height_m = 20e3;
        }
        else if (name == "severe")
        {
            d.particle_density_per_m3 = 5e8;
            d.layer_height_m = 30e3;
        }
        else
            throw ValidationError("unknown dust preset '" + name + "' (none|light|medium|severe)");
        return d;
    }

    void apply_permittivity_preset(DustScenario &dust, const std::string &name)
    {
        if (name == "text")
            dust.eps_real = 1.55, dust.eps_imag = 6.3;
        else if (name == "table2")
            dust.eps_real = 2.5, dust.eps_imag = 0.05;
        else
            throw ValidationError("unknown permittivity preset '" + name + "' (text|table2)");
    }

    void ArrayConfig::validate() const
    {
        if (n_h < 1 || n_v < 1)
            throw ValidationError("array.n_h and array.n_v must be >= 1");
        if (!(spacing_h_m > 0.0 && spacing_v_m > 0.0))
            throw ValidationError("array spacings must be positive");
        if (n_rf < 1 || n_rf > n_elements())
            throw ValidationError("array.n_rf must lie in [1, n_h*n_v]");
        if (!(max_gain_linear > 0.0))
            throw ValidationError("array element gain must be positive");
    }

    void RadioConfig::validate() const
    {
        if (!(freq_hz > 0.0 && bandwidth_hz > 0.0))
            throw ValidationError("radio.freq_hz and radio.bandwidth_hz must be positive");
        if (!(pulse_duration_s > 0.0))
            throw ValidationError("radio.pulse_duration_s must be positive");
    }

    void GroundNodeConfig::validate() const
    {
        if (!(g0_linear > 0.0))
            throw ValidationError("ground.g0 must be positive");
        if (!(rcs_m2 > 0.0))
            throw ValidationError("ground.rcs_m2 must be positive");
        if (!(central_angle_rad >= 0.0))
            throw ValidationError("ground.central_angle_rad must be non-negative");
    }

    std::vector<TerrainPath> generate_terrain(const OrbitConfig &orbit, const GroundNodeConfig &node,
                                              int n_paths, double eps_r, double spread_rad, uint64_t seed)
    {
        std::vector<TerrainPath> out;
        if (n_paths <= 0)
            return out;

        std::mt19937_64 rng(mix_seed(seed, 0x7e77a1e5ULL));
        std::uniform_real_distribution<double> U(0.0, 1.0);

        const double g = node.central_angle_rad, a = node.azimuth_rad;
        const Vec3 n(std::sin(g) * std::cos(a), std::sin(g) * std::sin(a), std::cos(g));

        // Tangent basis at the node; falls back to fixed axes at the sub-satellite point
        Vec3 e1 = (std::abs(n.z()) > 1.0 - 1e-12) ? Vec3(1, 0, 0) : Vec3(Vec3::UnitZ() - n.z() * n).normalized();
        Vec3 e2 = n.cross(e1);
        const double tmax = max_central_angle(orbit);

        for (int i = 0; i < n_paths; ++i)
        {
            const double delta = spread_rad * (0.3 + 0.7 * U(rng));
            const double bearing = 2.0 * pi * U(rng);
            Vec3 p = std::cos(delta) * n + std::sin(delta) * (std::cos(bearing) * e1 + std::sin(bearing) * e2);

            TerrainPath tp;
            tp.theta_rad = std::min(std::acos(std::clamp(p.z(), -1.0, 1.0)), tmax * 0.999);
            tp.phi_rad = std::atan2(p.y(), p.x());
            if (tp.phi_rad < 0.0)
                tp.phi_rad += 2.0 * pi;

            const LookGeometry lg = look_geometry(orbit, tp.theta_rad, tp.phi_rad);
            tp.d1_m = lg.slant_range_m;
            tp.d2_m = 2.0 * orbit.mars_radius_m * std::sin(0.5 * delta);
            tp.incidence_rad = lg.zenith_rad;
            tp.effective_dust_angle_rad = lg.zenith_rad;
            tp.eps_r = eps_r;
            out.push_back(tp);
        }
        return out;
    }

    double fspl_one_way(double d, double lambda)
    {
        const double x = 4.0 * pi * d / lambda;
        return x * x;
    }

    double fspl_two_way(double d, double lambda)
    {
        const double x = 4.0 * pi * d / lambda;
        return 16.0 * x * x * x * x;
    }

    double dust_alpha(const DustScenario &dust, double lambda)
    {
        const double e1 = dust.eps_real, e2 = dust.eps_imag;
        const double r3 = dust.mean_radius_m * dust.mean_radius_m * dust.mean_radius_m;
        return 1.029e6 * e2 / (((e1 + 2.0) * (e1 + 2.0) + e2 * e2) * lambda) * dust.particle_density_per_m3 * r3;
    }

    double db_per_km_to_np_per_m(double alpha_db_km)
    {
        return alpha_db_km * std::log(10.0) / 10.0 * 1e-3;
    }

    double dust_gain(double alpha_db_km, double theta_elev, double d, double d_max)
    {
        if (alpha_db_km <= 0.0)
            return 1.0;
        const double c = std::cos(theta_elev);
        const double ell = (c > 0.0) ? std::min(d / c, d_max) : d_max;
        return std::exp(-db_per_km_to_np_per_m(alpha_db_km) * ell);
    }

    double dust_alpha_at(const Scene &scene, double theta, double phi)
    {
        const double a = dust_alpha(scene.dust, scene.radio.wavelength());
        if (scene.dust.storm_radius_rad <= 0.0)
            return a;
        const double sep = ground_separation(theta, phi, scene.dust.storm_center_theta_rad, scene.dust.storm_center_phi_rad);
        return sep <= scene.dust.storm_radius_rad ? a : a * scene.dust.background_fraction;
    }

    double dust_path_length(const Scene &scene, double zenith_rad)
    {
        const double r = scene.orbit.mars_radius_m, H = scene.dust.layer_height_m;
        const double d_max = scene.dust.d_max_m > 0.0 ? scene.dust.d_max_m : std::sqrt((r + H) * (r + H) - r * r);
        const double c = std::cos(zenith_rad);
        return c > 0.0 ? std::min(H / c, d_max) : d_max;
    }

    // sin(N x) / (N sin x) with the removable singularity handled
    static double array_ratio(int N, double x)
    {
        const double s = std::sin(x);
        if (std::abs(s) < 1e-9)
            return std::cos(N * x) / std::cos(x);
        return std::sin(N * x) / (N * s);
    }

    double upa_array_factor(const ArrayConfig &arr, double theta, double phi, double lambda)
    {
        const double xh = pi * arr.spacing_h_m / lambda * std::sin(theta) * std::cos(phi);
        const double xv = pi * arr.spacing_v_m / lambda * std::sin(theta) * std::sin(phi);
        const double v = array_ratio(arr.n_h, xh) * array_ratio(arr.n_v, xv);
        return arr.max_gain_linear * v * v;
    }

    cvec steering_vector_u(const ArrayConfig &arr, double ux, double uy, double lambda)
    {
        cvec a(arr.n_elements());
        const double kh = 2.0 * pi * arr.spacing_h_m / lambda * ux;
        const double kv = 2.0 * pi * arr.spacing_v_m / lambda * uy;
        for (int iv = 0; iv < arr.n_v; ++iv)
            for (int ih = 0; ih < arr.n_h; ++ih)
                a(iv * arr.n_h + ih) = std::polar(1.0, kh * ih + kv * iv);
        return a;
    }

    cvec steering_vector(const ArrayConfig &arr, double theta, double phi, double lambda)
    {
        return steering_vector_u(arr, std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), lambda);
    }

    double ground_gain(const GroundNodeConfig &node, double arrival_rad)
    {
        const double c = std::cos(arrival_rad - node.boresight_rad);
        if (c <= 0.0)
            return 0.0;
        return node.g0_linear * std::pow(c, node.directivity_n);
    }

    cvec channel_gain_vector(const Scene &scene, double theta, double phi)
    {
        const LookGeometry lg = look_geometry(scene.orbit, theta, phi);
        const double lambda = scene.radio.wavelength();
        const double d = lg.slant_range_m;

        const double gm = ground_gain(scene.ground, lg.zenith_rad);
        const double loss = std::pow(speed_of_light / (4.0 * pi * scene.radio.freq_hz * d), 2);
        const double scale = std::sqrt(loss * gm / scene.radio.noise_power_w());

        const double alpha = db_per_km_to_np_per_m(dust_alpha_at(scene, theta, phi));
        const double ell = dust_path_length(scene, lg.zenith_rad);
        const double chi = std::isinf(alpha) ? 0.0 : std::exp(-alpha * ell);

        const double b = upa_array_factor(scene.array, lg.look_angle_rad, phi, lambda);
        return (scale * chi * std::sqrt(b)) * steering_vector(scene.array, lg.look_angle_rad, phi, lambda);
    }

    double fresnel_reflection(double eps_r, double theta_inc)
    {
        const double c = std::cos(theta_inc), s = std::sin(theta_inc);
        const double root = std::sqrt(eps_r - s * s);
        return (eps_r * c - root) / (eps_r * c + root);
    }

    double doppler_sensing(const Vec3 &v_sat, const Vec3 &v_wind, const Vec3 &v_rover, const Vec3 &u, double lambda)
    {
        return 2.0 / lambda * (v_sat + v_wind + v_rover).dot(u);
    }

    double doppler_comm(const Vec3 &v_sat, const Vec3 &v_wind, const Vec3 &v_rover, const Vec3 &u, double lambda)
    {
        return 1.0 / lambda * (v_sat + v_wind - v_rover).dot(u);
    }

    cplx ChannelRealization::total() const
    {
        cplx h = los_coeff;
        for (const auto &p : nlos)
            h += p.coeff;
        return phase == ChannelPhase::Communication ? h * (1.0 + misalign) : h;
    }

    cplx complex_normal(std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(0.5));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }

    // Shared path geometry for both phases
    namespace
    {
        struct MainGeometry
        {
            LookGeometry look;
            double alpha_np;
            double ell;
        };

        MainGeometry main_geometry(const Scene &scene)
        {
            MainGeometry m;
            m.look = look_geometry(scene.orbit, scene.ground.central_angle_rad, scene.ground.azimuth_rad);
            m.alpha_np = db_per_km_to_np_per_m(dust_alpha_at(scene, scene.ground.central_angle_rad, scene.ground.azimuth_rad));
            m.ell = dust_path_length(scene, m.look.zenith_rad);
            return m;
        }

        Vec3 satellite_velocity_local(const Scene &scene)
        {
            return Vec3(orbital_speed(scene.orbit), 0.0, 0.0);
        }
    }

    ChannelRealization sensing_channel(const Scene &scene, double t)
    {
        const double lambda = scene.radio.wavelength();
        const MainGeometry m = main_geometry(scene);
        const Vec3 v_sat = satellite_velocity_local(scene);

        ChannelRealization ch;
        ch.phase = ChannelPhase::Sensing;
        ch.alpha_np_per_m = m.alpha_np;
        ch.ell_m = m.ell;
        ch.main_delay_s = 2.0 * m.look.slant_range_m / speed_of_light;
        ch.main_doppler_hz = doppler_sensing(v_sat, scene.wind_mps, scene.ground.velocity_mps, m.look.u_local, lambda);
        ch.los_coeff = std::sqrt(scene.ground.rcs_m2 / fspl_two_way(m.look.slant_range_m, lambda)) *
                       std::exp(-m.alpha_np * 2.0 * m.ell) * std::polar(1.0, 2.0 * pi * ch.main_doppler_hz * t);

        for (const auto &tp : scene.terrain)
        {
            const LookGeometry lg = look_geometry(scene.orbit, tp.theta_rad, tp.phi_rad);
            const double dd = tp.d1_m + tp.d2_m;
            const double a = db_per_km_to_np_per_m(dust_alpha_at(scene, tp.theta_rad, tp.phi_rad));
            const double ell_i = dd / std::cos(tp.effective_dust_angle_rad);
            const double x = 4.0 * pi * dd / lambda;

            PathComponent p;
            p.theta_rad = tp.theta_rad;
            p.phi_rad = tp.phi_rad;
            p.alpha_np_per_m = a;
            p.ell_m = ell_i;
            p.reflection = fresnel_reflection(tp.eps_r, tp.incidence_rad);
            p.delay_s = 2.0 * dd / speed_of_light;
            p.doppler_hz = doppler_sensing(v_sat, scene.wind_mps, scene.ground.velocity_mps, lg.u_local, lambda);
            p.coeff = 1.0 / (x * x) * std::exp(-a * ell_i) * p.reflection * std::polar(1.0, 2.0 * pi * p.doppler_hz * t);
            ch.nlos.push_back(p);
        }
        return ch;
    }

    ChannelRealization comm_channel(const Scene &scene, double t, uint64_t rng_seed)
    {
        const double lambda = scene.radio.wavelength();
        const MainGeometry m = main_geometry(scene);
        const Vec3 v_sat = satellite_velocity_local(scene);
        std::mt19937_64 rng(rng_seed);

        ChannelRealization ch;
        ch.phase = ChannelPhase::Communication;
        ch.alpha_np_per_m = m.alpha_np;
        ch.ell_m = m.ell;
        ch.main_delay_s = m.look.slant_range_m / speed_of_light;
        ch.main_doppler_hz = doppler_comm(v_sat, scene.wind_mps, scene.ground.velocity_mps, m.look.u_local, lambda);
        ch.los_coeff = 1.0 / std::sqrt(fspl_one_way(m.look.slant_range_m, lambda)) *
                       std::exp(-m.alpha_np * m.ell) * std::polar(1.0, 2.0 * pi * ch.main_doppler_hz * t);

        for (const auto &tp : scene.terrain)
        {
            const LookGeometry lg = look_geometry(scene.orbit, tp.theta_rad, tp.phi_rad);
            const double dd = tp.d1_m + tp.d2_m;
            const double a = db_per_km_to_np_per_m(dust_alpha_at(scene, tp.theta_rad, tp.phi_rad));
            const double ell_i = dd / std::cos(tp.effective_dust_angle_rad);

            PathComponent p;
            p.theta_rad = tp.theta_rad;
            p.phi_rad = tp.phi_rad;
            p.alpha_np_per_m = a;
            p.ell_m = ell_i;
            p.reflection = fresnel_reflection(tp.eps_r, tp.incidence_rad);
            p.delay_s = dd / speed_of_light;
            p.doppler_hz = doppler_comm(v_sat, scene.wind_mps, scene.ground.velocity_mps, lg.u_local, lambda);
            p.fading = complex_normal(rng);
            p.coeff = 1.0 / std::sqrt(fspl_one_way(dd, lambda)) * std::exp(-a * ell_i) * p.reflection *
                      std::polar(1.0, 2.0 * pi * p.doppler_hz * t) * p.fading;
            ch.nlos.push_back(p);
        }

        ch.misalign = std::sqrt(scene.sigma_mis2) * complex_normal(rng);
        return ch;
    }

    ChannelRealization with_dust(const ChannelRealization &real, double alpha_np_per_m)
    {
        if (real.phase != ChannelPhase::Communication)
            throw std::invalid_argument("with_dust: communication realisation expected");
        ChannelRealization out = real;
        out.los_coeff *= std::exp(-(alpha_np_per_m - real.alpha_np_per_m) * real.ell_m);
        out.alpha_np_per_m = alpha_np_per_m;
        for (auto &p : out.nlos)
        {
            p.coeff *= std::exp(-(alpha_np_per_m - p.alpha_np_per_m) * p.ell_m);
            p.alpha_np_per_m = alpha_np_per_m;
        }
        return out;
    }

    cvec comm_channel_vector(const Scene &scene, const ChannelRealization &real)
    {
        const double lambda = scene.radio.wavelength();
        const double fc = scene.radio.freq_hz;
        const LookGeometry lg = look_geometry(scene.orbit, scene.ground.central_angle_rad, scene.ground.azimuth_rad);

        // Receive gain taken at the direct-path arrival angle for every path (broad ground antenna)
        const double scale = std::sqrt(ground_gain(scene.ground, lg.zenith_rad) / scene.radio.noise_power_w() *
                                       scene.array.max_gain_linear);

        const cplx los = real.los_coeff * std::polar(1.0, -2.0 * pi * fc * real.main_delay_s);
        cvec h = std::conj(los) * steering_vector(scene.array, lg.look_angle_rad, lg.azimuth_rad, lambda);
        for (const auto &p : real.nlos)
        {
            const LookGeometry pg = look_geometry(scene.orbit, p.theta_rad, p.phi_rad);
            const cplx c = p.coeff * std::polar(1.0, -2.0 * pi * fc * p.delay_s);
            h += std::conj(c) * steering_vector(scene.array, pg.look_angle_rad, pg.azimuth_rad, lambda);
        }
        h *= scale;
        if (real.phase == ChannelPhase::Communication)
            h *= std::conj(1.0 + real.misalign);
        return h;
    }
}
