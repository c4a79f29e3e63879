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

#include "masc/orbit_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace masc
{
    void OrbitConfig::validate() const
    {
        if (!(altitude_m >= 200e3 && altitude_m <= 800e3))
            throw ValidationError("orbit.altitude_m must lie in [200e3, 800e3]");
        if (!(mars_radius_m > 0.0))
            throw ValidationError("orbit.mars_radius_m must be positive");
        if (!(mu_mars > 0.0))
            throw ValidationError("orbit.mu must be positive");
    }

    double orbital_period(const OrbitConfig &cfg)
    {
        const double R = cfg.orbit_radius();
        return 2.0 * pi * std::sqrt(R * R * R / cfg.mu_mars);
    }

    double orbital_speed(const OrbitConfig &cfg)
    {
        return std::sqrt(cfg.mu_mars / cfg.orbit_radius());
    }

    OrbitState state_at(const OrbitConfig &cfg, double t)
    {
        const double T = orbital_period(cfg);
        const double R = cfg.orbit_radius();
        const double v = orbital_speed(cfg);
        const double phase = cfg.phase0_rad + 2.0 * pi * t / T;

        OrbitState s;
        s.time_s = t;
        s.orbital_phase_rad = phase;
        s.position_m = Vec3(R * std::cos(phase), R * std::sin(phase), 0.0);
        s.velocity_mps = Vec3(-v * std::sin(phase), v * std::cos(phase), 0.0);

        // Elevation swings between +-asin(r/R) over one revolution
        s.elevation_rad = std::asin(cfg.mars_radius_m / R) * std::cos(2.0 * pi * t / T);
        return s;
    }

    double max_central_angle(const OrbitConfig &cfg)
    {
        return std::acos(cfg.mars_radius_m / cfg.orbit_radius());
    }

    double slant_range(const OrbitConfig &cfg, double theta_rad)
    {
        const double tmax = max_central_angle(cfg);
        if (theta_rad < 0.0 || theta_rad > tmax * (1.0 + 1e-12))
            throw VisibilityError("slant_range: angle " + std::to_string(theta_rad) + " rad outside visible cone");
        const double r = cfg.mars_radius_m, R = cfg.orbit_radius();

        // Law of cosines, written to stay accurate near nadir
        const double s = std::sin(0.5 * theta_rad);
        return std::sqrt(cfg.altitude_m * cfg.altitude_m + 4.0 * r * R * s * s);
    }

    VisibleRegion visible_region(const OrbitConfig &cfg, int n_theta, int n_phi)
    {
        if (n_theta < 2 || n_phi < 2)
            throw std::invalid_argument("visible_region: need at least 2x2 cells");

        VisibleRegion vr;
        vr.theta_max_rad = max_central_angle(cfg);
        vr.solid_angle_sr = 2.0 * pi * (1.0 - std::cos(vr.theta_max_rad));
        vr.n_theta = n_theta;
        vr.n_phi = n_phi;
        vr.grid.reserve(size_t(n_theta) * size_t(n_phi));

        const double dth = vr.theta_max_rad / n_theta, dph = 2.0 * pi / n_phi;
        for (int i = 0; i < n_theta; ++i)
        {
            // exact band integral of sin(theta)
            const double band = std::cos(i * dth) - std::cos((i + 1) * dth);
            for (int j = 0; j < n_phi; ++j)
                vr.grid.push_back({(i + 0.5) * dth, (j + 0.5) * dph, band * dph});
        }
        return vr;
    }

    Vec3 los_unit_vector(double theta, double phi)
    {
        return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
    }

    LookGeometry look_geometry(const OrbitConfig &cfg, double central_angle, double azimuth)
    {
        LookGeometry g;
        g.central_angle_rad = central_angle;
        g.azimuth_rad = azimuth;
        g.slant_range_m = slant_range(cfg, central_angle);

        const double r = cfg.mars_radius_m, R = cfg.orbit_radius();
        g.look_angle_rad = std::atan2(r * std::sin(central_angle), R - r * std::cos(central_angle));
        g.zenith_rad = g.look_angle_rad + central_angle;
        g.u_local = los_unit_vector(g.look_angle_rad, azimuth);
        return g;
    }

    Eigen::Matrix3d satellite_frame(const OrbitState &state)
    {
        const Vec3 x = state.velocity_mps.normalized();
        const Vec3 z = -state.position_m.normalized();
        const Vec3 y = z.cross(x);
        Eigen::Matrix3d F;
        F.col(0) = x;
        F.col(1) = y;
        F.col(2) = z;
        return F;
    }

    double ground_separation(double theta1, double phi1, double theta2, double phi2)
    {
        const double c = std::cos(theta1) * std::cos(theta2) + std::sin(theta1) * std::sin(theta2) * std::cos(phi1 - phi2);
        return std::acos(std::clamp(c, -1.0, 1.0));
    }
}
