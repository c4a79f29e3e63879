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

namespace masc
{
    struct OrbitConfig
    {
        double altitude_m = 400e3;
        double mars_radius_m = 3389.5e3;
        double mu_mars = 4.28e13; // m^3/s^2
        double phase0_rad = 0.0;

        double orbit_radius() const { return mars_radius_m + altitude_m; }

        // Throws ValidationError naming the violated invariant.
        void validate() const;
    };

    struct OrbitState
    {
        double time_s = 0.0;
        Vec3 position_m = Vec3::Zero();  // Mars-centred inertial
        Vec3 velocity_mps = Vec3::Zero();
        double elevation_rad = 0.0;
        double orbital_phase_rad = 0.0;
    };

    struct GridCell
    {
        double theta_rad; // Mars-central angle from the sub-satellite point
        double phi_rad;
        double weight_sr;
    };

    struct VisibleRegion
    {
        double theta_max_rad = 0.0;
        double solid_angle_sr = 0.0;
        int n_theta = 0;
        int n_phi = 0;
        std::vector<GridCell> grid; // row-major: index = i_theta * n_phi + i_phi

        size_t size() const { return grid.size(); }
    };

    // Where a ground point is seen from the satellite.
    // "look" angles are measured at the satellite from nadir; "zenith" is measured at the ground.
    struct LookGeometry
    {
        double central_angle_rad = 0.0;
        double azimuth_rad = 0.0;
        double look_angle_rad = 0.0;
        double slant_range_m = 0.0;
        double zenith_rad = 0.0;
        Vec3 u_local = Vec3::UnitZ(); // unit vector towards the point in the satellite frame
    };

    double orbital_period(const OrbitConfig &cfg);
    double orbital_speed(const OrbitConfig &cfg);
    OrbitState state_at(const OrbitConfig &cfg, double t);

    double max_central_angle(const OrbitConfig &cfg);
    double slant_range(const OrbitConfig &cfg, double theta_rad);
    VisibleRegion visible_region(const OrbitConfig &cfg, int n_theta, int n_phi);
    Vec3 los_unit_vector(double theta, double phi);

    LookGeometry look_geometry(const OrbitConfig &cfg, double central_angle, double azimuth);

    // Columns: along-track, cross-track, nadir (all in the inertial frame).
    Eigen::Matrix3d satellite_frame(const OrbitState &state);

    // Great-circle angle between two ground points given as (central angle, azimuth) around the sub-satellite point.
    double ground_separation(double theta1, double phi1, double theta2, double phi2);
}
