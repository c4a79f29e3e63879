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

#include <catch_amalgamated.hpp>

#include "masc/orbit_geometry.hpp"

#include <random>

using namespace masc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("orbital period at 400 km", "[orbit]")
{
    OrbitConfig c;
    const long double R = 3389.5e3L + 400e3L;
    const long double T = 2.0L * 3.14159265358979323846L * std::sqrt(R * R * R / 4.28e13L);
    CHECK_THAT(orbital_period(c), WithinRel(double(T), 1e-14));
    CHECK_THAT(orbital_period(c), WithinRel(7.083e3, 1e-3));
}

TEST_CASE("orbital period on the normalised unit sphere", "[orbit]")
{
    OrbitConfig c;
    c.mars_radius_m = 1.0;
    c.altitude_m = 0.0;
    c.mu_mars = 1.0;
    CHECK_THAT(orbital_period(c), WithinRel(2.0 * pi, 1e-15));
}

TEST_CASE("Kepler scaling of the period", "[orbit]")
{
    OrbitConfig a, b;
    b.mars_radius_m = 2.0 * a.mars_radius_m;
    b.altitude_m = 2.0 * a.altitude_m;
    CHECK_THAT(orbital_period(b) / orbital_period(a), WithinRel(std::pow(2.0, 1.5), 1e-14));
}

TEST_CASE("state_at velocity direction and speed", "[orbit]")
{
    OrbitConfig c;
    const OrbitState s0 = state_at(c, 0.0);
    CHECK_THAT(s0.velocity_mps.normalized().x(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(s0.velocity_mps.normalized().y(), WithinAbs(1.0, 1e-15));

    const OrbitState sh = state_at(c, orbital_period(c) / 2.0);
    CHECK_THAT(sh.velocity_mps.normalized().y(), WithinAbs(-1.0, 1e-12));

    // circular speed from the vis-viva oracle
    const double v = std::sqrt(4.28e13 / (3389.5e3 + 400e3));
    CHECK_THAT(s0.velocity_mps.norm(), WithinRel(v, 1e-12));
    CHECK_THAT(s0.velocity_mps.norm(), WithinRel(3.361e3, 1e-3));
}

TEST_CASE("state invariants over time", "[orbit][property]")
{
    OrbitConfig c;
    c.phase0_rad = 0.4;
    const double T = orbital_period(c);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 5.0 * T);
    const double v0 = state_at(c, 0.0).velocity_mps.norm();
    for (int k = 0; k < 200; ++k)
    {
        const double t = U(rng);
        const OrbitState s = state_at(c, t);
        CHECK_THAT(s.position_m.norm(), WithinRel(c.orbit_radius(), 1e-6));
        CHECK_THAT(s.velocity_mps.norm(), WithinRel(v0, 1e-9));
        CHECK_THAT(s.elevation_rad, WithinAbs(state_at(c, t + T).elevation_rad, 1e-9));
        const double phi = c.phase0_rad + 2.0 * pi * t / T;
        CHECK_THAT(s.velocity_mps.normalized().x(), WithinAbs(-std::sin(phi), 1e-9));
        CHECK_THAT(s.velocity_mps.normalized().y(), WithinAbs(std::cos(phi), 1e-9));
    }
}

TEST_CASE("slant range geometry", "[orbit]")
{
    OrbitConfig c;
    CHECK_THAT(slant_range(c, 0.0), WithinRel(400e3, 1e-15));

    const double r = c.mars_radius_m, R = c.orbit_radius();
    const double tangent = std::sqrt(R * R - r * r);
    CHECK_THAT(slant_range(c, max_central_angle(c)), WithinRel(tangent, 1e-9));
    CHECK_THAT(tangent, WithinRel(1.6946e6, 1e-4));

    OrbitConfig d = c;
    d.altitude_m = 800e3;
    CHECK_THAT(slant_range(d, 0.0), WithinRel(2.0 * slant_range(c, 0.0), 1e-15));

    // law of cosines on the Mars-centred triangle
    for (double th : {0.01, 0.1, 0.3, 0.45})
    {
        const double d2 = r * r + R * R - 2.0 * r * R * std::cos(th);
        CHECK_THAT(slant_range(c, th), WithinRel(std::sqrt(d2), 1e-10));
    }

    double prev = 0.0;
    for (int i = 0; i <= 100; ++i)
    {
        const double d_i = slant_range(c, max_central_angle(c) * i / 100.0);
        CHECK(d_i > prev);
        prev = d_i;
    }
    CHECK_THROWS_AS(slant_range(c, max_central_angle(c) * 1.01), VisibilityError);
}

TEST_CASE("visible region", "[orbit]")
{
    OrbitConfig c;
    const VisibleRegion v = visible_region(c, 64, 64);
    CHECK_THAT(v.theta_max_rad, WithinRel(std::acos(3389.5 / 3789.5), 1e-14));
    CHECK_THAT(v.theta_max_rad, WithinAbs(0.4636, 1e-4));
    CHECK_THAT(v.solid_angle_sr, WithinRel(2.0 * pi * (1.0 - std::cos(v.theta_max_rad)), 1e-12));

    double sum = 0.0;
    for (const auto &g : v.grid)
        sum += g.weight_sr;
    CHECK_THAT(sum, WithinRel(v.solid_angle_sr, 1e-9));
    CHECK(v.grid.size() == 64u * 64u);

    const VisibleRegion fine = visible_region(c, 128, 128);
    double sum2 = 0.0;
    for (const auto &g : fine.grid)
        sum2 += g.weight_sr;
    CHECK_THAT(sum2, WithinRel(sum, 1e-9));

    OrbitConfig low = c;
    low.altitude_m = 1e-3;
    const VisibleRegion z = visible_region(low, 4, 4);
    CHECK(z.theta_max_rad < 1e-3);
    CHECK(z.solid_angle_sr < 1e-6);
}

TEST_CASE("line-of-sight unit vector", "[orbit]")
{
    CHECK((los_unit_vector(0.0, 1.3) - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK((los_unit_vector(pi / 2, 0.0) - Vec3(1, 0, 0)).norm() < 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k)
        CHECK_THAT(los_unit_vector(U(rng), U(rng)).norm(), WithinAbs(1.0, 1e-14));
}

TEST_CASE("look geometry is consistent with the slant range", "[orbit]")
{
    OrbitConfig c;
    for (double th : {0.0, 0.06, 0.2, 0.4})
    {
        const LookGeometry lg = look_geometry(c, th, 0.3);
        CHECK_THAT(lg.slant_range_m, WithinRel(slant_range(c, th), 1e-12));
        CHECK_THAT(lg.u_local.norm(), WithinAbs(1.0, 1e-12));
        // sine rule in the Mars-centred triangle
        if (th > 0.0)
            CHECK_THAT(std::sin(lg.look_angle_rad) / c.mars_radius_m, WithinRel(std::sin(th) / lg.slant_range_m, 1e-9));
    }
}

TEST_CASE("orbit config validation", "[orbit]")
{
    OrbitConfig c;
    CHECK_NOTHROW(c.validate());
    c.altitude_m = 100e3;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}
