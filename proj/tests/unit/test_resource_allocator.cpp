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

#include "masc/resource_allocator.hpp"

#include <algorithm>
#include <random>

using namespace masc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    ParetoPoint pt(double e, double c)
    {
        ParetoPoint p;
        p.eta_eff = e;
        p.c_eff_bps_hz = c;
        return p;
    }

    bool dominated(const ParetoPoint &p, const ParetoPoint &q)
    {
        return q.eta_eff >= p.eta_eff && q.c_eff_bps_hz >= p.c_eff_bps_hz &&
               (q.eta_eff > p.eta_eff || q.c_eff_bps_hz > p.c_eff_bps_hz);
    }
}

TEST_CASE("minimum sensing time", "[allocator]")
{
    FrameConfig f;
    CHECK_THAT(min_sensing_time(0.3, 0.6, f), WithinRel(0.5, 1e-15));
    CHECK(min_sensing_time(0.0, 0.6, f) == f.t_sens_min_s);
    CHECK(min_sensing_time(0.6, 0.6, f) == f.t_frame_s);
    CHECK(min_sensing_time(0.9, 0.6, f) == f.t_frame_s);
    CHECK_THROWS_AS(min_sensing_time(0.2, 0.0, f), InfeasibleError);
    CHECK(min_sensing_time(0.0, 0.0, f) == f.t_sens_min_s);
}

TEST_CASE("effective throughput", "[allocator]")
{
    CHECK_THAT(effective_throughput(1.0, 0.2, 1.0), WithinRel(0.8, 1e-15));
    CHECK(effective_throughput(3.0, 1.0, 1.0) == 0.0);
    CHECK_THAT(effective_throughput(6.0, 0.2, 1.0), WithinRel(6.0 * effective_throughput(1.0, 0.2, 1.0), 1e-15));
    CHECK_THROWS(effective_throughput(1.0, 2.0, 1.0));
}

TEST_CASE("single sweep point by hand", "[allocator]")
{
    FrameConfig f;
    const ParetoPoint p = pareto_point(0.3, 0.6, 1.0, f);
    // t_sens = 0.3 / 0.6, t_comm = 1 - t_sens, eta_eff = eta* (T - t_comm) / T, C_eff = C t_comm / T
    CHECK_THAT(p.t_sens_s, WithinRel(0.5, 1e-15));
    CHECK_THAT(p.t_comm_s, WithinRel(0.5, 1e-15));
    CHECK_THAT(p.eta_eff, WithinRel(0.3, 1e-15));
    CHECK_THAT(p.c_eff_bps_hz, WithinRel(0.5, 1e-15));
    CHECK(p.feasible);

    f.t_comm_max_s = 0.25;
    const ParetoPoint q = pareto_point(0.3, 0.6, 1.0, f);
    CHECK(q.t_comm_s == 0.25);
    CHECK(q.t_sens_s == 0.75);
    CHECK_THAT(q.eta_eff, WithinRel(0.45, 1e-15));

    const ParetoPoint r = pareto_point(0.7, 0.6, 1.0, FrameConfig{});
    CHECK_FALSE(r.feasible);
}

TEST_CASE("dominance pruning", "[allocator][pareto]")
{
    const auto f = prune_dominated({pt(0.3, 1.0), pt(0.5, 0.8), pt(0.4, 0.7)});
    REQUIRE(f.size() == 2);
    CHECK(f[0].eta_eff == 0.3);
    CHECK(f[1].eta_eff == 0.5);

    CHECK(prune_dominated({pt(0.2, 0.2)}).size() == 1);

    auto a = pt(0.4, 0.4), b = pt(0.4, 0.4);
    a.sweep_index = 1;
    b.sweep_index = 2;
    const auto d = prune_dominated({a, b});
    REQUIRE(d.size() == 1);
    CHECK(d[0].sweep_index == 1);

    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> U(0, 20), N(1, 25);
    for (int k = 0; k < 1000; ++k)
    {
        std::vector<ParetoPoint> pts;
        const int n = N(rng);
        for (int i = 0; i < n; ++i)
        {
            pts.push_back(pt(U(rng) / 20.0, U(rng) / 20.0));
            pts.back().sweep_index = i;
        }
        const auto front = prune_dominated(pts);

        // brute force: keep points not dominated by anything and not an exact copy of an earlier point
        std::vector<int> expect;
        for (int i = 0; i < n; ++i)
        {
            bool keep = true;
            for (int j = 0; j < n && keep; ++j)
            {
                if (dominated(pts[i], pts[j]))
                    keep = false;
                if (j < i && pts[j].eta_eff == pts[i].eta_eff && pts[j].c_eff_bps_hz == pts[i].c_eff_bps_hz)
                    keep = false;
            }
            if (keep)
                expect.push_back(i);
        }
        std::vector<int> got;
        for (const auto &p : front)
            got.push_back(p.sweep_index);
        std::vector<int> sorted_got = got;
        std::sort(sorted_got.begin(), sorted_got.end());
        CHECK(sorted_got == expect);

        for (size_t i = 1; i < front.size(); ++i)
        {
            CHECK(front[i].eta_eff > front[i - 1].eta_eff);
            CHECK(front[i].c_eff_bps_hz < front[i - 1].c_eff_bps_hz);
        }
    }
}

TEST_CASE("operating mode labels", "[allocator][modes]")
{
    std::vector<ParetoPoint> two = {pt(0.2, 0.9), pt(0.8, 0.1)};
    const OperatingModes m2 = label_operating_modes(two);
    CHECK(m2.comm_priority == 0);
    CHECK(m2.sensing_priority == 1);
    CHECK(m2.balanced == 0);
    CHECK(two[0].mode_label == "comm_priority|balanced");
    CHECK(two[1].mode_label == "sensing_priority");

    // concave front y = 1 - x^2
    std::vector<ParetoPoint> front;
    for (int i = 0; i <= 20; ++i)
    {
        const double x = i / 20.0;
        front.push_back(pt(x, 1.0 - x * x));
    }
    const OperatingModes m = label_operating_modes(front);
    CHECK(m.comm_priority == 0);
    CHECK(m.sensing_priority == 20);
    int best = -1;
    double best_d = -1.0;
    for (int i = 0; i <= 20; ++i)
    {
        const double x = i / 20.0, y = 1.0 - x * x;
        const double d = std::abs(x + y - 1.0) / std::sqrt(2.0); // chord from (0,1) to (1,0)
        if (d > best_d + 1e-12)
            best_d = d, best = i;
    }
    CHECK(m.balanced == best);
    CHECK(front[best].mode_label == "balanced");

    std::vector<ParetoPoint> empty;
    CHECK_THROWS(label_operating_modes(empty));
}

TEST_CASE("epsilon-constraint sweep", "[allocator][sweep]")
{
    const FrameConfig f;
    const EtaRange range;
    const SweepResult r = epsilon_constraint_sweep(0.6, 5.0, range, f);
    REQUIRE(r.points.size() == 19);
    for (const auto &p : r.points)
    {
        CHECK(p.t_sens_s + p.t_comm_s == f.t_frame_s);
        CHECK(p.feasible == (p.eta_min_constraint <= 0.6 + 1e-12));
    }
    REQUIRE_FALSE(r.front.empty());
    for (size_t i = 1; i < r.front.size(); ++i)
        CHECK(r.front[i].c_eff_bps_hz <= r.front[i - 1].c_eff_bps_hz);
    CHECK(r.front[r.modes.sensing_priority].eta_eff == Catch::Approx(0.6));

    const SweepResult none = epsilon_constraint_sweep(0.01, 5.0, range, f);
    CHECK(none.front.empty());
    for (const auto &p : none.points)
        CHECK_FALSE(p.feasible);

    // order independence: each point is self-contained
    auto etas = range.values();
    std::mt19937_64 rng(12);
    std::shuffle(etas.begin(), etas.end(), rng);
    for (double e : etas)
    {
        const ParetoPoint p = pareto_point(e, 0.6, 5.0, f);
        const auto k = size_t(std::llround((e - range.low) / range.step));
        CHECK(p.eta_eff == r.points[k].eta_eff);
        CHECK(p.c_eff_bps_hz == r.points[k].c_eff_bps_hz);
    }

    FrameConfig bad;
    bad.t_frame_s = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS((EtaRange{0.5, 0.4, 0.05}.values()), ValidationError);
}
