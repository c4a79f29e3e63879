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

#include "masc/resource_allocator.hpp"

#include <algorithm>
#include <cmath>

namespace masc
{
    void FrameConfig::validate() const
    {
        if (!(t_frame_s > 0.0))
            throw ValidationError("frame.t_frame must be positive");
        if (!(t_sens_min_s > 0.0 && t_sens_min_s <= t_frame_s))
            throw ValidationError("frame.t_sens_min must lie in (0, t_frame]");
        if (!(t_comm_max_s > 0.0 && t_comm_max_s <= t_frame_s))
            throw ValidationError("frame.t_comm_max must lie in (0, t_frame]");
    }

    std::vector<double> EtaRange::values() const
    {
        if (!(step > 0.0) || low > high)
            throw ValidationError("sweep range requires step > 0 and low <= high");
        std::vector<double> v;
        const int n = int(std::floor((high - low) / step + 1e-9)) + 1;
        for (int k = 0; k < n; ++k)
            v.push_back(std::round((low + k * step) * 1e12) / 1e12); // 0.05 + 11 * 0.05 must land on 0.6
        return v;
    }

    double min_sensing_time(double eta_min, double eta_cov_star, const FrameConfig &frame)
    {
        if (!(eta_cov_star > 0.0))
        {
            if (eta_min > 0.0)
                throw InfeasibleError("min_sensing_time: zero achievable coverage with a positive coverage target");
            return frame.t_sens_min_s;
        }
        const double t = eta_min * frame.t_frame_s / eta_cov_star;
        return std::clamp(t, frame.t_sens_min_s, frame.t_frame_s);
    }

    double effective_throughput(double c_wc, double t_sens_min, double t_frame)
    {
        if (t_sens_min > t_frame)
            throw std::invalid_argument("effective_throughput: sensing time exceeds the frame");
        return c_wc * (t_frame - t_sens_min) / t_frame;
    }

    ParetoPoint pareto_point(double eta_min, double eta_cov_star, double c_wc, const FrameConfig &frame)
    {
        ParetoPoint p;
        p.eta_min_constraint = eta_min;
        const double T = frame.t_frame_s;
        double t_sens;
        if (!(eta_cov_star > 0.0) && eta_min > 0.0)
        {
            p.feasible = false;
            t_sens = T;
        }
        else
        {
            t_sens = min_sensing_time(eta_min, eta_cov_star, frame);
            p.feasible = eta_min <= eta_cov_star;
        }

        p.t_comm_s = std::min(T - t_sens, frame.t_comm_max_s);
        p.t_sens_s = T - p.t_comm_s;
        p.eta_eff = eta_cov_star * (T - p.t_comm_s) / T;
        p.c_eff_bps_hz = c_wc * p.t_comm_s / T;
        return p;
    }

    std::vector<ParetoPoint> prune_dominated(const std::vector<ParetoPoint> &points)
    {
        std::vector<ParetoPoint> kept;
        for (size_t i = 0; i < points.size(); ++i)
        {
            const auto &p = points[i];
            bool drop = false;
            for (size_t j = 0; j < points.size() && !drop; ++j)
            {
                if (i == j)
                    continue;
                const auto &q = points[j];
                const bool ge = q.eta_eff >= p.eta_eff && q.c_eff_bps_hz >= p.c_eff_bps_hz;
                const bool strict = q.eta_eff > p.eta_eff || q.c_eff_bps_hz > p.c_eff_bps_hz;
                if (ge && strict)
                    drop = true;
                // exact duplicate: the earlier occurrence wins
                if (!strict && ge && j < i)
                    drop = true;
            }
            if (!drop)
                kept.push_back(p);
        }
        std::stable_sort(kept.begin(), kept.end(), [](const ParetoPoint &a, const ParetoPoint &b)
                         { return a.eta_eff < b.eta_eff; });
        return kept;
    }

    OperatingModes label_operating_modes(std::vector<ParetoPoint> &front)
    {
        if (front.empty())
            throw std::invalid_argument("label_operating_modes: empty front");
        OperatingModes m;
        m.comm_priority = 0;
        m.sensing_priority = 0;
        for (int i = 1; i < int(front.size()); ++i)
        {
            if (front[i].c_eff_bps_hz > front[m.comm_priority].c_eff_bps_hz)
                m.comm_priority = i;
            if (front[i].eta_eff > front[m.sensing_priority].eta_eff)
                m.sensing_priority = i;
        }

        // Knee on axes normalised by the extreme ranges
        const auto &a = front[m.comm_priority], &b = front[m.sensing_priority];
        const double sx = std::max(std::abs(b.eta_eff - a.eta_eff), 1e-300);
        const double sy = std::max(std::abs(a.c_eff_bps_hz - b.c_eff_bps_hz), 1e-300);
        const double ax = a.eta_eff / sx, ay = a.c_eff_bps_hz / sy;
        const double dx = b.eta_eff / sx - ax, dy = b.c_eff_bps_hz / sy - ay;
        const double len = std::hypot(dx, dy);

        double best = -1.0;
        for (int i = 0; i < int(front.size()); ++i)
        {
            const double px = front[i].eta_eff / sx - ax, py = front[i].c_eff_bps_hz / sy - ay;
            const double d = len > 0.0 ? std::abs(dx * py - dy * px) / len : 0.0;
            if (d > best + 1e-12)
                best = d, m.balanced = i;
        }
        if (best <= 1e-12)
        {
            // degenerate knee: nearest to the chord midpoint
            double best_mid = 1e300;
            for (int i = 0; i < int(front.size()); ++i)
            {
                const double px = front[i].eta_eff / sx - (ax + 0.5 * dx);
                const double py = front[i].c_eff_bps_hz / sy - (ay + 0.5 * dy);
                const double d = std::hypot(px, py);
                if (d < best_mid - 1e-12)
                    best_mid = d, m.balanced = i;
            }
        }

        auto add = [&](int idx, const char *name)
        {
            std::string &l = front[idx].mode_label;
            l += l.empty() ? name : std::string("|") + name;
        };
        for (auto &p : front)
            p.mode_label.clear();
        add(m.comm_priority, "comm_priority");
        add(m.balanced, "balanced");
        add(m.sensing_priority, "sensing_priority");
        return m;
    }

    SweepResult epsilon_constraint_sweep(double eta_cov_star, double c_wc, const EtaRange &range, const FrameConfig &frame)
    {
        frame.validate();
        SweepResult r;
        const auto etas = range.values();
        std::vector<ParetoPoint> feasible;
        for (size_t k = 0; k < etas.size(); ++k)
        {
            ParetoPoint p = pareto_point(etas[k], eta_cov_star, c_wc, frame);
            p.sweep_index = int(k);
            r.points.push_back(p);
            if (p.feasible)
                feasible.push_back(p);
        }
        r.front = prune_dominated(feasible);
        if (!r.front.empty())
            r.modes = label_operating_modes(r.front);
        for (const auto &f : r.front)
            r.points[f.sweep_index].mode_label = f.mode_label;
        return r;
    }

    ScenePerformance evaluate_scene(const Scene &scene, const PipelineSettings &settings, uint64_t seed,
                                    const HybridDesignResult *cached_sensing)
    {
        settings.uncertainty.validate();
        ScenePerformance perf;
        if (cached_sensing)
            perf.sensing = *cached_sensing;
        else
        {
            const SensingModel model = build_sensing_model(scene, settings.sensing, settings.n_theta, settings.n_phi);
            perf.sensing = hybrid_precoding_design(scene, model, settings.sensing);
        }
        perf.eta_cov_star = perf.sensing.coverage.eta_cov;

        const double snr_node = sensing_snr(scene, scene.ground.central_angle_rad, scene.ground.azimuth_rad,
                                            perf.sensing.precoder.full());
        perf.estimate = build_environment_estimate(scene, perf.sensing.coverage.grid, perf.sensing.coverage.snr_linear, snr_node,
                                                   settings.uncertainty, settings.estimation, mix_seed(seed, 1));

        const double u = settings.uncertainty.csi_uncertainty_level;
        const PrecoderDesigner designer = make_designer(scene, perf.estimate, u, settings.robust, true);
        const double alpha_max_np = db_per_km_to_np_per_m(std::max(perf.estimate.alpha_node_hi, 0.0));
        const SinrOutageResult so = evaluate_sinr_outage(designer, scene, u, settings.n_mc, mix_seed(seed, 2),
                                                         settings.robust, alpha_max_np);
        perf.p_out = so.p_out;
        perf.mean_sinr_db = so.mean_sinr_db;
        perf.outage_violated = so.p_out > settings.eps_out;
        perf.c_wc_bps_hz = perf.outage_violated ? 0.0 : so.capacity_bps_hz;
        return perf;
    }

    SweepResult epsilon_constraint_sweep(const Scene &scene, const PipelineSettings &settings, const EtaRange &range,
                                         const FrameConfig &frame, uint64_t seed, ScenePerformance *perf)
    {
        // The sensing problem does not depend on the coverage target, so it is solved once per scene
        ScenePerformance p = evaluate_scene(scene, settings, seed);
        SweepResult r = epsilon_constraint_sweep(p.eta_cov_star, p.c_wc_bps_hz, range, frame);
        if (perf)
            *perf = std::move(p);
        return r;
    }
}
