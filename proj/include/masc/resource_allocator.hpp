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

#include "masc/robust_comm.hpp"
#include "masc/sensing_precoder.hpp"

namespace masc
{
    struct FrameConfig
    {
        double t_frame_s = 1.0;
        double t_sens_min_s = 0.01; // floor on the sensing slot
        double t_comm_max_s = 1.0;

        void validate() const;
    };

    struct ParetoPoint
    {
        double eta_min_constraint = 0.0;
        double eta_eff = 0.0;
        double c_eff_bps_hz = 0.0;
        double t_sens_s = 0.0;
        double t_comm_s = 0.0;
        bool feasible = true;
        std::string mode_label;
        int sweep_index = 0; // handle back to the sweep entry (and its shared precoders)
    };

    struct EtaRange
    {
        double low = 0.05;
        double high = 0.95;
        double step = 0.05;

        std::vector<double> values() const;
    };

    double min_sensing_time(double eta_min, double eta_cov_star, const FrameConfig &frame);
    double effective_throughput(double c_wc, double t_sens_min, double t_frame);

    // One pass of the per-constraint steps for given scene-level eta* and worst-case capacity
    ParetoPoint pareto_point(double eta_min, double eta_cov_star, double c_wc, const FrameConfig &frame);

    std::vector<ParetoPoint> prune_dominated(const std::vector<ParetoPoint> &points);

    struct OperatingModes
    {
        int comm_priority = -1; // indices into the front
        int balanced = -1;
        int sensing_priority = -1;
    };
    OperatingModes label_operating_modes(std::vector<ParetoPoint> &front);

    struct SweepResult
    {
        std::vector<ParetoPoint> points; // every constraint in sweep order, infeasible ones flagged
        std::vector<ParetoPoint> front;  // pruned feasible points, ascending eta_eff, labelled
        OperatingModes modes;
    };

    SweepResult epsilon_constraint_sweep(double eta_cov_star, double c_wc, const EtaRange &range, const FrameConfig &frame);

    // Scene-level quantities shared by every sweep point
    struct ScenePerformance
    {
        double eta_cov_star = 0.0;
        double c_wc_bps_hz = 0.0;
        double p_out = 0.0;
        bool outage_violated = false;
        double mean_sinr_db = 0.0;
        HybridDesignResult sensing;
        EnvironmentEstimate estimate;
    };

    struct PipelineSettings
    {
        SensingParams sensing;
        RobustParams robust;
        UncertaintyModel uncertainty;
        EstimationSettings estimation;
        int n_theta = 64;
        int n_phi = 64;
        int n_mc = 200;
        double eps_out = 0.1;
    };

    // Hybrid sensing design, environment estimate and robust precoding for one scene.
    // The worst-case capacity is the Monte-Carlo capacity of the robust arm with truth dust at alpha_max.
    // A cached sensing design for the same scene can be passed in; it is reused as is.
    ScenePerformance evaluate_scene(const Scene &scene, const PipelineSettings &settings, uint64_t seed,
                                    const HybridDesignResult *cached_sensing = nullptr);

    SweepResult epsilon_constraint_sweep(const Scene &scene, const PipelineSettings &settings, const EtaRange &range,
                                         const FrameConfig &frame, uint64_t seed, ScenePerformance *perf = nullptr);
}
