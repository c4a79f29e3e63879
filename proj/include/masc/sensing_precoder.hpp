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
    struct SensingParams
    {
        double p1_w = 6000.0;
        double gamma_sens_linear = 3.1622776601683794e-4; // -35 dB
        int m_streams = 0;                                // 0: one stream per RF chain
        int max_iter = 50;
        double delta = 1e-4;
        int candidates_per_iter = 8;
        int candidate_stride = 7; // every k-th grid cell is a candidate beam direction
    };

    struct HybridPrecoder
    {
        cmat analog;  // N_t x N_RF, unit modulus
        cmat digital; // N_RF x M
        double power_budget_w = 0.0;

        cmat full() const { return analog * digital; }
    };

    struct CoverageMap
    {
        VisibleRegion grid;
        rvec snr_linear;
        std::vector<uint8_t> covered;
        double eta_cov = 0.0;
    };

    // Per-cell quantities that do not depend on the precoder. Built once per scene.
    struct SensingModel
    {
        VisibleRegion grid;
        rvec weights;
        rvec look_rad;     // off-nadir look angle of each cell
        rvec ux, uy;       // direction cosines in the array frame
        cmat response;     // cells x N_t; row c holds sqrt(b_max) a(cell)^H so response * W = far field
        rvec snr_per_gain; // SNR per unit of G_BF (power-normalised precoder)
        double p1_w = 0.0;
        double gamma = 0.0;
        double sin_look_max = 0.0;

        rvec cand_ux, cand_uy; // candidate beam directions
        rmat cand_gain;        // cells x candidates, G_BF of a unit-power beam
    };

    SensingModel build_sensing_model(const Scene &scene, const SensingParams &params, int n_theta, int n_phi);

    // Sensing SNR towards a ground direction for a precoder already scaled to its power budget
    double sensing_snr(const Scene &scene, double theta, double phi, const cmat &W);

    CoverageMap evaluate_coverage(const cmat &W, const SensingModel &model);
    CoverageMap coverage_from_snr(const rvec &snr, const VisibleRegion &grid, double gamma);

    cmat dft_codebook_init(const ArrayConfig &arr, int n_rf, double lambda, double sin_look_max);

    struct DigitalResult
    {
        cmat digital;
        rvec stream_power;
        double surrogate = 0.0;
        bool regularized = false;
    };

    // Per-stream power split over unit-norm beams, chosen by ascent on a smooth coverage surrogate.
    rvec allocate_stream_powers(const cmat &beams, const SensingModel &model, double *surrogate = nullptr);

    // Least-squares fit of the targets through the analog subspace, then power allocation.
    // If model is null the streams get equal power.
    DigitalResult optimize_digital(const cmat &analog, const cmat &targets, const SensingModel *model, double p1_w);

    cmat project_constant_modulus(const cmat &target);

    struct IterationRecord
    {
        int iteration = 0;
        double eta_cov = 0.0;
        double surrogate = 0.0;
        bool accepted = false;
    };

    struct HybridDesignResult
    {
        HybridPrecoder precoder;
        CoverageMap coverage;
        std::vector<IterationRecord> history;
        bool converged = false;
        int iterations = 0;
        bool regularized = false;
    };

    HybridDesignResult hybrid_precoding_design(const Scene &scene, const SensingModel &model, const SensingParams &params);

    struct DigitalBaseline
    {
        cmat precoder; // N_t x 1
        CoverageMap coverage;
    };

    // Conventional fully-digital arm: full-power matched beam towards the ground node
    DigitalBaseline fully_digital_baseline(const Scene &scene, const SensingModel &model);

    // Transmit beam gain (dBi, element gain included) of a precoder on the model grid
    rvec beam_pattern_dbi(const cmat &W, const SensingModel &model);
}
