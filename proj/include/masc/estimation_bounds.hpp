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
    struct FimSpec
    {
        double snr_linear = 1.0; // |A0 exp(-2 alpha ell)|^2 / sigma_n^2 per sample
        int n_obs = 1;
        double path_len_ell = 1.0;
        double t_bar_sq = 1.0;
        double obs_window_T_s = 1.0;

        void validate() const;
    };

    struct CrlbReport
    {
        double var_alpha_bound = 0.0;
        double var_doppler_bound = 0.0;
        Eigen::Matrix2d fim = Eigen::Matrix2d::Zero();
        double cross_term = 0.0;
    };

    double crlb_alpha(const FimSpec &spec);
    double crlb_doppler(const FimSpec &spec, bool use_window_form = false);

    // Midpoint sampling of [0, T]
    std::vector<double> observation_times(int n_obs, double window_s);
    double mean_square_time(const std::vector<double> &t);

    // Analytic FIM of y_i = A0 exp(-2 alpha ell) exp(j 2 pi f t_i) + n_i with unit-power probe and unit noise.
    // Parameter order: (alpha, f_d).
    Eigen::Matrix2d fim_joint(const FimSpec &spec, double alpha, double f_d, const std::vector<double> &t);
    CrlbReport crlb_report(const FimSpec &spec, double alpha, double f_d, const std::vector<double> &t);

    struct McEstimatorResult
    {
        double var_alpha = 0.0;
        double var_fd = 0.0;
        double rmse_alpha = 0.0;
        double rmse_fd = 0.0;
        double rel_err_alpha = 0.0; // rmse_alpha / |alpha_true|
        double mean_err_alpha = 0.0;
        double mean_err_fd = 0.0;
        int n_trials = 0;
    };

    // ML estimates of (alpha, f_d) from synthetic observations; per-trial streams derived from seed.
    // The amplitude A0 is known to the estimator, the Doppler search window is centred on f_d.
    McEstimatorResult mc_estimator_variance(double true_alpha, double true_fd, const FimSpec &spec,
                                            int n_trials, uint64_t seed);
}
