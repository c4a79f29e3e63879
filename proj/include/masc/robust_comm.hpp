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

#include "masc/param_mapping.hpp"

#include <functional>

namespace masc
{
    struct UncertaintySet
    {
        double alpha_min = 0.0;
        double alpha_max = 0.0;

        void validate() const;
    };

    // H_eff as a function of the dust coefficient
    using ChannelFamily = std::function<cmat(double alpha)>;

    // log2 det(I + (p2 / sigma_n2) H W W^H H^H)
    double capacity_logdet(const cmat &H, const cmat &W, double p2, double sigma_n2);

    // Capacity at alpha_max (worst case for a monotone family)
    double worst_case_capacity(const cmat &W, const ChannelFamily &family, const UncertaintySet &set,
                               double p2, double sigma_n2);
    // Brute-force minimum over an evenly spaced grid of the set, endpoints included
    double worst_case_capacity_grid(const cmat &W, const ChannelFamily &family, const UncertaintySet &set,
                                    double p2, double sigma_n2, int n_points = 11);

    struct SparseChannel
    {
        std::vector<int> support;
        cvec coefficients;
        double residual_energy = 0.0;
        int sparsity_L = 0;
        std::vector<double> residual_history; // entry 0 is ||h||^2

        cvec reconstruct(const cmat &dictionary) const;
    };

    // Unit-norm steering atoms on an oversampled direction-cosine grid inside the visible cone
    cmat steering_dictionary(const ArrayConfig &arr, double lambda, double sin_look_max, int oversample = 2);

    // Greedy OMP; stops after L atoms or once the residual energy drops below tol
    SparseChannel omp_sparsify(const cvec &h, const cmat &dictionary, int L, double tol);

    struct AdmmSettings
    {
        double rho = 1.0;
        int max_iter = 500;
        double eps_abs = 1e-6;
    };

    struct AdmmResult
    {
        cmat R; // feasible Z iterate
        bool converged = false;
        int iterations = 0;
        std::vector<double> primal_residual;
        std::vector<double> dual_residual;
        std::vector<double> objective; // log2 det of the Z iterate
    };

    // Capacity-maximising transmit covariance under trace(R) <= p2, R PSD.
    // H is K x N_t; all iterates stay diagonal in the eigenbasis of H^H H, so updates run per eigen-direction.
    AdmmResult admm_capacity_covariance(const cmat &H, double p2, double sigma_n2, const AdmmSettings &settings = {});

    // Projection of a Hermitian matrix onto {PSD, trace <= p}
    cmat project_psd_trace(const cmat &A, double p);

    cmat precoder_from_covariance(const cmat &R, int M);

    double dust_compensation_factor(double alpha_max_np, double d, double theta, double beta_max,
                                    bool on_boundary, double gamma_edge);

    struct RobustParams
    {
        double p2_w = 6000.0;
        double beta_max = 10.0;
        double gamma_edge = 1.5;
        double rho_leak = 0.1;
        double gamma_th_linear = 1.0;
        int omp_L = 8;
        int dictionary_oversample = 2;
        AdmmSettings admm;
        double time_s = 0.0; // start of the communication slot
    };

    struct RobustPrecoder
    {
        cmat w_dir;
        cmat v_bf;
        rvec beta;
        cvec phase_cal; // diagonal of Phi_cal
        cvec doppler;   // diagonal of D
        double power_budget_w = 0.0;
    };

    // W = V_BF diag(beta) Phi_cal D, rescaled to the power budget.
    // Stream 0 is the direct path; stream i > 0 takes the i-th terrain phase offset.
    RobustPrecoder build_directional_precoder(const cmat &v_bf, const EnvironmentEstimate &est, const Scene &scene,
                                              const RobustParams &params, bool robust);

    // Maps a channel estimate to a precoder (columns carry power)
    using PrecoderDesigner = std::function<cmat(const cvec &h_hat)>;

    // Robust arm: OMP clean-up at the assumed uncertainty, covariance designed at alpha_max.
    // Non-robust arm: dense estimate at the nominal coefficient.
    PrecoderDesigner make_designer(const Scene &scene, const EnvironmentEstimate &est, double assumed_u,
                                   const RobustParams &params, bool robust);
    PrecoderDesigner nonrobust_baseline_precoder(const Scene &scene, const EnvironmentEstimate &est,
                                                 const RobustParams &params);

    struct SinrOutageResult
    {
        double mean_sinr_db = 0.0;  // 10 log10 of the mean linear SINR
        double capacity_bps_hz = 0.0;
        double p_out = 0.0;
        std::vector<double> sinr_samples;
    };

    // Realised SINR = |h^H w|^2 / (rho_leak (|h|^2 |w|^2 - |h^H w|^2) + 1), h noise-normalised.
    // Per trial: fresh fading and misalignment, CSI error of norm u |h| in an isotropic direction.
    // alpha_truth_np < 0 keeps the scene dust, otherwise every path is re-attenuated with it.
    SinrOutageResult evaluate_sinr_outage(const PrecoderDesigner &designer, const Scene &scene, double u_level,
                                          int n_mc, uint64_t seed, const RobustParams &params,
                                          double alpha_truth_np = -1.0, bool keep_samples = false);
    SinrOutageResult evaluate_sinr_outage(const cmat &w, const Scene &scene, int n_mc, uint64_t seed,
                                          const RobustParams &params);

    // Channel family of a communication realisation, alpha in Np/m
    ChannelFamily realization_family(const Scene &scene, const ChannelRealization &real);
}
