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

#include "masc/estimation_bounds.hpp"

#include <cmath>
#include <random>

namespace masc
{
    void FimSpec::validate() const
    {
        if (!(snr_linear > 0.0))
            throw ValidationError("FimSpec: snr must be positive");
        if (n_obs < 1)
            throw ValidationError("FimSpec: n_obs must be >= 1");
        if (!(path_len_ell > 0.0))
            throw ValidationError("FimSpec: path length must be positive");
    }

    double crlb_alpha(const FimSpec &spec)
    {
        return 1.0 / (8.0 * spec.path_len_ell * spec.path_len_ell * spec.snr_linear * spec.n_obs);
    }

    double crlb_doppler(const FimSpec &spec, bool use_window_form)
    {
        if (use_window_form)
            return 3.0 / (8.0 * pi * pi * spec.snr_linear * spec.n_obs * spec.obs_window_T_s * spec.obs_window_T_s);
        return 1.0 / (8.0 * pi * pi * spec.snr_linear * spec.n_obs * spec.t_bar_sq);
    }

    std::vector<double> observation_times(int n_obs, double window_s)
    {
        std::vector<double> t(n_obs);
        for (int i = 0; i < n_obs; ++i)
            t[i] = (i + 0.5) * window_s / n_obs;
        return t;
    }

    double mean_square_time(const std::vector<double> &t)
    {
        double s = 0.0;
        for (double x : t)
            s += x * x;
        return t.empty() ? 0.0 : s / double(t.size());
    }

    Eigen::Matrix2d fim_joint(const FimSpec &spec, double alpha, double f_d, const std::vector<double> &t)
    {
        if (t.empty())
            throw std::invalid_argument("fim_joint: no samples");

        // Amplitude after dust so that |mu|^2 = SNR with unit noise power
        const double A = std::sqrt(spec.snr_linear);
        const double A0 = A * std::exp(2.0 * alpha * spec.path_len_ell);

        Eigen::Matrix2d F = Eigen::Matrix2d::Zero();
        for (double ti : t)
        {
            const cplx mu = A0 * std::exp(-2.0 * alpha * spec.path_len_ell) * std::polar(1.0, 2.0 * pi * f_d * ti);
            const double p = std::norm(mu);
            // d mu / d alpha = -2 ell mu, d mu / d f = j 2 pi t mu
            F(0, 0) += 2.0 * 4.0 * spec.path_len_ell * spec.path_len_ell * p;
            F(1, 1) += 2.0 * 4.0 * pi * pi * ti * ti * p;
            // conj(-2 ell mu) (j 2 pi t mu) = -j 4 pi ell t |mu|^2 has no real part
            F(0, 1) += 2.0 * std::real(cplx(0.0, -4.0 * pi * spec.path_len_ell * ti * p));
        }
        F(1, 0) = F(0, 1);
        return F;
    }

    CrlbReport crlb_report(const FimSpec &spec, double alpha, double f_d, const std::vector<double> &t)
    {
        CrlbReport r;
        r.fim = fim_joint(spec, alpha, f_d, t);
        r.cross_term = r.fim(0, 1);
        r.var_alpha_bound = crlb_alpha(spec);
        r.var_doppler_bound = crlb_doppler(spec, false);
        return r;
    }

    McEstimatorResult mc_estimator_variance(double true_alpha, double true_fd, const FimSpec &spec,
                                            int n_trials, uint64_t seed)
    {
        if (n_trials < 100)
            throw std::invalid_argument("mc_estimator_variance: need at least 100 trials");
        spec.validate();

        const std::vector<double> t = observation_times(spec.n_obs, spec.obs_window_T_s);
        const int N = spec.n_obs;
        const double T = spec.obs_window_T_s;
        const double ell = spec.path_len_ell;
        const double A = std::sqrt(spec.snr_linear);
        const double A0 = A * std::exp(2.0 * ell * true_alpha);

        std::vector<cplx> y(N);
        auto score = [&](double f)
        {
            double s = 0.0;
            for (int i = 0; i < N; ++i)
                s += std::real(y[i] * std::polar(1.0, -2.0 * pi * f * t[i]));
            return s;
        };

        double se_a = 0.0, se_f = 0.0, sum_a = 0.0, sum_f = 0.0, sum_a2 = 0.0, sum_f2 = 0.0;
        for (int k = 0; k < n_trials; ++k)
        {
            std::mt19937_64 rng(mix_seed(seed, uint64_t(k)));
            std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
            for (int i = 0; i < N; ++i)
            {
                const double re = nd(rng);
                const double im = nd(rng);
                y[i] = A * std::polar(1.0, 2.0 * pi * true_fd * t[i]) + cplx(re, im);
            }

            // coarse grid over the tracking window, then golden-section refinement
            const int n_grid = 64;
            const double lo = true_fd - 1.0 / T, hi = true_fd + 1.0 / T;
            const double step = (hi - lo) / (n_grid - 1);
            int best = 0;
            double best_s = -1e300;
            for (int g = 0; g < n_grid; ++g)
            {
                const double s = score(lo + g * step);
                if (s > best_s)
                    best_s = s, best = g;
            }
            double a = lo + (best - 1) * step, b = lo + (best + 1) * step;
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double c = b - gr * (b - a), d = a + gr * (b - a);
            double sc = score(c), sd = score(d);
            while (b - a > 1e-9 / T)
            {
                if (sc > sd)
                    b = d, d = c, sd = sc, c = b - gr * (b - a), sc = score(c);
                else
                    a = c, c = d, sc = sd, d = a + gr * (b - a), sd = score(d);
            }
            const double f_hat = 0.5 * (a + b);
            const double b_hat = std::max(score(f_hat) / N, 1e-300);
            const double alpha_hat = -std::log(b_hat / A0) / (2.0 * ell);

            const double ea = alpha_hat - true_alpha, ef = f_hat - true_fd;
            sum_a += ea, sum_f += ef;
            sum_a2 += ea * ea, sum_f2 += ef * ef;
            se_a += ea * ea, se_f += ef * ef;
        }

        McEstimatorResult r;
        r.n_trials = n_trials;
        r.mean_err_alpha = sum_a / n_trials;
        r.mean_err_fd = sum_f / n_trials;
        r.var_alpha = (sum_a2 - n_trials * r.mean_err_alpha * r.mean_err_alpha) / (n_trials - 1);
        r.var_fd = (sum_f2 - n_trials * r.mean_err_fd * r.mean_err_fd) / (n_trials - 1);
        r.rmse_alpha = std::sqrt(se_a / n_trials);
        r.rmse_fd = std::sqrt(se_f / n_trials);
        r.rel_err_alpha = true_alpha != 0.0 ? r.rmse_alpha / std::abs(true_alpha) : 0.0;
        return r;
    }
}
