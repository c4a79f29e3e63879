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

#include "masc/sensing_precoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace masc
{
    namespace
    {
        // Receive-side factors: array gain of the digital receive beam and chirp compression gain
        double receive_gain(const Scene &scene)
        {
            return scene.array.max_gain_linear * scene.array.n_elements() * scene.radio.processing_gain();
        }

        // SNR per unit transmit beam gain towards a ground point
        double snr_factor(const Scene &scene, const LookGeometry &lg, double theta, double phi)
        {
            const double lambda = scene.radio.wavelength();
            const double g_dust = dust_gain(dust_alpha_at(scene, theta, phi), lg.zenith_rad,
                                            scene.dust.layer_height_m, dust_path_length(scene, 0.5 * pi));
            const double l_prop = fspl_two_way(lg.slant_range_m, lambda) / (g_dust * g_dust) * scene.l_other;
            return receive_gain(scene) * scene.ground.rcs_m2 / (l_prop * scene.radio.noise_power_w());
        }

        double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
    }

    SensingModel build_sensing_model(const Scene &scene, const SensingParams &params, int n_theta, int n_phi)
    {
        SensingModel m;
        m.grid = visible_region(scene.orbit, n_theta, n_phi);
        m.p1_w = params.p1_w;
        m.gamma = params.gamma_sens_linear;
        m.sin_look_max = scene.orbit.mars_radius_m / scene.orbit.orbit_radius();

        const size_t n = m.grid.size();
        const int nt = scene.array.n_elements();
        const double lambda = scene.radio.wavelength();
        const double amp = std::sqrt(scene.array.max_gain_linear);

        m.weights.resize(n);
        m.look_rad.resize(n);
        m.ux.resize(n);
        m.uy.resize(n);
        m.snr_per_gain.resize(n);
        m.response.resize(n, nt);

        for (size_t c = 0; c < n; ++c)
        {
            const GridCell &cell = m.grid.grid[c];
            const LookGeometry lg = look_geometry(scene.orbit, cell.theta_rad, cell.phi_rad);
            m.weights(c) = cell.weight_sr;
            m.look_rad(c) = lg.look_angle_rad;
            m.ux(c) = lg.u_local.x();
            m.uy(c) = lg.u_local.y();
            m.snr_per_gain(c) = snr_factor(scene, lg, cell.theta_rad, cell.phi_rad);
            m.response.row(c) = amp * steering_vector_u(scene.array, m.ux(c), m.uy(c), lambda).adjoint();
        }

        // Candidate beam directions for the target step: a regular subsample of the cells
        std::vector<Eigen::Index> idx;
        for (size_t c = 0; c < n; c += std::max<size_t>(1, params.candidate_stride))
            idx.push_back(Eigen::Index(c));
        m.cand_ux.resize(idx.size());
        m.cand_uy.resize(idx.size());
        cmat beams(nt, idx.size());
        for (size_t j = 0; j < idx.size(); ++j)
        {
            m.cand_ux(j) = m.ux(idx[j]);
            m.cand_uy(j) = m.uy(idx[j]);
            beams.col(j) = m.response.row(idx[j]).adjoint() / (amp * std::sqrt(double(nt)));
        }
        m.cand_gain = (m.response * beams).cwiseAbs2();
        return m;
    }

    double sensing_snr(const Scene &scene, double theta, double phi, const cmat &W)
    {
        const LookGeometry lg = look_geometry(scene.orbit, theta, phi);
        const cvec a = std::sqrt(scene.array.max_gain_linear) *
                       steering_vector(scene.array, lg.look_angle_rad, phi, scene.radio.wavelength());
        const double g_bf = (a.adjoint() * W).squaredNorm();
        return g_bf * snr_factor(scene, lg, theta, phi);
    }

    CoverageMap coverage_from_snr(const rvec &snr, const VisibleRegion &grid, double gamma)
    {
        CoverageMap cm;
        cm.grid = grid;
        cm.snr_linear = snr;
        cm.covered.assign(grid.size(), 0);
        double num = 0.0, den = 0.0;
        for (size_t c = 0; c < grid.size(); ++c)
        {
            den += grid.grid[c].weight_sr;
            if (snr(c) >= gamma)
            {
                cm.covered[c] = 1;
                num += grid.grid[c].weight_sr;
            }
        }
        cm.eta_cov = den > 0.0 ? num / den : 0.0;
        return cm;
    }

    CoverageMap evaluate_coverage(const cmat &W, const SensingModel &model)
    {
        const rvec g = (model.response * W).rowwise().squaredNorm();
        return coverage_from_snr(g.cwiseProduct(model.snr_per_gain), model.grid, model.gamma);
    }

    static double coverage_of_gain(const rvec &gain, const SensingModel &model)
    {
        double num = 0.0;
        for (Eigen::Index c = 0; c < gain.size(); ++c)
            if (gain(c) * model.snr_per_gain(c) >= model.gamma)
                num += model.weights(c);
        return num / model.weights.sum();
    }

    cmat dft_codebook_init(const ArrayConfig &arr, int n_rf, double lambda, double sin_look_max)
    {
        const int nt = arr.n_elements();
        if (n_rf > nt || n_rf < 1)
            throw std::invalid_argument("dft_codebook_init: need 1 <= n_rf <= N_t");

        struct Beam
        {
            double uh, uv;
        };
        std::vector<Beam> inside, outside;

        // Direction cosine of DFT bin k, wrapped to the principal interval
        auto bin_u = [&](int k, int N, double spacing)
        {
            const double period = lambda / spacing;
            double u = k * period / N;
            if (u >= 0.5 * period)
                u -= period;
            return u;
        };

        for (int kv = 0; kv < arr.n_v; ++kv)
            for (int kh = 0; kh < arr.n_h; ++kh)
            {
                Beam b{bin_u(kh, arr.n_h, arr.spacing_h_m), bin_u(kv, arr.n_v, arr.spacing_v_m)};
                (std::hypot(b.uh, b.uv) <= sin_look_max ? inside : outside).push_back(b);
            }

        std::vector<Beam> chosen;
        if (n_rf >= int(inside.size()))
        {
            chosen = inside;
            std::stable_sort(outside.begin(), outside.end(), [](const Beam &a, const Beam &b)
                             { return std::hypot(a.uh, a.uv) < std::hypot(b.uh, b.uv); });
            for (int i = 0; int(chosen.size()) < n_rf; ++i)
                chosen.push_back(outside[i]);
        }
        else
        {
            // Farthest-point selection so the chosen beams spread over the cone
            std::vector<double> dist(inside.size(), 1e300);
            size_t next = 0;
            for (size_t i = 1; i < inside.size(); ++i)
                if (std::hypot(inside[i].uh, inside[i].uv) < std::hypot(inside[next].uh, inside[next].uv))
                    next = i;
            while (int(chosen.size()) < n_rf)
            {
                chosen.push_back(inside[next]);
                for (size_t i = 0; i < inside.size(); ++i)
                    dist[i] = std::min(dist[i], std::hypot(inside[i].uh - inside[next].uh, inside[i].uv - inside[next].uv));
                next = size_t(std::max_element(dist.begin(), dist.end()) - dist.begin());
            }
        }

        cmat W(nt, n_rf);
        for (int j = 0; j < n_rf; ++j)
            W.col(j) = steering_vector_u(arr, chosen[j].uh, chosen[j].uv, lambda);
        return W;
    }

    rvec allocate_stream_powers(const cmat &beams, const SensingModel &model, double *surrogate)
    {
        const Eigen::Index M = beams.cols();
        rvec p = rvec::Constant(M, model.p1_w / double(M));
        if (M == 1)
        {
            if (surrogate)
                *surrogate = coverage_of_gain((model.response * beams * std::sqrt(p(0))).rowwise().squaredNorm(), model);
            return p;
        }

        // per-stream gain on every cell, scaled to SNR over threshold
        const rmat resp = (model.response * beams).cwiseAbs2();
        rmat q = resp;
        for (Eigen::Index c = 0; c < q.rows(); ++c)
            q.row(c) *= model.snr_per_gain(c) / model.gamma;

        const double tau = 0.3, step = 0.5;
        const rvec w = model.weights / model.weights.sum();
        auto eval = [&](const rvec &pp, double &sur, double &cov)
        {
            const rvec x = q * pp;
            sur = 0.0, cov = 0.0;
            for (Eigen::Index c = 0; c < x.size(); ++c)
            {
                sur += w(c) * sigmoid(std::log(std::max(x(c), 1e-300)) / tau);
                if (x(c) >= 1.0)
                    cov += w(c);
            }
        };

        double best_cov, best_sur;
        eval(p, best_sur, best_cov);
        rvec best = p;
        for (int it = 0; it < 40; ++it)
        {
            // gradient of the sigmoid surrogate; weights peak on cells near the threshold
            const rvec x = q * p;
            rvec cw(x.size());
            for (Eigen::Index c = 0; c < x.size(); ++c)
            {
                const double s = sigmoid(std::log(std::max(x(c), 1e-300)) / tau);
                cw(c) = w(c) * s * (1.0 - s) / (tau * std::max(x(c), 1e-300));
            }
            const rvec g = q.transpose() * cw;
            const double gmax = g.cwiseAbs().maxCoeff();
            if (!(gmax > 0.0))
                break;
            for (Eigen::Index m = 0; m < M; ++m)
                p(m) *= std::exp(step * g(m) / gmax);
            p *= model.p1_w / p.sum();

            double sur, cov;
            eval(p, sur, cov);
            if (cov > best_cov || (cov == best_cov && sur > best_sur))
                best_cov = cov, best_sur = sur, best = p;
        }
        if (surrogate)
            *surrogate = best_sur;
        return best;
    }

    DigitalResult optimize_digital(const cmat &analog, const cmat &targets, const SensingModel *model, double p1_w)
    {
        const Eigen::Index nrf = analog.cols();
        DigitalResult res;

        cmat gram = analog.adjoint() * analog;
        Eigen::SelfAdjointEigenSolver<cmat> es(gram, Eigen::EigenvaluesOnly);
        const double emax = es.eigenvalues().maxCoeff(), emin = es.eigenvalues().minCoeff();
        if (!(emin > 1e-10 * emax))
        {
            gram += cmat::Identity(nrf, nrf) * (1e-8 * gram.trace().real() / double(nrf));
            res.regularized = true;
        }
        cmat B = gram.ldlt().solve(analog.adjoint() * targets);

        // unit-norm streams at the antenna side
        for (Eigen::Index m = 0; m < B.cols(); ++m)
        {
            const double nrm = (analog * B.col(m)).norm();
            if (nrm > 0.0)
                B.col(m) /= nrm;
        }

        if (model)
            res.stream_power = allocate_stream_powers(analog * B, *model, &res.surrogate);
        else
            res.stream_power = rvec::Constant(B.cols(), p1_w / double(B.cols()));

        for (Eigen::Index m = 0; m < B.cols(); ++m)
            B.col(m) *= std::sqrt(res.stream_power(m));

        const double pw = (analog * B).squaredNorm();
        if (pw > 0.0)
            B *= std::sqrt(p1_w / pw);
        res.digital = B;
        return res;
    }

    cmat project_constant_modulus(const cmat &target)
    {
        cmat out(target.rows(), target.cols());
        for (Eigen::Index j = 0; j < target.cols(); ++j)
            for (Eigen::Index i = 0; i < target.rows(); ++i)
            {
                cplx z = target(i, j);
                if (!(std::abs(z) > 0.0))
                {
                    out(i, j) = cplx(1.0, 0.0);
                    continue;
                }
                // renormalise until rounding settles, so projecting twice is bit-identical
                for (int k = 0; k < 4; ++k)
                {
                    const cplx w = z / std::abs(z);
                    if (w == z)
                        break;
                    z = w;
                }
                out(i, j) = z;
            }
        return out;
    }

    HybridDesignResult hybrid_precoding_design(const Scene &scene, const SensingModel &model, const SensingParams &params)
    {
        if (!(params.delta > 0.0))
            throw std::invalid_argument("hybrid_precoding_design: delta must be positive");

        const double lambda = scene.radio.wavelength();
        const int nrf = scene.array.n_rf;
        const int M = params.m_streams > 0 ? params.m_streams : nrf;

        HybridDesignResult out;
        cmat analog = dft_codebook_init(scene.array, nrf, lambda, model.sin_look_max);

        // Target beams start on the codebook directions; extra streams reuse them cyclically
        cmat targets(analog.rows(), M);
        for (int m = 0; m < M; ++m)
            targets.col(m) = analog.col(m % nrf);

        DigitalResult dig = optimize_digital(analog, targets, &model, params.p1_w);
        out.regularized = dig.regularized;
        CoverageMap cov = evaluate_coverage(analog * dig.digital, model);
        out.history.push_back({0, cov.eta_cov, dig.surrogate, true});

        const Eigen::Index n_cand = model.cand_gain.cols();
        for (int k = 1; k <= params.max_iter; ++k)
        {
            out.iterations = k;
            const cmat W = analog * dig.digital;
            const rmat stream_gain = (model.response * W).cwiseAbs2();
            const rvec total = stream_gain.rowwise().sum();

            // Streams contributing least: coverage lost when each one is switched off
            std::vector<std::pair<double, int>> loss;
            for (int m = 0; m < M; ++m)
                loss.push_back({cov.eta_cov - coverage_of_gain(total - stream_gain.col(m), model), m});
            std::stable_sort(loss.begin(), loss.end());

            // Target step: re-point a weak stream towards the candidate direction that gains most coverage
            struct Move
            {
                double eta;
                int stream;
                Eigen::Index cand;
            };
            std::vector<Move> moves;
            const int n_swap = std::min(M, 4);
            for (int s = 0; s < n_swap; ++s)
            {
                const int m = loss[s].second;
                // a starved stream is scored as if it received an equal share of the budget
                const double pm = std::max(W.col(m).squaredNorm(), params.p1_w / M);
                const rvec base = (total - stream_gain.col(m)) * ((params.p1_w - pm) / std::max(params.p1_w - W.col(m).squaredNorm(), 1e-300));
                std::vector<Move> per;
                for (Eigen::Index j = 0; j < n_cand; ++j)
                    per.push_back({coverage_of_gain(base + pm * model.cand_gain.col(j), model), m, j});
                std::stable_sort(per.begin(), per.end(), [](const Move &a, const Move &b)
                                 { return a.eta > b.eta; });
                for (size_t i = 0; i < per.size() && i < 2; ++i)
                    moves.push_back(per[i]);
            }
            std::stable_sort(moves.begin(), moves.end(), [](const Move &a, const Move &b)
                             { return a.eta > b.eta; });

            double best_eta = cov.eta_cov;
            cmat best_analog, best_targets;
            DigitalResult best_dig;
            const int n_try = std::min<int>(params.candidates_per_iter, int(moves.size()));
            for (int t = 0; t < n_try; ++t)
            {
                const Move &mv = moves[t];
                cmat t2 = targets;
                t2.col(mv.stream) = steering_vector_u(scene.array, model.cand_ux(mv.cand), model.cand_uy(mv.cand), lambda);

                // unconstrained target precoder, then phase projection through the current digital stage
                cmat w_target = t2;
                for (int m = 0; m < M; ++m)
                    w_target.col(m) *= std::sqrt(dig.stream_power(m)) / t2.col(m).norm();
                cmat a2 = project_constant_modulus(w_target * dig.digital.adjoint());

                DigitalResult d2 = optimize_digital(a2, t2, &model, params.p1_w);
                const double eta = coverage_of_gain((model.response * (a2 * d2.digital)).rowwise().squaredNorm(), model);
                if (eta > best_eta)
                {
                    best_eta = eta;
                    best_analog = a2;
                    best_targets = t2;
                    best_dig = d2;
                }
            }

            const double prev = cov.eta_cov;
            if (best_eta > prev)
            {
                analog = best_analog;
                targets = best_targets;
                dig = best_dig;
                out.regularized |= dig.regularized;
                cov = evaluate_coverage(analog * dig.digital, model);
                out.history.push_back({k, cov.eta_cov, dig.surrogate, true});
            }
            else
                out.history.push_back({k, prev, dig.surrogate, false});

            if (std::abs(cov.eta_cov - prev) < params.delta)
            {
                out.converged = true;
                break;
            }
        }

        out.precoder.analog = analog;
        out.precoder.digital = dig.digital;
        out.precoder.power_budget_w = params.p1_w;
        out.coverage = cov;
        return out;
    }

    DigitalBaseline fully_digital_baseline(const Scene &scene, const SensingModel &model)
    {
        const LookGeometry lg = look_geometry(scene.orbit, scene.ground.central_angle_rad, scene.ground.azimuth_rad);
        const cvec a = steering_vector(scene.array, lg.look_angle_rad, lg.azimuth_rad, scene.radio.wavelength());

        DigitalBaseline b;
        b.precoder = a * std::sqrt(model.p1_w) / a.norm();
        b.coverage = evaluate_coverage(b.precoder, model);
        return b;
    }

    rvec beam_pattern_dbi(const cmat &W, const SensingModel &model)
    {
        const double pw = W.squaredNorm();
        rvec g = (model.response * W).rowwise().squaredNorm() / (pw > 0.0 ? pw : 1.0);
        for (Eigen::Index c = 0; c < g.size(); ++c)
            g(c) = 10.0 * std::log10(std::max(g(c), 1e-30));
        return g;
    }
}
