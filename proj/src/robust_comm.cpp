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

#include "masc/robust_comm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace masc
{
    void UncertaintySet::validate() const
    {
        if (!(alpha_min >= 0.0 && alpha_min <= alpha_max))
            throw ValidationError("uncertainty set requires 0 <= alpha_min <= alpha_max");
    }

    double capacity_logdet(const cmat &H, const cmat &W, double p2, double sigma_n2)
    {
        const cmat HW = H * W;
        cmat G = cmat::Identity(H.rows(), H.rows()) + (p2 / sigma_n2) * HW * HW.adjoint();
        Eigen::LLT<cmat> llt(G);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("capacity_logdet: matrix not positive definite");
        double s = 0.0;
        for (Eigen::Index i = 0; i < G.rows(); ++i)
            s += 2.0 * std::log(std::real(llt.matrixL()(i, i)));
        return s / std::log(2.0);
    }

    double worst_case_capacity(const cmat &W, const ChannelFamily &family, const UncertaintySet &set,
                               double p2, double sigma_n2)
    {
        set.validate();
        return capacity_logdet(family(set.alpha_max), W, p2, sigma_n2);
    }

    double worst_case_capacity_grid(const cmat &W, const ChannelFamily &family, const UncertaintySet &set,
                                    double p2, double sigma_n2, int n_points)
    {
        set.validate();
        if (n_points < 2)
            throw std::invalid_argument("worst_case_capacity_grid: need at least 2 points");
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n_points; ++k)
        {
            const double a = k == n_points - 1 ? set.alpha_max
                                               : set.alpha_min + k * (set.alpha_max - set.alpha_min) / (n_points - 1);
            best = std::min(best, capacity_logdet(family(a), W, p2, sigma_n2));
        }
        return best;
    }

    cvec SparseChannel::reconstruct(const cmat &dictionary) const
    {
        cvec h = cvec::Zero(dictionary.rows());
        for (size_t i = 0; i < support.size(); ++i)
            h += coefficients(Eigen::Index(i)) * dictionary.col(support[i]);
        return h;
    }

    cmat steering_dictionary(const ArrayConfig &arr, double lambda, double sin_look_max, int oversample)
    {
        if (oversample < 1)
            throw std::invalid_argument("steering_dictionary: oversample must be >= 1");
        const double du = lambda / (arr.n_h * arr.spacing_h_m) / oversample;
        const double dv = lambda / (arr.n_v * arr.spacing_v_m) / oversample;
        const int kx = int(std::floor(sin_look_max / du)), ky = int(std::floor(sin_look_max / dv));

        std::vector<cvec> atoms;
        const double norm = std::sqrt(double(arr.n_elements()));
        for (int iy = -ky; iy <= ky; ++iy)
            for (int ix = -kx; ix <= kx; ++ix)
            {
                const double ux = ix * du, uy = iy * dv;
                if (ux * ux + uy * uy > sin_look_max * sin_look_max)
                    continue;
                atoms.push_back(steering_vector_u(arr, ux, uy, lambda) / norm);
            }
        cmat D(arr.n_elements(), Eigen::Index(atoms.size()));
        for (size_t i = 0; i < atoms.size(); ++i)
            D.col(Eigen::Index(i)) = atoms[i];
        return D;
    }

    SparseChannel omp_sparsify(const cvec &h, const cmat &dictionary, int L, double tol)
    {
        if (dictionary.cols() == 0)
            throw std::invalid_argument("omp_sparsify: empty dictionary");
        if (L < 1)
            throw std::invalid_argument("omp_sparsify: L must be >= 1");
        if (dictionary.rows() != h.size())
            throw std::invalid_argument("omp_sparsify: dictionary rows do not match channel length");

        SparseChannel sc;
        sc.sparsity_L = L;
        const double e0 = h.squaredNorm();
        const double floor = 1e-24 * e0;
        cvec r = h;
        sc.residual_history.push_back(e0);
        sc.residual_energy = e0;
        std::vector<char> used(dictionary.cols(), 0);

        while (int(sc.support.size()) < std::min<Eigen::Index>(L, dictionary.cols()) &&
               sc.residual_energy > std::max(tol, floor))
        {
            const cvec corr = dictionary.adjoint() * r;
            Eigen::Index best = -1;
            double best_v = -1.0;
            for (Eigen::Index k = 0; k < corr.size(); ++k)
                if (!used[k] && std::norm(corr(k)) > best_v)
                    best_v = std::norm(corr(k)), best = k;
            used[best] = 1;
            sc.support.push_back(int(best));

            cmat Ds(h.size(), Eigen::Index(sc.support.size()));
            for (size_t i = 0; i < sc.support.size(); ++i)
                Ds.col(Eigen::Index(i)) = dictionary.col(sc.support[i]);
            sc.coefficients = Ds.colPivHouseholderQr().solve(h);
            r = h - Ds * sc.coefficients;
            // least squares on a growing support cannot increase the residual; clamp rounding noise
            sc.residual_energy = std::min(r.squaredNorm(), sc.residual_energy);
            sc.residual_history.push_back(sc.residual_energy);
        }
        if (sc.support.empty())
            sc.coefficients = cvec();
        return sc;
    }

    namespace
    {
        // Euclidean projection of x onto {x >= 0, sum x <= p}
        rvec project_capped_simplex(const rvec &x, double p)
        {
            rvec y = x.cwiseMax(0.0);
            if (y.sum() <= p)
                return y;
            std::vector<double> s(x.data(), x.data() + x.size());
            std::sort(s.begin(), s.end(), std::greater<double>());
            double cum = 0.0, mu = 0.0;
            for (size_t k = 0; k < s.size(); ++k)
            {
                cum += s[k];
                const double m = (cum - p) / double(k + 1);
                if (k + 1 == s.size() || s[k + 1] <= m)
                {
                    mu = m;
                    break;
                }
            }
            return (x.array() - mu).cwiseMax(0.0);
        }
    }

    cmat project_psd_trace(const cmat &A, double p)
    {
        const cmat Ah = 0.5 * (A + A.adjoint());
        Eigen::SelfAdjointEigenSolver<cmat> es(Ah);
        const rvec lam = project_capped_simplex(es.eigenvalues(), p);
        cmat Z = es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
        return 0.5 * (Z + Z.adjoint());
    }

    AdmmResult admm_capacity_covariance(const cmat &H, double p2, double sigma_n2, const AdmmSettings &settings)
    {
        if (!(settings.rho > 0.0))
            throw std::invalid_argument("admm_capacity_covariance: rho must be positive");
        if (!(p2 > 0.0) || !(sigma_n2 > 0.0))
            throw std::invalid_argument("admm_capacity_covariance: p2 and noise power must be positive");

        const Eigen::Index n = H.cols();
        Eigen::SelfAdjointEigenSolver<cmat> es(H.adjoint() * H / sigma_n2);
        const cmat &Q = es.eigenvectors();
        // Power normalised to trace <= 1 so that rho = 1 is well scaled
        rvec q = es.eigenvalues().cwiseMax(0.0) * p2;
        const double q_floor = 1e-12 * q.maxCoeff();
        for (Eigen::Index i = 0; i < n; ++i)
            if (q(i) <= q_floor)
                q(i) = 0.0;
        const double rho = settings.rho;

        auto objective = [&](const rvec &z)
        {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                s += std::log1p(q(i) * z(i));
            return s / std::log(2.0);
        };

        rvec x = rvec::Zero(n), z = rvec::Zero(n), u = rvec::Zero(n);
        rvec best_z = z;
        double best_obj = objective(z);

        AdmmResult res;
        for (int k = 0; k < settings.max_iter; ++k)
        {
            // R-update: argmin -ln(1 + q x) + rho/2 (x - v)^2 per eigen-direction
            const rvec v = z - u;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                if (q(i) <= 0.0)
                {
                    x(i) = v(i);
                    continue;
                }
                // positive root of rho q x^2 + b x - (rho v + q) = 0, in the cancellation-free form
                const double b = rho * (1.0 - q(i) * v(i));
                const double c = rho * v(i) + q(i);
                const double root = std::sqrt(std::max(b * b + 4.0 * rho * q(i) * c, 0.0));
                x(i) = b >= 0.0 ? 2.0 * c / (b + root) : (root - b) / (2.0 * rho * q(i));
            }
            const rvec z_prev = z;
            z = project_capped_simplex(x + u, 1.0);
            u += x - z;

            const double r_norm = (x - z).norm();
            const double s_norm = rho * (z - z_prev).norm();
            const double obj = objective(z);
            res.primal_residual.push_back(r_norm);
            res.dual_residual.push_back(s_norm);
            res.objective.push_back(obj);
            res.iterations = k + 1;
            if (obj >= best_obj)
                best_obj = obj, best_z = z;
            if (r_norm < settings.eps_abs && s_norm < settings.eps_abs)
            {
                res.converged = true;
                best_z = z;
                break;
            }
        }

        cmat R = p2 * Q * best_z.cast<cplx>().asDiagonal() * Q.adjoint();
        res.R = 0.5 * (R + R.adjoint());
        return res;
    }

    cmat precoder_from_covariance(const cmat &R, int M)
    {
        if (M < 1 || M > R.rows())
            throw std::invalid_argument("precoder_from_covariance: M out of range");
        Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (R + R.adjoint()));
        const Eigen::Index n = R.rows();
        cmat W(n, M);
        for (int m = 0; m < M; ++m)
        {
            const Eigen::Index idx = n - 1 - m; // eigenvalues ascending
            W.col(m) = es.eigenvectors().col(idx) * std::sqrt(std::max(es.eigenvalues()(idx), 0.0));
        }
        return W;
    }

    double dust_compensation_factor(double alpha_max_np, double d, double theta, double beta_max,
                                    bool on_boundary, double gamma_edge)
    {
        if (!(beta_max >= 1.0) || !(gamma_edge >= 1.0))
            throw std::invalid_argument("dust_compensation_factor: beta_max and gamma_edge must be >= 1");
        if (!(std::abs(theta) < pi / 2.0))
            throw ValidationError("dust_compensation_factor: path angle must be below pi/2");
        double beta = std::min(std::exp(alpha_max_np * d / std::cos(theta)), beta_max);
        if (on_boundary)
            beta = std::min(beta * gamma_edge, beta_max);
        return beta;
    }

    RobustPrecoder build_directional_precoder(const cmat &v_bf, const EnvironmentEstimate &est, const Scene &scene,
                                              const RobustParams &params, bool robust)
    {
        const Eigen::Index M = v_bf.cols();
        RobustPrecoder rp;
        rp.v_bf = v_bf;
        rp.power_budget_w = params.p2_w;
        rp.beta.resize(M);
        rp.phase_cal.resize(M);
        rp.doppler.resize(M);

        const double alpha_db = robust ? est.alpha_node_hi : est.alpha_node_hat;
        const double alpha_np = db_per_km_to_np_per_m(std::max(alpha_db, 0.0));
        for (Eigen::Index m = 0; m < M; ++m)
        {
            rp.beta(m) = dust_compensation_factor(alpha_np, scene.dust.layer_height_m, est.zenith_node_rad,
                                                  params.beta_max, robust && est.node_on_boundary, params.gamma_edge);
            const double ph = (m > 0 && size_t(m - 1) < est.phase_offsets_rad.size()) ? est.phase_offsets_rad[m - 1] : 0.0;
            rp.phase_cal(m) = std::polar(1.0, ph);
            rp.doppler(m) = std::polar(1.0, -2.0 * pi * est.doppler_comm_hz * params.time_s);
        }

        rp.w_dir = v_bf * rp.beta.cast<cplx>().asDiagonal() * rp.phase_cal.asDiagonal() * rp.doppler.asDiagonal();
        const double e = rp.w_dir.squaredNorm();
        if (e > 0.0)
            rp.w_dir *= std::sqrt(params.p2_w / e);
        return rp;
    }

    PrecoderDesigner make_designer(const Scene &scene, const EnvironmentEstimate &est, double assumed_u,
                                   const RobustParams &params, bool robust)
    {
        const double sin_look_max = scene.orbit.mars_radius_m / scene.orbit.orbit_radius();
        auto dict = std::make_shared<cmat>();
        if (robust && assumed_u > 0.0)
            *dict = steering_dictionary(scene.array, scene.radio.wavelength(), sin_look_max, params.dictionary_oversample);

        const double a_hat = db_per_km_to_np_per_m(std::max(est.alpha_node_hat, 0.0));
        double a_design = a_hat;
        if (robust)
            a_design = db_per_km_to_np_per_m(std::max({est.alpha_node_hi, est.alpha_node_hat * (1.0 + assumed_u), 0.0}));
        const double dust_ratio = std::exp(-(a_design - a_hat) * est.ell_node_m);

        return [=](const cvec &h_hat) -> cmat
        {
            cvec h = h_hat;
            if (dict->cols() > 0)
            {
                const double tol = assumed_u * assumed_u / (1.0 + assumed_u * assumed_u) * h_hat.squaredNorm();
                h = omp_sparsify(h_hat, *dict, params.omp_L, tol).reconstruct(*dict);
            }
            const cmat H = (dust_ratio * h).adjoint();
            const AdmmResult ar = admm_capacity_covariance(H, params.p2_w, 1.0, params.admm);
            cmat v = precoder_from_covariance(ar.R, 1);
            const double nv = v.norm();
            if (nv > 0.0)
                v /= nv;
            return build_directional_precoder(v, est, scene, params, robust).w_dir;
        };
    }

    PrecoderDesigner nonrobust_baseline_precoder(const Scene &scene, const EnvironmentEstimate &est,
                                                 const RobustParams &params)
    {
        return make_designer(scene, est, 0.0, params, false);
    }

    SinrOutageResult evaluate_sinr_outage(const PrecoderDesigner &designer, const Scene &scene, double u_level,
                                          int n_mc, uint64_t seed, const RobustParams &params,
                                          double alpha_truth_np, bool keep_samples)
    {
        if (n_mc < 1)
            throw std::invalid_argument("evaluate_sinr_outage: n_mc must be >= 1");
        SinrOutageResult res;
        double sum_sinr = 0.0, sum_cap = 0.0;
        int outages = 0;
        for (int k = 0; k < n_mc; ++k)
        {
            const uint64_t s = mix_seed(seed, uint64_t(k));
            ChannelRealization real = comm_channel(scene, params.time_s, mix_seed(s, 1));
            if (alpha_truth_np >= 0.0)
                real = with_dust(real, alpha_truth_np);
            const cvec h = comm_channel_vector(scene, real);

            cvec h_hat = h;
            if (u_level > 0.0)
            {
                std::mt19937_64 rng(mix_seed(s, 2));
                cvec e(h.size());
                for (Eigen::Index i = 0; i < e.size(); ++i)
                    e(i) = complex_normal(rng);
                h_hat += e * (u_level * h.norm() / e.norm());
            }

            const cmat W = designer(h_hat);
            double sig = 0.0, tot = 0.0;
            for (Eigen::Index m = 0; m < W.cols(); ++m)
            {
                sig += std::norm(h.dot(W.col(m)));
                tot += h.squaredNorm() * W.col(m).squaredNorm();
            }
            const double sinr = sig / (params.rho_leak * std::max(tot - sig, 0.0) + 1.0);
            sum_sinr += sinr;
            sum_cap += std::log2(1.0 + sinr);
            if (sinr < params.gamma_th_linear)
                ++outages;
            if (keep_samples)
                res.sinr_samples.push_back(sinr);
        }
        res.mean_sinr_db = lin2db(sum_sinr / n_mc);
        res.capacity_bps_hz = sum_cap / n_mc;
        res.p_out = double(outages) / n_mc;
        return res;
    }

    SinrOutageResult evaluate_sinr_outage(const cmat &w, const Scene &scene, int n_mc, uint64_t seed,
                                          const RobustParams &params)
    {
        return evaluate_sinr_outage([w](const cvec &) { return w; }, scene, 0.0, n_mc, seed, params);
    }

    ChannelFamily realization_family(const Scene &scene, const ChannelRealization &real)
    {
        return [scene, real](double alpha) -> cmat
        {
            return comm_channel_vector(scene, with_dust(real, alpha)).adjoint();
        };
    }
}
