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

#include "masc/robust_comm.hpp"

#include <numeric>
#include <random>

using namespace masc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    cmat random_cmat(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c)
    {
        cmat m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i)
                m(i, j) = complex_normal(rng);
        return m;
    }

    Scene comm_scene(const std::string &preset = "medium")
    {
        Scene s;
        s.dust = dust_preset(preset);
        s.terrain = generate_terrain(s.orbit, s.ground, 3, 2.5, 0.004, 1);
        return s;
    }

    EnvironmentEstimate quiet_estimate(const Scene &s, double u)
    {
        const VisibleRegion grid = visible_region(s.orbit, 8, 8);
        UncertaintyModel unc;
        unc.csi_uncertainty_level = u;
        EstimationSettings est;
        est.noise_scale = 0.0;
        return build_environment_estimate(s, grid, rvec::Constant(grid.size(), 1e-2), 1e-2, unc, est, 1);
    }
}

TEST_CASE("log-det capacity", "[robust][capacity]")
{
    cmat H(1, 1), W(1, 1);
    H << 1.0;
    W << 0.5;
    CHECK_THAT(capacity_logdet(H, W, 4.0, 1.0), WithinRel(1.0, 1e-15));

    std::mt19937_64 rng(1);
    const cmat h = random_cmat(rng, 1, 6), w = random_cmat(rng, 6, 2);
    const double direct = std::log2(1.0 + 3.0 / 0.5 * (h * w).squaredNorm());
    CHECK_THAT(capacity_logdet(h, w, 3.0, 0.5), WithinRel(direct, 1e-12));
}

TEST_CASE("worst case sits at the largest dust coefficient", "[robust][capacity][property]")
{
    Scene s = comm_scene();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> A(0.0, 5e-5);
    for (int k = 0; k < 100; ++k)
    {
        const ChannelRealization real = comm_channel(s, 0.0, rng());
        const ChannelFamily fam = realization_family(s, real);
        const cmat W = random_cmat(rng, s.array.n_elements(), 1);
        double a = A(rng), b = A(rng);
        if (a > b)
            std::swap(a, b);
        const UncertaintySet set{a, b};
        const double wc = worst_case_capacity(W, fam, set, 1.0, 1.0);
        CHECK_THAT(worst_case_capacity_grid(W, fam, set, 1.0, 1.0), WithinAbs(wc, 1e-12));
        CHECK(capacity_logdet(fam(a), W, 1.0, 1.0) >= wc);

        const UncertaintySet point{a, a};
        CHECK(worst_case_capacity(W, fam, point, 1.0, 1.0) == capacity_logdet(fam(a), W, 1.0, 1.0));
    }
    CHECK_THROWS_AS((UncertaintySet{2.0, 1.0}.validate()), ValidationError);
}

TEST_CASE("OMP recovery", "[robust][omp]")
{
    ArrayConfig arr;
    const double lambda = 0.15;
    const cmat D = steering_dictionary(arr, lambda, 0.5, 2);
    REQUIRE(D.cols() > 10);
    for (Eigen::Index j = 0; j < D.cols(); ++j)
        CHECK_THAT(D.col(j).norm(), WithinRel(1.0, 1e-12));

    const cvec h1 = 2.5 * D.col(7);
    const SparseChannel s1 = omp_sparsify(h1, D, 4, 0.0);
    REQUIRE(s1.support.size() == 1);
    CHECK(s1.support[0] == 7);
    CHECK(std::abs(s1.coefficients(0) - cplx(2.5, 0.0)) < 1e-12);
    CHECK(s1.residual_energy < 1e-20);

    // orthonormal atoms: the 4x4 DFT basis
    ArrayConfig small = arr;
    small.n_h = small.n_v = 4;
    cmat Q(16, 16);
    for (int kv = 0; kv < 4; ++kv)
        for (int kh = 0; kh < 4; ++kh)
            Q.col(kv * 4 + kh) = steering_vector_u(small, kh * lambda / (4 * 0.075), kv * lambda / (4 * 0.075), lambda) / 4.0;
    REQUIRE((Q.adjoint() * Q - cmat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(3);
    int exact = 0;
    for (int k = 0; k < 1000; ++k)
    {
        std::vector<int> idx(16);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        const int L = 1 + int(rng() % 3);
        cvec h = cvec::Zero(16);
        for (int i = 0; i < L; ++i)
            h += (1.0 + std::abs(complex_normal(rng))) * std::polar(1.0, double(rng() % 628) / 100.0) * Q.col(idx[i]);
        const SparseChannel sc = omp_sparsify(h, Q, L, 0.0);
        exact += (sc.reconstruct(Q) - h).norm() < 1e-9 * h.norm() ? 1 : 0;
        for (size_t i = 1; i < sc.residual_history.size(); ++i)
            CHECK(sc.residual_history[i] <= sc.residual_history[i - 1]);

        // general (non-orthogonal) dictionary still gives monotone residuals
        const cvec g = random_cmat(rng, D.rows(), 1);
        const SparseChannel sg = omp_sparsify(g, D, 8, 0.0);
        for (size_t i = 1; i < sg.residual_history.size(); ++i)
            CHECK(sg.residual_history[i] <= sg.residual_history[i - 1]);
        CHECK_THAT(sg.residual_history.back(), WithinRel((g - sg.reconstruct(D)).squaredNorm(), 1e-9));
    }
    CHECK(exact == 1000);

    CHECK_THROWS(omp_sparsify(h1, D, 0, 0.0));
    CHECK_THROWS(omp_sparsify(h1, cmat(64, 0), 2, 0.0));
}

TEST_CASE("ADMM covariance design", "[robust][admm]")
{
    std::mt19937_64 rng(4);
    const double p2 = 10.0;

    // rank one, N_t = 2
    const cmat h = random_cmat(rng, 1, 2);
    const AdmmResult r1 = admm_capacity_covariance(h, p2, 1.0);
    const cvec hh = h.adjoint() / h.norm();
    const cmat R1 = p2 * hh * hh.adjoint();
    CHECK((r1.R - R1).norm() < 1e-6 * p2);
    const cmat w1 = precoder_from_covariance(r1.R, 1);
    CHECK_THAT(capacity_logdet(h, w1, 1.0, 1.0), WithinRel(std::log2(1.0 + p2 * h.squaredNorm()), 1e-6));

    // identity channel: uniform power
    const AdmmResult ri = admm_capacity_covariance(cmat::Identity(2, 2), p2, 1.0);
    CHECK((ri.R - 0.5 * p2 * cmat::Identity(2, 2)).norm() < 1e-6 * p2);
    CHECK(ri.converged);

    for (int k = 0; k < 50; ++k)
    {
        const cmat H = random_cmat(rng, 1 + k % 3, 6);
        const AdmmResult r = admm_capacity_covariance(H, p2, 0.5);
        Eigen::SelfAdjointEigenSolver<cmat> es(r.R);
        CHECK(r.R.trace().real() <= p2 * (1.0 + 1e-9));
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        if (r.converged)
        {
            CHECK(r.primal_residual.back() < AdmmSettings{}.eps_abs);
            const size_t start = r.objective.size() / 5;
            for (size_t i = std::max<size_t>(start, 5) + 1; i < r.objective.size(); ++i)
                CHECK(r.objective[i] >= r.objective[i - 1] - 1e-9);
        }
    }

    AdmmSettings bad;
    bad.rho = 0.0;
    CHECK_THROWS(admm_capacity_covariance(h, p2, 1.0, bad));
}

TEST_CASE("PSD trace projection", "[robust][admm]")
{
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k)
    {
        const cmat A0 = random_cmat(rng, 5, 5);
        const cmat A = A0 + A0.adjoint();
        const cmat P = project_psd_trace(A, 2.0);
        Eigen::SelfAdjointEigenSolver<cmat> es(P);
        CHECK(P.trace().real() <= 2.0 + 1e-9);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        CHECK((project_psd_trace(P, 2.0) - P).norm() < 1e-9);
    }
}

TEST_CASE("precoder from covariance", "[robust][factor]")
{
    std::mt19937_64 rng(6);
    const cvec h = random_cmat(rng, 4, 1).col(0).normalized();
    const cmat R = 7.0 * h * h.adjoint();
    const cmat w = precoder_from_covariance(R, 1);
    const cplx phase = w(0, 0) / (std::sqrt(7.0) * h(0));
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    CHECK((w - std::sqrt(7.0) * h * phase).norm() < 1e-9);

    for (int k = 0; k < 100; ++k)
    {
        const cmat X = random_cmat(rng, 5, 5);
        const cmat S = X * X.adjoint();
        Eigen::SelfAdjointEigenSolver<cmat> es(S);
        const rvec lam = es.eigenvalues();
        for (int M = 1; M <= 5; ++M)
        {
            const cmat W = precoder_from_covariance(S, M);
            CHECK_THAT(W.squaredNorm(), WithinRel(lam.tail(M).sum(), 1e-12));
            CHECK((W * W.adjoint() - S).norm() <= lam.head(5 - M).sum() + 1e-9 * S.norm());
        }
        CHECK((precoder_from_covariance(S, 5) * precoder_from_covariance(S, 5).adjoint() - S).norm() < 1e-9 * S.norm());
    }
    CHECK_THROWS(precoder_from_covariance(R, 0));
    CHECK_THROWS(precoder_from_covariance(R, 5));
}

TEST_CASE("dust compensation factor", "[robust][beta]")
{
    CHECK(dust_compensation_factor(0.0, 2e4, 0.3, 10.0, false, 1.5) == 1.0);
    CHECK(dust_compensation_factor(std::log(10.0) / 2e4, 2e4, 0.0, 5.0, false, 1.5) == 5.0);
    CHECK_THAT(dust_compensation_factor(std::log(2.0) / 2e4, 2e4, 0.0, 10.0, true, 1.5), WithinRel(3.0, 1e-12));
    CHECK_THAT(dust_compensation_factor(std::log(2.0) / 2e4, 2e4, 0.0, 10.0, false, 1.5), WithinRel(2.0, 1e-12));
    CHECK_THAT(dust_compensation_factor(1e-5, 2e4, pi / 3, 10.0, false, 1.5), WithinRel(std::exp(0.4), 1e-12));
    CHECK_THROWS_AS(dust_compensation_factor(1e-5, 2e4, pi / 2, 10.0, false, 1.5), ValidationError);
}

TEST_CASE("directional precoder composition", "[robust][directional]")
{
    Scene s = comm_scene();
    EnvironmentEstimate est = quiet_estimate(s, 0.3);
    RobustParams p;
    p.time_s = 0.0123;
    std::mt19937_64 rng(7);
    const cmat V = random_cmat(rng, 64, 3);

    const RobustPrecoder rp = build_directional_precoder(V, est, s, p, true);
    cmat B = cmat::Zero(3, 3), P = cmat::Zero(3, 3), D = cmat::Zero(3, 3);
    for (int m = 0; m < 3; ++m)
    {
        B(m, m) = rp.beta(m);
        P(m, m) = rp.phase_cal(m);
        D(m, m) = rp.doppler(m);
        CHECK_THAT(std::abs(rp.phase_cal(m)), WithinAbs(1.0, 1e-12));
        CHECK_THAT(std::abs(rp.doppler(m)), WithinAbs(1.0, 1e-12));
    }
    cmat W = V * B * P * D;
    W *= std::sqrt(p.p2_w) / W.norm();
    CHECK((rp.w_dir - W).norm() < 1e-12 * W.norm());
    CHECK_THAT(rp.w_dir.squaredNorm(), WithinRel(p.p2_w, 1e-12));
    CHECK(std::abs(rp.phase_cal(0) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(rp.phase_cal(1) - std::polar(1.0, est.phase_offsets_rad[0])) < 1e-12);

    // no dust, no Doppler, single path: W_dir = V_BF up to the power rescale
    Scene clear = s;
    clear.dust = dust_preset("none");
    clear.terrain.clear();
    EnvironmentEstimate e0 = quiet_estimate(clear, 0.0);
    e0.doppler_comm_hz = 0.0;
    const cmat v = random_cmat(rng, 64, 1);
    const RobustPrecoder r0 = build_directional_precoder(v, e0, clear, p, true);
    CHECK((r0.w_dir - v * std::sqrt(p.p2_w) / v.norm()).norm() < 1e-9);
}

TEST_CASE("SINR outage evaluation", "[robust][outage]")
{
    Scene s = comm_scene("light");
    s.terrain.clear();
    s.sigma_mis2 = 0.0;
    RobustParams p;
    const EnvironmentEstimate est = quiet_estimate(s, 0.0);

    // no fading and a strong link: never in outage
    const cvec h = comm_channel_vector(s, comm_channel(s, 0.0, 1));
    const cmat w = h / h.norm() * std::sqrt(p.p2_w);
    const SinrOutageResult fixed = evaluate_sinr_outage(w, s, 50, 9, p);
    CHECK(fixed.p_out == 0.0);
    CHECK_THAT(fixed.mean_sinr_db, WithinAbs(lin2db(p.p2_w * h.squaredNorm()), 1e-9));

    // perfect CSI: the two arms coincide
    Scene t = comm_scene("medium");
    const EnvironmentEstimate et = quiet_estimate(t, 0.0);
    const SinrOutageResult a = evaluate_sinr_outage(make_designer(t, et, 0.0, p, true), t, 0.0, 100, 11, p, -1.0, true);
    const SinrOutageResult b = evaluate_sinr_outage(nonrobust_baseline_precoder(t, et, p), t, 0.0, 100, 11, p, -1.0, true);
    REQUIRE(a.sinr_samples.size() == 100);
    for (size_t k = 0; k < a.sinr_samples.size(); ++k)
        CHECK_THAT(a.sinr_samples[k], WithinRel(b.sinr_samples[k], 1e-9));

    // designs meet the power budget
    const cvec hh = comm_channel_vector(t, comm_channel(t, 0.0, 3));
    for (bool robust : {true, false})
        CHECK_THAT(make_designer(t, et, 0.4, p, robust)(hh).squaredNorm(), WithinRel(p.p2_w, 1e-9));

    const SinrOutageResult c = evaluate_sinr_outage(make_designer(t, et, 0.0, p, true), t, 0.0, 100, 11, p);
    CHECK(c.mean_sinr_db == a.mean_sinr_db);
    CHECK_THROWS(evaluate_sinr_outage(w, s, 0, 1, p));
}

TEST_CASE("robust arm holds up when the dust is at its upper bound", "[robust][outage]")
{
    Scene s = comm_scene("medium");
    RobustParams p;
    const double u = 0.4;
    const EnvironmentEstimate est = quiet_estimate(s, u);
    const double a_max = db_per_km_to_np_per_m(est.alpha_node_hi);
    const SinrOutageResult rob = evaluate_sinr_outage(make_designer(s, est, u, p, true), s, u, 300, 21, p, a_max);
    const SinrOutageResult non = evaluate_sinr_outage(make_designer(s, est, u, p, false), s, u, 300, 21, p, a_max);
    CHECK(rob.capacity_bps_hz >= non.capacity_bps_hz);
}
