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

#include "masc/figures.hpp"
#include "masc/estimation_bounds.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace masc
{
    namespace fs = std::filesystem;

    namespace
    {
        const std::vector<std::pair<FigureId, std::string>> &figure_table()
        {
            static const std::vector<std::pair<FigureId, std::string>> t = {
                {FigureId::CoverageVsRf, "coverage_vs_rf"},
                {FigureId::BeamPatterns, "beam_patterns"},
                {FigureId::EstErrorVsSnr, "est_error_vs_snr"},
                {FigureId::CapacityVsUncertainty, "capacity_vs_uncertainty"},
                {FigureId::SinrVsUncertainty, "sinr_vs_uncertainty"},
                {FigureId::ParetoFronts, "pareto_fronts"},
                {FigureId::OperatingPoints, "operating_points"},
            };
            return t;
        }

        const std::vector<std::string> kPresets = {"light", "medium", "severe"};
        const std::vector<int> kRfChains = {4, 8, 16, 32, 64};
        const std::vector<double> kSnrDb = {0.0, 5.0, 10.0, 15.0, 20.0};
        const std::vector<double> kParetoU = {0.1, 0.3, 0.5};

        std::vector<double> uncertainty_levels()
        {
            std::vector<double> u;
            for (int k = 1; k <= 8; ++k)
                u.push_back(0.1 * k);
            return u;
        }

        std::string label_u(double u)
        {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%.1f", u);
            return buf;
        }

        struct Writer
        {
            std::string dir;
            std::string fig;
            RunManifest *manifest;

            void emit(const std::string &file, const CsvTable &t)
            {
                const std::string path = (fs::path(dir) / file).string();
                t.write(path);
                manifest->outputs.push_back({fig, path, t.rows()});
            }
        };

        std::string error_status(const std::string &e) { return "error: " + e; }

        // ---- coverage_vs_rf -------------------------------------------------------------

        struct CoveragePoint
        {
            std::string preset;
            int n_rf;
        };
        struct CoverageOut
        {
            double hybrid;
            double digital;
            bool converged;
            int iterations;
        };

        void coverage_vs_rf(const ScenarioConfig &cfg, Writer &w, const RunOptions &opts)
        {
            std::vector<CoveragePoint> pts;
            for (const auto &p : kPresets)
                for (int n : kRfChains)
                    pts.push_back({p, n});

            auto res = sweep_parallel(
                pts, [&](const CoveragePoint &pt, uint64_t)
                {
                    Scene s = scene_with_preset(cfg, pt.preset);
                    s.array.n_rf = pt.n_rf;
                    s.array.validate();
                    SensingParams sp = cfg.pipeline.sensing;
                    sp.m_streams = 0;
                    const SensingModel model = build_sensing_model(s, sp, cfg.pipeline.n_theta, cfg.pipeline.n_phi);
                    const HybridDesignResult h = hybrid_precoding_design(s, model, sp);
                    const DigitalBaseline d = fully_digital_baseline(s, model);
                    return CoverageOut{h.coverage.eta_cov, d.coverage.eta_cov, h.converged, h.iterations}; },
                cfg.master_seed, opts.workers);

            for (const auto &preset : kPresets)
            {
                CsvTable t({"n_rf", "method", "eta_cov", "converged", "iterations", "status"});
                for (size_t i = 0; i < pts.size(); ++i)
                {
                    if (pts[i].preset != preset)
                        continue;
                    const auto &r = res[i];
                    for (const char *method : {"hybrid", "digital"})
                    {
                        t.row().add(pts[i].n_rf).add(method);
                        if (r.ok())
                        {
                            const bool hyb = std::string(method) == "hybrid";
                            t.add(hyb ? r.value->hybrid : r.value->digital)
                                .add(hyb ? r.value->converged : true)
                                .add(hyb ? r.value->iterations : 0)
                                .add("ok");
                        }
                        else
                        {
                            t.add(std::nan("")).add(false).add(0).add(error_status(r.error));
                            ++w.manifest->flagged_rows;
                        }
                    }
                }
                w.emit("coverage_vs_rf_" + preset + ".csv", t);
            }
        }

        // ---- beam_patterns --------------------------------------------------------------

        void beam_patterns(const ScenarioConfig &cfg, Writer &w)
        {
            const Scene &s = cfg.scene;
            const SensingModel model = build_sensing_model(s, cfg.pipeline.sensing, cfg.pipeline.n_theta, cfg.pipeline.n_phi);
            const HybridDesignResult h = hybrid_precoding_design(s, model, cfg.pipeline.sensing);
            const DigitalBaseline d = fully_digital_baseline(s, model);
            const rvec gh = beam_pattern_dbi(h.precoder.full(), model);
            const rvec gd = beam_pattern_dbi(d.precoder, model);

            CsvTable t({"theta_rad", "phi_rad", "weight_sr", "gain_dbi_hybrid", "gain_dbi_digital", "snr_db_hybrid",
                        "snr_db_digital", "covered_hybrid", "covered_digital"});
            for (size_t c = 0; c < model.grid.size(); ++c)
            {
                const auto &cell = model.grid.grid[c];
                t.row().add(cell.theta_rad).add(cell.phi_rad).add(cell.weight_sr);
                t.add(gh(c)).add(gd(c));
                t.add(lin2db(h.coverage.snr_linear(c))).add(lin2db(d.coverage.snr_linear(c)));
                t.add(bool(h.coverage.covered[c])).add(bool(d.coverage.covered[c]));
            }
            w.emit("beam_patterns.csv", t);
        }

        // ---- est_error_vs_snr -----------------------------------------------------------

        struct EstPoint
        {
            size_t snr_index;
            std::string preset;
        };

        void est_error_vs_snr(const ScenarioConfig &cfg, Writer &w, const RunOptions &opts)
        {
            std::vector<EstPoint> pts;
            for (size_t k = 0; k < kSnrDb.size(); ++k)
                for (const auto &p : kPresets)
                    pts.push_back({k, p});

            struct Out
            {
                McEstimatorResult mc;
                double crlb_alpha;
                double crlb_fd;
            };
            auto res = sweep_parallel(
                pts, [&](const EstPoint &pt, uint64_t)
                {
                    const Scene s = scene_with_preset(cfg, pt.preset);
                    const LookGeometry lg = look_geometry(s.orbit, s.ground.central_angle_rad, s.ground.azimuth_rad);
                    const double alpha = db_per_km_to_np_per_m(dust_alpha_at(s, s.ground.central_angle_rad, s.ground.azimuth_rad));
                    const double ell = dust_path_length(s, lg.zenith_rad);

                    FimSpec spec;
                    // two-way dust loss applied to the nominal SNR
                    spec.snr_linear = db2lin(kSnrDb[pt.snr_index]) * std::exp(-4.0 * alpha * ell);
                    spec.n_obs = cfg.pipeline.estimation.n_obs;
                    spec.path_len_ell = ell;
                    spec.obs_window_T_s = cfg.pipeline.estimation.window_s;
                    spec.t_bar_sq = mean_square_time(observation_times(spec.n_obs, spec.obs_window_T_s));
                    const double fd = sensing_channel(s, 0.0).main_doppler_hz;

                    // common random numbers across dust presets at one SNR
                    const uint64_t seed = point_seed(cfg.master_seed, pt.snr_index);
                    Out o;
                    o.mc = mc_estimator_variance(alpha, fd, spec, cfg.estimation_trials, seed);
                    o.crlb_alpha = crlb_alpha(spec);
                    o.crlb_fd = crlb_doppler(spec, false);
                    return o; },
                cfg.master_seed, opts.workers);

            CsvTable t({"snr_db", "dust_preset", "var_alpha", "crlb_alpha", "var_fd", "crlb_fd", "rel_err_alpha",
                        "rmse_fd_hz", "status"});
            for (size_t i = 0; i < pts.size(); ++i)
            {
                t.row().add(kSnrDb[pts[i].snr_index]).add(pts[i].preset);
                const auto &r = res[i];
                if (r.ok())
                    t.add(r.value->mc.var_alpha).add(r.value->crlb_alpha).add(r.value->mc.var_fd).add(r.value->crlb_fd)
                        .add(r.value->mc.rel_err_alpha).add(r.value->mc.rmse_fd).add("ok");
                else
                {
                    for (int k = 0; k < 6; ++k)
                        t.add(std::nan(""));
                    t.add(error_status(r.error));
                    ++w.manifest->flagged_rows;
                }
            }
            w.emit("est_error_vs_snr.csv", t);
        }

        // ---- capacity / sinr vs uncertainty ---------------------------------------------

        struct ArmOut
        {
            SinrOutageResult nominal;
            SinrOutageResult worst;
        };
        struct UncOut
        {
            ArmOut robust;
            ArmOut nonrobust;
        };

        std::vector<PointResult<UncOut>> uncertainty_sweep(const ScenarioConfig &cfg, const RunOptions &opts, bool with_worst)
        {
            const Scene &s = cfg.scene;
            const SensingModel model = build_sensing_model(s, cfg.pipeline.sensing, cfg.pipeline.n_theta, cfg.pipeline.n_phi);
            const HybridDesignResult h = hybrid_precoding_design(s, model, cfg.pipeline.sensing);
            const double snr_node = sensing_snr(s, s.ground.central_angle_rad, s.ground.azimuth_rad, h.precoder.full());
            const std::vector<double> us = uncertainty_levels();

            return sweep_parallel(
                us, [&](double u, uint64_t)
                {
                    UncertaintyModel unc = cfg.pipeline.uncertainty;
                    unc.csi_uncertainty_level = u;
                    // same estimation noise and Monte-Carlo draws for every uncertainty level and both arms
                    const EnvironmentEstimate est = build_environment_estimate(s, model.grid, h.coverage.snr_linear, snr_node, unc,
                                                                               cfg.pipeline.estimation, mix_seed(cfg.master_seed, 1));
                    const uint64_t mc_seed = mix_seed(cfg.master_seed, 2);
                    const RobustParams &rp = cfg.pipeline.robust;
                    const double a_max = db_per_km_to_np_per_m(std::max(est.alpha_node_hi, 0.0));

                    UncOut o;
                    const PrecoderDesigner rob = make_designer(s, est, u, rp, true);
                    const PrecoderDesigner non = nonrobust_baseline_precoder(s, est, rp);
                    o.robust.nominal = evaluate_sinr_outage(rob, s, u, cfg.mc_trials, mc_seed, rp);
                    o.nonrobust.nominal = evaluate_sinr_outage(non, s, u, cfg.mc_trials, mc_seed, rp);
                    if (with_worst)
                    {
                        o.robust.worst = evaluate_sinr_outage(rob, s, u, cfg.mc_trials, mc_seed, rp, a_max);
                        o.nonrobust.worst = evaluate_sinr_outage(non, s, u, cfg.mc_trials, mc_seed, rp, a_max);
                    }
                    return o; },
                cfg.master_seed, opts.workers);
        }

        void capacity_vs_uncertainty(const ScenarioConfig &cfg, Writer &w, const RunOptions &opts)
        {
            const auto us = uncertainty_levels();
            const auto res = uncertainty_sweep(cfg, opts, true);
            CsvTable t({"csi_uncertainty", "method", "capacity_bps_per_hz", "worst_case_capacity_bps_per_hz", "p_out", "status"});
            for (size_t i = 0; i < us.size(); ++i)
                for (const char *m : {"robust", "nonrobust"})
                {
                    t.row().add(us[i]).add(m);
                    if (res[i].ok())
                    {
                        const ArmOut &a = std::string(m) == "robust" ? res[i].value->robust : res[i].value->nonrobust;
                        t.add(a.nominal.capacity_bps_hz).add(a.worst.capacity_bps_hz).add(a.nominal.p_out).add("ok");
                    }
                    else
                    {
                        t.add(std::nan("")).add(std::nan("")).add(std::nan("")).add(error_status(res[i].error));
                        ++w.manifest->flagged_rows;
                    }
                }
            w.emit("capacity_vs_uncertainty.csv", t);
        }

        void sinr_vs_uncertainty(const ScenarioConfig &cfg, Writer &w, const RunOptions &opts)
        {
            const auto us = uncertainty_levels();
            const auto res = uncertainty_sweep(cfg, opts, false);
            CsvTable t({"csi_uncertainty", "method", "mean_sinr_db", "p_out", "status"});
            for (size_t i = 0; i < us.size(); ++i)
                for (const char *m : {"robust", "nonrobust"})
                {
                    t.row().add(us[i]).add(m);
                    if (res[i].ok())
                    {
                        const ArmOut &a = std::string(m) == "robust" ? res[i].value->robust : res[i].value->nonrobust;
                        t.add(a.nominal.mean_sinr_db).add(a.nominal.p_out).add("ok");
                    }
                    else
                    {
                        t.add(std::nan("")).add(std::nan("")).add(error_status(res[i].error));
                        ++w.manifest->flagged_rows;
                    }
                }
            w.emit("sinr_vs_uncertainty.csv", t);
        }

        // ---- pareto_fronts / operating_points -------------------------------------------

        std::map<std::string, PointResult<HybridDesignResult>> sensing_per_preset(const ScenarioConfig &cfg,
                                                                                  const RunOptions &opts)
        {
            auto res = sweep_parallel(
                kPresets, [&](const std::string &p, uint64_t)
                {
                    const Scene s = scene_with_preset(cfg, p);
                    const SensingModel model = build_sensing_model(s, cfg.pipeline.sensing, cfg.pipeline.n_theta, cfg.pipeline.n_phi);
                    return hybrid_precoding_design(s, model, cfg.pipeline.sensing); },
                cfg.master_seed, opts.workers);
            std::map<std::string, PointResult<HybridDesignResult>> out;
            for (size_t i = 0; i < kPresets.size(); ++i)
                out[kPresets[i]] = std::move(res[i]);
            return out;
        }

        struct ParetoCase
        {
            std::string preset;
            double u;
        };
        struct ParetoOut
        {
            SweepResult sweep;
            double eta_star;
            double c_wc;
        };

        std::vector<PointResult<ParetoOut>> pareto_cases(const ScenarioConfig &cfg, const std::vector<ParetoCase> &cases,
                                                        const RunOptions &opts)
        {
            const auto sensing = sensing_per_preset(cfg, opts);
            return sweep_parallel(
                cases, [&](const ParetoCase &c, uint64_t seed)
                {
                    const auto &sd = sensing.at(c.preset);
                    if (!sd.ok())
                        throw std::runtime_error("sensing design failed: " + sd.error);
                    const Scene s = scene_with_preset(cfg, c.preset);
                    PipelineSettings ps = cfg.pipeline;
                    ps.uncertainty.csi_uncertainty_level = c.u;
                    const ScenePerformance perf = evaluate_scene(s, ps, seed, &*sd.value);
                    ParetoOut o;
                    o.eta_star = perf.eta_cov_star;
                    o.c_wc = perf.c_wc_bps_hz;
                    o.sweep = epsilon_constraint_sweep(perf.eta_cov_star, perf.c_wc_bps_hz, cfg.sweep, cfg.frame);
                    return o; },
                cfg.master_seed, opts.workers);
        }

        void pareto_fronts(const ScenarioConfig &cfg, Writer &w, const RunOptions &opts)
        {
            std::vector<ParetoCase> cases;
            for (const auto &p : kPresets)
                for (double u : kParetoU)
                    cases.push_back({p, u});
            const auto res = pareto_cases(cfg, cases, opts);

            for (size_t i = 0; i < cases.size(); ++i)
            {
                CsvTable t({"eta_min", "eta_eff", "c_eff_bps_per_hz", "t_sens_s", "t_comm_s", "feasible", "mode_label"});
                if (res[i].ok())
                {
                    const SweepResult &sr = res[i].value->sweep;
                    std::vector<char> on_front(sr.points.size(), 0);
                    for (const auto &f : sr.front)
                        on_front[f.sweep_index] = 1;
                    for (size_t k = 0; k < sr.points.size(); ++k)
                    {
                        const auto &p = sr.points[k];
                        if (p.feasible && !on_front[k])
                            continue; // dominated
                        t.row().add(p.eta_min_constraint).add(p.eta_eff).add(p.c_eff_bps_hz).add(p.t_sens_s).add(p.t_comm_s)
                            .add(p.feasible).add(p.mode_label);
                    }
                }
                else
                {
                    t.row().add(std::nan("")).add(std::nan("")).add(std::nan("")).add(std::nan("")).add(std::nan(""))
                        .add(false).add(error_status(res[i].error));
                    ++w.manifest->flagged_rows;
                }
                w.emit("pareto_" + cases[i].preset + "_u" + label_u(cases[i].u) + ".csv", t);
            }
        }

        void operating_points(const ScenarioConfig &cfg, Writer &w, const RunOptions &opts)
        {
            std::vector<ParetoCase> cases;
            for (const auto &p : kPresets)
                cases.push_back({p, cfg.pipeline.uncertainty.csi_uncertainty_level});
            const auto res = pareto_cases(cfg, cases, opts);

            CsvTable t({"dust_preset", "mode", "eta_min", "eta_eff", "c_eff_bps_per_hz", "t_sens_s", "t_comm_s",
                        "eta_cov_star", "c_wc_bps_per_hz", "status"});
            for (size_t i = 0; i < cases.size(); ++i)
            {
                if (!res[i].ok() || res[i].value->sweep.front.empty())
                {
                    t.row().add(cases[i].preset).add("");
                    for (int k = 0; k < 7; ++k)
                        t.add(std::nan(""));
                    t.add(res[i].ok() ? std::string("error: empty front") : error_status(res[i].error));
                    ++w.manifest->flagged_rows;
                    continue;
                }
                const ParetoOut &o = *res[i].value;
                const std::pair<const char *, int> modes[] = {{"comm_priority", o.sweep.modes.comm_priority},
                                                              {"balanced", o.sweep.modes.balanced},
                                                              {"sensing_priority", o.sweep.modes.sensing_priority}};
                for (const auto &[name, idx] : modes)
                {
                    const ParetoPoint &p = o.sweep.front[idx];
                    t.row().add(cases[i].preset).add(name).add(p.eta_min_constraint).add(p.eta_eff).add(p.c_eff_bps_hz)
                        .add(p.t_sens_s).add(p.t_comm_s).add(o.eta_star).add(o.c_wc).add("ok");
                }
            }
            w.emit("operating_points.csv", t);
        }
    }

    FigureId figure_from_string(const std::string &name)
    {
        for (const auto &[id, n] : figure_table())
            if (n == name)
                return id;
        throw ValidationError("unknown figure id '" + name + "'");
    }

    std::string figure_name(FigureId id)
    {
        for (const auto &[i, n] : figure_table())
            if (i == id)
                return n;
        return "unknown";
    }

    std::vector<std::string> figure_names()
    {
        std::vector<std::string> v;
        for (const auto &e : figure_table())
            v.push_back(e.second);
        return v;
    }

    std::string RunManifest::json() const
    {
        nlohmann::ordered_json j;
        j["config_hash"] = config_hash;
        j["tool_version"] = tool_version;
        j["master_seed"] = master_seed;
        j["flagged_rows"] = flagged_rows;
        j["outputs"] = nlohmann::ordered_json::array();
        for (const auto &o : outputs)
            // file names only, so a manifest does not depend on where the run was written
            j["outputs"].push_back({{"figure_id", o.figure_id}, {"file", fs::path(o.path).filename().string()}, {"row_count", o.row_count}});
        return j.dump(2) + "\n";
    }

    std::string config_hash(const ScenarioConfig &cfg)
    {
        const std::string text = canonical_config_text(cfg);
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("SHA-256 failed");
        std::string hex;
        char buf[3];
        for (unsigned int i = 0; i < len; ++i)
        {
            std::snprintf(buf, sizeof buf, "%02x", md[i]);
            hex += buf;
        }
        return hex;
    }

    Scene scene_with_preset(const ScenarioConfig &cfg, const std::string &preset)
    {
        Scene s = cfg.scene;
        DustScenario d = dust_preset(preset);
        d.eps_real = cfg.scene.dust.eps_real;
        d.eps_imag = cfg.scene.dust.eps_imag;
        d.mean_radius_m = cfg.scene.dust.mean_radius_m;
        d.d_max_m = cfg.scene.dust.d_max_m;
        s.dust = d;
        return s;
    }

    RunManifest run_figure(FigureId id, const ScenarioConfig &cfg, const std::string &out_dir, const RunOptions &opts)
    {
        cfg.validate();
        fs::create_directories(out_dir);

        RunManifest m;
        m.config_hash = config_hash(cfg);
        m.tool_version = MASC_VERSION;
        m.master_seed = cfg.master_seed;
        Writer w{out_dir, figure_name(id), &m};

        switch (id)
        {
        case FigureId::CoverageVsRf:
            coverage_vs_rf(cfg, w, opts);
            break;
        case FigureId::BeamPatterns:
            beam_patterns(cfg, w);
            break;
        case FigureId::EstErrorVsSnr:
            est_error_vs_snr(cfg, w, opts);
            break;
        case FigureId::CapacityVsUncertainty:
            capacity_vs_uncertainty(cfg, w, opts);
            break;
        case FigureId::SinrVsUncertainty:
            sinr_vs_uncertainty(cfg, w, opts);
            break;
        case FigureId::ParetoFronts:
            pareto_fronts(cfg, w, opts);
            break;
        case FigureId::OperatingPoints:
            operating_points(cfg, w, opts);
            break;
        }

        const std::string path = (fs::path(out_dir) / (figure_name(id) + "_manifest.json")).string();
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << m.json();
        if (!f)
            throw std::runtime_error("cannot write manifest '" + path + "'");
        return m;
    }
}
