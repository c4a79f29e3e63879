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

#include "masc/config.hpp"
#include "masc/csv.hpp"

#include <atomic>
#include <optional>
#include <thread>

namespace masc
{
    enum class FigureId
    {
        CoverageVsRf,
        BeamPatterns,
        EstErrorVsSnr,
        CapacityVsUncertainty,
        SinrVsUncertainty,
        ParetoFronts,
        OperatingPoints
    };

    FigureId figure_from_string(const std::string &name);
    std::string figure_name(FigureId id);
    std::vector<std::string> figure_names();

    struct OutputFile
    {
        std::string figure_id;
        std::string path;
        size_t row_count = 0;
    };

    struct RunManifest
    {
        std::string config_hash;
        std::string tool_version;
        uint64_t master_seed = 0;
        std::vector<OutputFile> outputs;
        int flagged_rows = 0; // rows whose point failed

        std::string json() const;
    };

    // Hex SHA-256 of the canonical config text
    std::string config_hash(const ScenarioConfig &cfg);

    template <class T>
    struct PointResult
    {
        std::optional<T> value;
        std::string error;
        uint64_t seed = 0;
        bool ok() const { return value.has_value(); }
    };

    inline uint64_t point_seed(uint64_t master_seed, size_t index) { return mix_seed(master_seed, uint64_t(index)); }

    // Evaluates fn(point, seed) for every point on a small thread pool. Results come back in input order,
    // seeds depend only on (master_seed, index), and an exception only marks its own point as failed.
    template <class P, class F>
    auto sweep_parallel(const std::vector<P> &points, F fn, uint64_t master_seed, int workers)
        -> std::vector<PointResult<decltype(fn(points[0], uint64_t(0)))>>
    {
        using T = decltype(fn(points[0], uint64_t(0)));
        std::vector<PointResult<T>> out(points.size());
        std::atomic<size_t> next{0};
        auto work = [&]
        {
            for (size_t i = next++; i < points.size(); i = next++)
            {
                out[i].seed = point_seed(master_seed, i);
                try
                {
                    out[i].value.emplace(fn(points[i], out[i].seed));
                }
                catch (const std::exception &e)
                {
                    out[i].error = e.what();
                }
            }
        };
        const int n = std::max(1, std::min<int>(workers, int(points.size())));
        std::vector<std::thread> pool;
        for (int w = 1; w < n; ++w)
            pool.emplace_back(work);
        work();
        for (auto &t : pool)
            t.join();
        return out;
    }

    struct RunOptions
    {
        int workers = 1;
    };

    // Runs one figure sweep, writes its CSV panels and <figure>_manifest.json into out_dir
    RunManifest run_figure(FigureId id, const ScenarioConfig &cfg, const std::string &out_dir, const RunOptions &opts = {});

    // Scene for a given dust preset, keeping every other setting of the config
    Scene scene_with_preset(const ScenarioConfig &cfg, const std::string &preset);
}
