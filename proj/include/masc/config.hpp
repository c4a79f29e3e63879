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

#include "masc/resource_allocator.hpp"

#include <map>

namespace masc
{
    struct ScenarioConfig
    {
        Scene scene;
        std::string dust_preset = "medium";
        std::string permittivity_preset = "text";
        int terrain_paths = 3;
        double terrain_eps_r = 2.5;
        double terrain_spread_rad = 0.004;

        PipelineSettings pipeline;
        FrameConfig frame;
        EtaRange sweep;
        uint64_t master_seed = 1;

        int mc_trials = 2000;        // SINR / capacity figures
        int estimation_trials = 500; // estimator Monte Carlo per SNR point

        ScenarioConfig();

        // Regenerates derived scene parts (terrain layout, dust preset)
        void finalize();
        void validate() const;
    };

    // Baseline scenario defaults with the medium dust preset
    ScenarioConfig default_config();

    // Flat "dotted.key = value" text, '#' comments; unknown keys and bad values raise ConfigError with the line
    ScenarioConfig parse_config(const std::string &text);
    ScenarioConfig load_config(const std::string &path);

    // Every key with its current value, one per line, sorted; stable input for hashing
    std::string canonical_config_text(const ScenarioConfig &cfg);

    std::vector<std::string> config_keys();

    // Human-readable listing of the built-in presets
    std::string presets_text();
}
