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

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"masc: Mars ISAC simulation runner"};
    app.set_version_flag("--version", std::string(MASC_VERSION));
    app.require_subcommand(1);

    std::string config_path, figure, out_dir;
    uint64_t seed = 0;
    int workers = 1;

    auto *run = app.add_subcommand("run", "Run one figure sweep and write CSV panels plus a JSON manifest");
    run->add_option("--config", config_path, "Scenario config file")->required();
    run->add_option("--figure", figure, "Figure id")->required()->check(CLI::IsMember(masc::figure_names()));
    run->add_option("--out", out_dir, "Output directory")->required();
    auto *seed_opt = run->add_option("--seed", seed, "Master seed (overrides seed.master)");
    run->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1, 256));

    auto *validate = app.add_subcommand("validate", "Parse and validate a config file");
    validate->add_option("--config", config_path, "Scenario config file")->required();

    app.add_subcommand("presets", "Print the built-in parameter presets");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try
    {
        if (app.got_subcommand("presets"))
        {
            std::cout << masc::presets_text();
            return 0;
        }

        masc::ScenarioConfig cfg = masc::load_config(config_path);
        if (app.got_subcommand("validate"))
        {
            std::cout << "ok " << masc::config_hash(cfg) << "\n";
            return 0;
        }

        if (*seed_opt)
            cfg.master_seed = seed;
        masc::RunOptions opts;
        opts.workers = workers;
        const masc::RunManifest m = masc::run_figure(masc::figure_from_string(figure), cfg, out_dir, opts);
        for (const auto &o : m.outputs)
            std::cout << o.path << " (" << o.row_count << " rows)\n";
        if (m.flagged_rows > 0)
        {
            std::cerr << m.flagged_rows << " flagged rows\n";
            return 3;
        }
        return 0;
    }
    catch (const masc::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    catch (const masc::ValidationError &e)
    {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
