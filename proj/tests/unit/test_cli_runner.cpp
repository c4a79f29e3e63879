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

#include "masc/figures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace masc;
namespace fs = std::filesystem;

namespace
{
    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path scratch(const std::string &name)
    {
        const fs::path p = fs::temp_directory_path() / ("masc_cli_test_" + name);
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }

    fs::path write_file(const fs::path &p, const std::string &text)
    {
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

    // Small grid and short sweeps so the end-to-end runs stay quick
    const char *kFastConfig = "grid.n_theta = 10\n"
                              "grid.n_phi = 10\n"
                              "sensing.max_iter = 2\n"
                              "estimation.trials = 100\n"
                              "estimation.n_obs = 64\n"
                              "mc.trials = 20\n";

    int run_cli(const std::string &args)
    {
        const char *exe = std::getenv("MASC_CLI");
        REQUIRE(exe != nullptr);
        const int rc = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    }
}

TEST_CASE("config parsing", "[cli][config]")
{
    const ScenarioConfig sev = parse_config("dust.preset = severe\n");
    CHECK(sev.scene.dust.particle_density_per_m3 == 5e8);
    CHECK(sev.scene.dust.layer_height_m == 30e3);

    const ScenarioConfig def = parse_config("");
    CHECK(canonical_config_text(def) == canonical_config_text(default_config()));
    CHECK(parse_config("# comment only\n\n   \n").master_seed == default_config().master_seed);

    const ScenarioConfig c = parse_config("seed.master = 42\narray.n_rf = 32  # trailing comment\n");
    CHECK(c.master_seed == 42);
    CHECK(c.scene.array.n_rf == 32);

    try
    {
        parse_config("seed.master = 1\n\nno.such.key = 3\n");
        FAIL("unknown key accepted");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(parse_config("array.n_rf = eight\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("array.n_rf\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("array.n_rf = 999\n"), ValidationError);

    const ScenarioConfig reset = parse_config("seed.master = 9\npreset = table1_default\n");
    CHECK(reset.master_seed == default_config().master_seed);

    // every registered key round-trips through the canonical text
    const ScenarioConfig round = parse_config(canonical_config_text(c));
    CHECK(canonical_config_text(round) == canonical_config_text(c));
    CHECK(config_hash(round) == config_hash(c));
    CHECK(config_hash(c) != config_hash(def));
    CHECK(config_hash(c).size() == 64);
    CHECK_FALSE(config_keys().empty());
}

TEST_CASE("CSV formatting", "[cli][csv]")
{
    CsvTable t({"a", "b"});
    t.row().add(0.1).add("x,y");
    t.row().add(std::numeric_limits<double>::quiet_NaN()).add("say \"hi\"");
    CHECK(t.str() == "a,b\n0.10000000000000001,\"x,y\"\nnan,\"say \"\"hi\"\"\"\n");
    CHECK(CsvTable::format_double(1.0) == "1");
}

TEST_CASE("parallel sweep", "[cli][sweep]")
{
    std::vector<int> pts(40);
    for (int i = 0; i < 40; ++i)
        pts[i] = i;
    auto fn = [](int p, uint64_t seed)
    {
        if (p == 13)
            throw std::runtime_error("poisoned");
        return double(seed % 1000003) + p;
    };

    const auto one = sweep_parallel(pts, fn, 7, 1);
    const auto many = sweep_parallel(pts, fn, 7, 8);
    REQUIRE(one.size() == 40);
    std::set<uint64_t> seeds;
    for (size_t i = 0; i < one.size(); ++i)
    {
        CHECK(one[i].seed == many[i].seed);
        CHECK(one[i].seed == point_seed(7, i));
        seeds.insert(one[i].seed);
        CHECK(one[i].ok() == (i != 13));
        CHECK(many[i].ok() == (i != 13));
        if (one[i].ok())
            CHECK(*one[i].value == *many[i].value);
    }
    CHECK(seeds.size() == 40);
    CHECK(one[13].error == "poisoned");
    CHECK(point_seed(8, 0) != point_seed(7, 0));
}

TEST_CASE("figure runs are deterministic", "[cli][figures]")
{
    ScenarioConfig cfg = parse_config(kFastConfig);
    const std::string before = config_hash(cfg);
    const fs::path a = scratch("det_a"), b = scratch("det_b");

    RunOptions one, eight;
    eight.workers = 8;
    const RunManifest ma = run_figure(FigureId::EstErrorVsSnr, cfg, a.string(), one);
    const RunManifest mb = run_figure(FigureId::EstErrorVsSnr, cfg, b.string(), eight);
    CHECK(config_hash(cfg) == before);
    CHECK(ma.flagged_rows == 0);
    REQUIRE(ma.outputs.size() == mb.outputs.size());
    for (size_t i = 0; i < ma.outputs.size(); ++i)
    {
        const std::string ta = slurp(ma.outputs[i].path), tb = slurp(mb.outputs[i].path);
        CHECK_FALSE(ta.empty());
        CHECK(ta == tb);
    }
    CHECK(slurp(a / "est_error_vs_snr_manifest.json") == slurp(b / "est_error_vs_snr_manifest.json"));

    const std::string head = slurp(ma.outputs[0].path).substr(0, slurp(ma.outputs[0].path).find('\n'));
    CHECK(head.find("rmse_fd_hz") != std::string::npos);
}

TEST_CASE("coverage sweep schema", "[cli][figures]")
{
    ScenarioConfig cfg = parse_config(std::string(kFastConfig) + "sensing.max_iter = 1\n");
    const fs::path out = scratch("cov");
    const RunManifest m = run_figure(FigureId::CoverageVsRf, cfg, out.string(), RunOptions{});
    const fs::path light = out / "coverage_vs_rf_light.csv";
    REQUIRE(fs::exists(light));

    std::istringstream in(slurp(light));
    std::string line;
    std::getline(in, line);
    CHECK(line == "n_rf,method,eta_cov,converged,iterations,status");
    int rows = 0;
    while (std::getline(in, line))
    {
        ++rows;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');)
            f.push_back(x);
        REQUIRE(f.size() == 6);
        const double eta = std::stod(f[2]);
        CHECK(eta >= 0.0);
        CHECK(eta <= 1.0);
    }
    CHECK(rows == 10);
    CHECK(m.flagged_rows == 0);
}

TEST_CASE("command line exit codes", "[cli][exe]")
{
    const fs::path dir = scratch("exe");
    const fs::path good = write_file(dir / "good.cfg", kFastConfig);
    const fs::path unknown = write_file(dir / "unknown.cfg", "foo.bar = 1\n");
    const fs::path invalid = write_file(dir / "invalid.cfg", "array.n_rf = 999\n");

    CHECK(run_cli("validate --config " + good.string()) == 0);
    CHECK(run_cli("presets") == 0);
    CHECK(run_cli("validate --config " + unknown.string()) == 1);
    CHECK(run_cli("validate --config " + invalid.string()) == 1);
    CHECK(run_cli("validate --config " + (dir / "missing.cfg").string()) == 1);
    CHECK(run_cli("run --config " + good.string() + " --figure no_such_figure --out " + dir.string()) == 1);
    CHECK(run_cli("run --config " + good.string() + " --figure est_error_vs_snr --out " + (dir / "o1").string()) == 0);
    CHECK(run_cli("run --config " + good.string() + " --figure est_error_vs_snr --workers 4 --out " + (dir / "o2").string()) == 0);
    CHECK(slurp(dir / "o1" / "est_error_vs_snr.csv") == slurp(dir / "o2" / "est_error_vs_snr.csv"));
    CHECK(fs::exists(dir / "o1" / "est_error_vs_snr_manifest.json"));
}
