// SPDX-License-Identifier: Apache-2.0
//
// mapsp - multi-group adjustable phase shift pilot simulator
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mapsp/harness.hpp"
#include "test_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mapsp;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.dims = {4, 32, 4};
    c.taps = 4;
    c.ut_counts = {4, 10};
    c.groups = {2};
    c.snr_db = {0.0, 20.0};
    c.trials = 6;
    c.se_subcarriers = 4;
    c.seed = 42;
    return c;
}

std::string strip_wall(const std::vector<SweepRow> &rows)
{
    std::vector<SweepRow> r = rows;
    for (auto &x : r)
        x.wall_ms = 0.0;
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("key-value parsing")
{
    std::istringstream in("# comment\nM = 8\nsnr_db = 0, 10 ,20 # trailing\n\nmethods = apsp,mapsp\n");
    const KeyValueConfig kv = KeyValueConfig::parse(in);
    CHECK(kv.get_size("M", 0) == 8);
    CHECK(kv.get_doubles("snr_db", {}) == std::vector<double>{0.0, 10.0, 20.0});
    CHECK(kv.get_strings("methods", {}).size() == 2);
    CHECK(kv.get_double("missing", 1.5) == 1.5);
    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(dup), ConfigError);
    std::istringstream noeq("justakey\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(noeq), ConfigError);
    std::istringstream bad("M = eight\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(bad).get_size("M", 0), ConfigError);
}

TEST_CASE("experiment config: defaults, overrides and validation")
{
    std::istringstream in("Nc = 64\nK = 3,6\nQ = 1,3\nzc_variant = mod_n\nmagnitude = rayleigh\nseed = 9\n");
    const ExperimentConfig c = experiment_from(KeyValueConfig::parse(in), false);
    CHECK(c.dims.subcarriers == 64);
    CHECK(c.dims.antennas == 16);
    CHECK(c.ut_counts == std::vector<std::size_t>{3, 6});
    CHECK(c.zc_variant == ZcVariant::ModN);
    CHECK(c.magnitude == MagnitudeModel::Rayleigh);
    CHECK(c.seed == 9);

    std::istringstream unknown("bogus = 1\n");
    CHECK_THROWS_AS(experiment_from(KeyValueConfig::parse(unknown), false), ConfigError);
    std::istringstream empty_snr("snr_db =\n");
    CHECK_THROWS_AS(experiment_from(KeyValueConfig::parse(empty_snr), false), ConfigError);
    std::istringstream zero_trials("trials = 0\n");
    CHECK_THROWS_AS(experiment_from(KeyValueConfig::parse(zero_trials), false), ConfigError);
    std::istringstream zero_q("Q = 0\n");
    CHECK_THROWS_AS(experiment_from(KeyValueConfig::parse(zero_q), false), ConfigError);
    std::istringstream bad_method("methods = apsp, magic\n");
    CHECK_THROWS_AS(experiment_from(KeyValueConfig::parse(bad_method), false), ConfigError);
}

TEST_CASE("MAPSP_SEED overrides the configured seed")
{
    std::istringstream in("seed = 3\n");
    const KeyValueConfig kv = KeyValueConfig::parse(in);
    ::setenv("MAPSP_SEED", "77", 1);
    CHECK(experiment_from(kv).seed == 77);
    CHECK(experiment_from(kv, false).seed == 3);
    ::setenv("MAPSP_SEED", "x", 1);
    CHECK_THROWS_AS(experiment_from(kv), ConfigError);
    ::unsetenv("MAPSP_SEED");
    CHECK(experiment_from(kv).seed == 3);
}

TEST_CASE("csv emission: header, round trip and empty set")
{
    const auto path = std::filesystem::temp_directory_path() / "mapsp_sweep_test.csv";
    emit_csv({}, path);
    CHECK(slurp(path) == std::string(kSweepHeader) + "\n");
    SweepRow r;
    r.method = "mapsp@dl2";
    r.groups = 2;
    r.uts = 12;
    r.snr_db = 17.5;
    r.mse_emp = 0.012345678901;
    r.mse_theory = 1.5e-7;
    r.mse_bound = 3.25e-9;
    r.se_proxy = 44.125;
    r.seed = 123456789012345ULL;
    r.wall_ms = 12.5;
    emit_csv({r, r}, path);
    const std::string text = slurp(path);
    CHECK(text.find('\r') == std::string::npos);
    std::ifstream in(path);
    const auto back = parse_csv(in);
    std::filesystem::remove(path);
    REQUIRE(back.size() == 2);
    CHECK(back[1].method == r.method);
    CHECK(back[1].groups == 2);
    CHECK(back[1].uts == 12);
    CHECK(back[1].snr_db == r.snr_db);
    CHECK(back[1].mse_emp == doctest::Approx(r.mse_emp).epsilon(1e-9));
    CHECK(back[1].mse_theory == doctest::Approx(r.mse_theory).epsilon(1e-9));
    CHECK(back[1].mse_bound == doctest::Approx(r.mse_bound).epsilon(1e-9));
    CHECK(back[1].se_proxy == r.se_proxy);
    CHECK(back[1].seed == r.seed);
    CHECK(back[1].wall_ms == r.wall_ms);
    CHECK_THROWS_AS(emit_csv({}, "/nonexistent-dir/x.csv"), std::runtime_error);
    std::istringstream bad("method,Q\n");
    CHECK_THROWS_AS(parse_csv(bad), std::runtime_error);
}

TEST_CASE("sweep is deterministic and independent of the execution policy")
{
    const ExperimentConfig c = small_config();
    const auto a = run_mse_sweep(c, ExecPolicy::Serial);
    const auto b = run_mse_sweep(c, ExecPolicy::Parallel);
    const auto again = run_mse_sweep(c, ExecPolicy::Parallel);
    CHECK(strip_wall(a) == strip_wall(b));
    CHECK(strip_wall(b) == strip_wall(again));
    // 2 K values x (apsp + mapsp + mapsp_nopre) x 2 SNRs
    CHECK(a.size() == 12);
    for (const auto &r : a) {
        CHECK(r.mse_emp >= 0.0);
        CHECK(r.mse_bound <= r.mse_theory + 1e-15);
        CHECK(r.seed == 42);
    }
    ExperimentConfig other = c;
    other.seed = 43;
    CHECK(strip_wall(run_mse_sweep(other, ExecPolicy::Serial)) != strip_wall(a));
}

TEST_CASE("noise-free sweep with a zero-overlap schedule is exact")
{
    ExperimentConfig c = small_config();
    c.ut_counts = {4};
    c.groups = {1};
    c.methods = {Method::Apsp};
    c.snr_db = {300.0};
    c.trials = 1;
    const auto rows = run_mse_sweep(c, ExecPolicy::Serial);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mse_emp < 1e-9);
}

TEST_CASE("prediction sweep: lag 0 reproduces the estimation sweep and error grows with lag")
{
    ExperimentConfig c = small_config();
    c.ut_counts = {4};
    c.methods = {Method::Apsp, Method::Mapsp};
    c.delta_ell = {0, 1, 2, 3};
    c.nu_tsym = 0.05;
    const auto est = run_mse_sweep(c, ExecPolicy::Serial);
    const auto pred = run_prediction_sweep(c, ExecPolicy::Serial);
    std::vector<SweepRow> lag0;
    for (const auto &r : pred)
        if (r.method.find('@') == std::string::npos)
            lag0.push_back(r);
    CHECK(strip_wall(lag0) == strip_wall(est));
    for (std::size_t i = 0; i + 3 < pred.size(); i += 4) {
        CHECK(pred[i + 1].method.find("@dl1") != std::string::npos);
        for (std::size_t l = 1; l < 4; ++l) {
            CHECK(pred[i + l].mse_emp > pred[i + l - 1].mse_emp);
            CHECK(pred[i + l].mse_theory > pred[i + l - 1].mse_theory);
        }
    }
}

TEST_CASE("se proxy: matched-filter bound and degenerate estimates")
{
    const SystemDims d{8, 32, 4};
    ComplexMatrix h(8, 4);
    h(3, 1) = std::sqrt(8.0 * 32.0);
    const double eta = 1000.0;
    const double se = se_proxy({h}, {h}, eta, d, 8, 1.0);
    CHECK(se == doctest::Approx(std::log2(1.0 + eta * 8.0)).epsilon(0.1));
    CHECK(se_proxy({h}, {h}, eta, d, 8) == doctest::Approx(se * 6.0 / 7.0));
    CHECK(se_proxy({ComplexMatrix(8, 4)}, {h}, eta, d, 8) == doctest::Approx(0.0));
    CHECK_THROWS_AS(se_proxy({h, h}, {h}, eta, d, 8), std::invalid_argument);
    CHECK_THROWS_AS(se_proxy({h}, {h}, eta, d, 0), std::invalid_argument);
    // error-aware combining costs nothing when the reported error is zero
    CHECK(se_proxy({h}, {h}, eta, d, 8, 1.0, {RealMatrix(8, 4)}) == doctest::Approx(se));
    const RealMatrix p(2, 2, 4.0), den(2, 2, 5.0);
    CHECK(wiener_error_variance(p, den)(1, 1) == doctest::Approx(4.0 - 16.0 / 5.0));
}

TEST_CASE("schedule, profile and ensemble files")
{
    const auto dir = std::filesystem::temp_directory_path();
    ExperimentConfig c = small_config();
    write_schedule_csv(c, dir / "mapsp_sched.csv");
    std::istringstream sched(slurp(dir / "mapsp_sched.csv"));
    std::string line;
    std::getline(sched, line);
    CHECK(line == "ut_id,group,shift,final_gamma");
    std::size_t rows = 0;
    while (std::getline(sched, line))
        ++rows;
    CHECK(rows == 4);

    write_profile_csv(64, 1, 0, 1, 9, dir / "mapsp_profile.csv");
    std::istringstream prof(slurp(dir / "mapsp_profile.csv"));
    std::getline(prof, line);
    CHECK(line == "index,magnitude");
    rows = 0;
    while (std::getline(prof, line))
        ++rows;
    CHECK(rows == 64);
    CHECK_THROWS_AS(write_profile_csv(1, 1, 0, 1, 0, dir / "mapsp_profile.csv"), std::invalid_argument);

    c.ensemble_out = (dir / "mapsp_ens.csv").string();
    c.trials = 1;
    run_mse_sweep(c, ExecPolicy::Serial);
    const ChannelEnsemble e = read_ensemble(dir / "mapsp_ens_K10.csv");
    CHECK(e.power.size() == 10);
    for (auto name : {"mapsp_sched.csv", "mapsp_profile.csv", "mapsp_ens_K4.csv", "mapsp_ens_K10.csv"})
        std::filesystem::remove(dir / name);
}

TEST_CASE("built-in self test passes")
{
    std::ostringstream os;
    CHECK(run_selftest(os) == 0);
    CHECK(os.str().find("FAIL") == std::string::npos);
}
