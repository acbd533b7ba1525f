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

#include "mapsp/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

// Failures print exactly one line: "error: <kind>: <message>".
int fail(const char *kind, const std::string &msg)
{
    std::string one_line = msg;
    for (auto &c : one_line)
        if (c == '\n' || c == '\r')
            c = ' ';
    std::cerr << "error: " << kind << ": " << one_line << '\n';
    return 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mapsp: multi-group adjustable phase shift pilot simulator"};
    app.require_subcommand(1);

    std::string sweep_config;
    bool serial = false;
    auto *sweep = app.add_subcommand("sweep", "Run an estimation/prediction sweep and write CSV");
    sweep->add_option("--config", sweep_config, "Config file (key = value)")->required();
    sweep->add_flag("--serial", serial, "Run trials on one thread");

    std::size_t nc = 0;
    long long root_a = 1, root_b = 1;
    std::size_t shift_a = 0, shift_b = 0;
    std::string profile_out;
    auto *profile = app.add_subcommand("profile", "Write |ADPCM| of two ZC pilots as CSV");
    profile->add_option("--nc", nc, "Sequence length")->required();
    profile->add_option("--root-a", root_a, "Root of pilot a")->required();
    profile->add_option("--shift-a", shift_a, "Phase shift of pilot a")->required();
    profile->add_option("--root-b", root_b, "Root of pilot b")->required();
    profile->add_option("--shift-b", shift_b, "Phase shift of pilot b")->required();
    profile->add_option("--out", profile_out, "Output CSV")->required();

    std::string sched_config, sched_out;
    auto *sched = app.add_subcommand("schedule", "Schedule trial 0 of a config and write CSV");
    sched->add_option("--config", sched_config, "Config file (key = value)")->required();
    sched->add_option("--out", sched_out, "Output CSV")->required();

    auto *selftest = app.add_subcommand("selftest", "Run built-in oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail("usage", e.what());
    }

    try {
        if (*sweep) {
            const auto cfg = mapsp::load_experiment(sweep_config);
            const auto policy = serial ? mapsp::ExecPolicy::Serial : mapsp::ExecPolicy::Parallel;
            auto rows = mapsp::run_prediction_sweep(cfg, policy);
            mapsp::emit_csv(rows, cfg.output);
            std::cout << "wrote " << rows.size() << " rows to " << cfg.output << '\n';
        } else if (*profile) {
            mapsp::write_profile_csv(nc, root_a, shift_a, root_b, shift_b, profile_out);
        } else if (*sched) {
            const auto cfg = mapsp::load_experiment(sched_config);
            mapsp::write_schedule_csv(cfg, sched_out);
        } else if (*selftest) {
            const int failures = mapsp::run_selftest(std::cout);
            if (failures != 0)
                return fail("selftest", std::to_string(failures) + " check(s) failed");
        }
    } catch (const mapsp::ConfigError &e) {
        return fail("config", e.what());
    } catch (const std::invalid_argument &e) {
        return fail("invalid_argument", e.what());
    } catch (const std::domain_error &e) {
        return fail("domain", e.what());
    } catch (const std::exception &e) {
        return fail("runtime", e.what());
    }
    return 0;
}
