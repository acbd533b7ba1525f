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

#pragma once

#include "mapsp/channel.hpp"
#include "mapsp/zc_pilot.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>

namespace mapsp {

/// Thrown for malformed or out-of-range configuration. what() is a single line.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` document. '#' starts a comment; blank lines are ignored.
class KeyValueConfig
{
  public:
    static KeyValueConfig parse(std::istream &in, const std::string &source = "<input>");
    static KeyValueConfig load(const std::filesystem::path &path);

    bool has(const std::string &key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string> &values() const noexcept { return values_; }
    void set(const std::string &key, const std::string &value) { values_[key] = value; }

    std::string get_string(const std::string &key, const std::string &def) const;
    double get_double(const std::string &key, double def) const;
    std::size_t get_size(const std::string &key, std::size_t def) const;
    long long get_int(const std::string &key, long long def) const;
    bool get_bool(const std::string &key, bool def) const;
    std::vector<double> get_doubles(const std::string &key, const std::vector<double> &def) const;
    std::vector<std::size_t> get_sizes(const std::string &key, const std::vector<std::size_t> &def) const;
    std::vector<std::string> get_strings(const std::string &key, const std::vector<std::string> &def) const;

  private:
    std::string source_;
    std::map<std::string, std::string> values_;
    std::map<std::string, std::size_t> lines_;

    [[noreturn]] void fail(const std::string &key, const std::string &msg) const;
};

enum class Method
{
    Apsp,       // one group
    Mapsp,      // Q groups with inter-group pre-processing
    MapspNoPre, // Q groups, plain MMSE
};

std::string method_name(Method m);
Method parse_method(const std::string &s);

struct ExperimentConfig
{
    SystemDims dims{16, 128, 16};
    std::size_t taps = 16;
    std::size_t angular_span = 0; // 0: every beam
    double tap_decay = 0.0;
    double mu_jitter = 0.1;
    double mu_ramp = 1.0;
    MagnitudeModel magnitude = MagnitudeModel::Deterministic;

    std::vector<std::size_t> groups{2};
    std::vector<std::size_t> ut_counts{4, 8, 12};
    std::vector<double> snr_db{0.0, 10.0, 20.0, 30.0};
    std::vector<Method> methods{Method::Apsp, Method::Mapsp, Method::MapspNoPre};
    std::vector<std::size_t> delta_ell{0};
    std::size_t trials = 200;
    double nu_tsym = 0.0314;
    double sigma_bar_sq = 0.01;
    double upsilon = 1e-7;
    long long zc_root = 1;
    ZcVariant zc_variant = ZcVariant::Standard;
    std::size_t se_subcarriers = 8;
    std::uint64_t seed = 1;
    std::size_t threads = 0; // 0: OpenMP default
    std::string output = "sweep.csv";
    std::string ensemble_out; // optional: write trial-0 power/argument ensemble per K

    void validate() const;
    ChannelParams channel_params() const;
};

// Build from a parsed document. Unknown keys are rejected. MAPSP_SEED, when set, overrides `seed`.
ExperimentConfig experiment_from(const KeyValueConfig &kv, bool honour_env = true);
ExperimentConfig load_experiment(const std::filesystem::path &path, bool honour_env = true);

} // namespace mapsp
