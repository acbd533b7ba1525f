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

#include "mapsp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace mapsp {

namespace {

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

bool parse_double(const std::string &s, double &out)
{
    const char *b = s.data();
    const char *e = b + s.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && ptr == e;
}

bool parse_ll(const std::string &s, long long &out)
{
    const char *b = s.data();
    const char *e = b + s.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && ptr == e;
}

const std::set<std::string> &known_keys()
{
    static const std::set<std::string> keys{
        "M",          "Nc",          "Ng",         "taps",          "angular_span", "tap_decay",
        "mu_jitter",  "mu_ramp", "magnitude",   "Q",          "K",             "snr_db",       "methods",
        "delta_ell",  "trials",      "nu_tsym",    "sigma_bar_sq",  "upsilon",      "zc_root",
        "zc_variant", "se_subcarriers", "seed",    "threads",       "output",       "ensemble_out",
    };
    return keys;
}

} // namespace

KeyValueConfig KeyValueConfig::parse(std::istream &in, const std::string &source)
{
    KeyValueConfig cfg;
    cfg.source_ = source;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.values_.count(key))
            throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.values_[key] = value;
        cfg.lines_[key] = lineno;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path.string());
    return parse(in, path.string());
}

void KeyValueConfig::fail(const std::string &key, const std::string &msg) const
{
    std::string where = source_;
    const auto it = lines_.find(key);
    if (it != lines_.end())
        where += ":" + std::to_string(it->second);
    throw ConfigError(where + ": key '" + key + "': " + msg);
}

std::string KeyValueConfig::get_string(const std::string &key, const std::string &def) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
}

double KeyValueConfig::get_double(const std::string &key, double def) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        return def;
    double v = 0.0;
    if (!parse_double(it->second, v))
        fail(key, "not a number: '" + it->second + "'");
    return v;
}

long long KeyValueConfig::get_int(const std::string &key, long long def) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        return def;
    long long v = 0;
    if (!parse_ll(it->second, v))
        fail(key, "not an integer: '" + it->second + "'");
    return v;
}

std::size_t KeyValueConfig::get_size(const std::string &key, std::size_t def) const
{
    const long long v = get_int(key, static_cast<long long>(def));
    if (v < 0)
        fail(key, "must be non-negative");
    return static_cast<std::size_t>(v);
}

bool KeyValueConfig::get_bool(const std::string &key, bool def) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        return def;
    if (it->second == "true" || it->second == "1" || it->second == "yes")
        return true;
    if (it->second == "false" || it->second == "0" || it->second == "no")
        return false;
    fail(key, "not a boolean: '" + it->second + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string &key, const std::vector<double> &def) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        return def;
    std::vector<double> out;
    for (const auto &s : split_list(it->second)) {
        double v = 0.0;
        if (!parse_double(s, v))
            fail(key, "not a number: '" + s + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::size_t> KeyValueConfig::get_sizes(const std::string &key, const std::vector<std::size_t> &def) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        return def;
    std::vector<std::size_t> out;
    for (const auto &s : split_list(it->second)) {
        long long v = 0;
        if (!parse_ll(s, v) || v < 0)
            fail(key, "not a non-negative integer: '" + s + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string &key,
                                                     const std::vector<std::string> &def) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? def : split_list(it->second);
}

std::string method_name(Method m)
{
    switch (m) {
    case Method::Apsp:
        return "apsp";
    case Method::Mapsp:
        return "mapsp";
    case Method::MapspNoPre:
        return "mapsp_nopre";
    }
    return "unknown";
}

Method parse_method(const std::string &s)
{
    if (s == "apsp")
        return Method::Apsp;
    if (s == "mapsp")
        return Method::Mapsp;
    if (s == "mapsp_nopre")
        return Method::MapspNoPre;
    throw ConfigError("unknown method '" + s + "' (expected apsp, mapsp or mapsp_nopre)");
}

void ExperimentConfig::validate() const
{
    try {
        channel_params().validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    if (snr_db.empty())
        throw ConfigError("snr_db: grid must not be empty");
    if (trials < 1)
        throw ConfigError("trials: must be >= 1");
    if (groups.empty() || std::any_of(groups.begin(), groups.end(), [](std::size_t q) { return q < 1; }))
        throw ConfigError("Q: every group count must be >= 1");
    if (ut_counts.empty() || std::any_of(ut_counts.begin(), ut_counts.end(), [](std::size_t k) { return k < 1; }))
        throw ConfigError("K: every UT count must be >= 1");
    if (methods.empty())
        throw ConfigError("methods: list must not be empty");
    if (delta_ell.empty())
        throw ConfigError("delta_ell: list must not be empty");
    if (upsilon < 0.0)
        throw ConfigError("upsilon: must be >= 0");
    if (se_subcarriers < 1 || se_subcarriers > dims.subcarriers)
        throw ConfigError("se_subcarriers: must be in [1, Nc]");
    for (auto q : groups)
        if (q > dims.subcarriers)
            throw ConfigError("Q: more groups than subcarriers");
}

ChannelParams ExperimentConfig::channel_params() const
{
    ChannelParams p;
    p.dims = dims;
    p.nu_tsym = nu_tsym;
    p.sigma_bar_sq = sigma_bar_sq;
    p.taps = taps;
    p.angular_span = angular_span;
    p.tap_decay = tap_decay;
    p.mu_jitter = mu_jitter;
    p.mu_ramp = mu_ramp;
    p.magnitude = magnitude;
    return p;
}

ExperimentConfig experiment_from(const KeyValueConfig &kv, bool honour_env)
{
    for (const auto &[key, value] : kv.values())
        if (!known_keys().count(key))
            throw ConfigError("unknown config key '" + key + "'");

    ExperimentConfig c;
    c.dims.antennas = kv.get_size("M", c.dims.antennas);
    c.dims.subcarriers = kv.get_size("Nc", c.dims.subcarriers);
    c.dims.cp_length = kv.get_size("Ng", c.dims.cp_length);
    c.taps = kv.get_size("taps", c.taps);
    c.angular_span = kv.get_size("angular_span", c.angular_span);
    c.tap_decay = kv.get_double("tap_decay", c.tap_decay);
    c.mu_jitter = kv.get_double("mu_jitter", c.mu_jitter);
    c.mu_ramp = kv.get_double("mu_ramp", c.mu_ramp);
    const auto mag = kv.get_string("magnitude", "deterministic");
    if (mag == "deterministic")
        c.magnitude = MagnitudeModel::Deterministic;
    else if (mag == "rayleigh")
        c.magnitude = MagnitudeModel::Rayleigh;
    else
        throw ConfigError("magnitude: expected deterministic or rayleigh, got '" + mag + "'");
    c.groups = kv.get_sizes("Q", c.groups);
    c.ut_counts = kv.get_sizes("K", c.ut_counts);
    c.snr_db = kv.get_doubles("snr_db", c.snr_db);
    if (kv.has("methods")) {
        c.methods.clear();
        for (const auto &m : kv.get_strings("methods", {}))
            c.methods.push_back(parse_method(m));
    }
    c.delta_ell = kv.get_sizes("delta_ell", c.delta_ell);
    c.trials = kv.get_size("trials", c.trials);
    c.nu_tsym = kv.get_double("nu_tsym", c.nu_tsym);
    c.sigma_bar_sq = kv.get_double("sigma_bar_sq", c.sigma_bar_sq);
    c.upsilon = kv.get_double("upsilon", c.upsilon);
    c.zc_root = kv.get_int("zc_root", c.zc_root);
    const auto var = kv.get_string("zc_variant", "standard");
    if (var == "standard")
        c.zc_variant = ZcVariant::Standard;
    else if (var == "mod_n")
        c.zc_variant = ZcVariant::ModN;
    else if (var == "mod_n_minus_1")
        c.zc_variant = ZcVariant::ModNMinus1;
    else
        throw ConfigError("zc_variant: expected standard, mod_n or mod_n_minus_1, got '" + var + "'");
    c.se_subcarriers = kv.get_size("se_subcarriers", c.se_subcarriers);
    c.seed = static_cast<std::uint64_t>(kv.get_size("seed", c.seed));
    c.threads = kv.get_size("threads", c.threads);
    c.output = kv.get_string("output", c.output);
    c.ensemble_out = kv.get_string("ensemble_out", c.ensemble_out);

    if (honour_env) {
        if (const char *env = std::getenv("MAPSP_SEED"); env != nullptr && *env != '\0') {
            long long v = 0;
            if (!parse_ll(env, v) || v < 0)
                throw ConfigError(std::string("MAPSP_SEED: not a non-negative integer: '") + env + "'");
            c.seed = static_cast<std::uint64_t>(v);
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_experiment(const std::filesystem::path &path, bool honour_env)
{
    return experiment_from(KeyValueConfig::load(path), honour_env);
}

} // namespace mapsp
