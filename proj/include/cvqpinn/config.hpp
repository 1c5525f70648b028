// Copyright 2026 The cvqpinn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file config.hpp
 * @brief Run configuration in a flat `key = value` text format.
 *
 * Grammar, one entry per line:
 *
 *     line    := blank | comment | entry
 *     comment := '#' any*
 *     entry   := key ws* '=' ws* value
 *     key     := 'problem' | section '.' name
 *     section := 'network' | 'train' | 'weights' | 'output'
 *
 * `problem` selects the preset whose defaults the remaining keys override,
 * wherever it appears in the file. Unknown keys and repeated keys are errors.
 */

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "cvqpinn/errors.hpp"
#include "cvqpinn/optimize.hpp"
#include "cvqpinn/qnn.hpp"

namespace cvqpinn {

struct RunConfig {
    std::string problem = "poisson1d";
    NetworkConfig network{};
    TrainingConfig train = TrainingConfig::poisson_defaults();
    std::string output_directory = "run";
    bool emit_plots = false;

    void validate() const {
        if (problem != "poisson1d" && problem != "heat1d") throw ConfigError("unknown problem '" + problem + "'");
        network.validate();
        train.validate();
        if (problem == "heat1d" && network.output_modes.size() < 2) throw ConfigError("heat1d needs two outputs");
        if (problem == "poisson1d" && network.output_modes.size() < 2) throw ConfigError("poisson1d needs two outputs");
        if (network.num_modes != 2) throw ConfigError("both presets encode two inputs and need num_modes = 2");
        if (output_directory.empty()) throw ConfigError("output.directory must not be empty");
    }

    bool operator==(const RunConfig &) const = default;
};

/// Table defaults for a problem preset.
inline RunConfig default_run_config(const std::string &problem) {
    RunConfig c;
    c.problem = problem;
    if (problem == "poisson1d") {
        c.train = TrainingConfig::poisson_defaults();
    } else if (problem == "heat1d") {
        c.train = TrainingConfig::heat_defaults();
    } else {
        throw ConfigError("unknown problem '" + problem + "' (expected poisson1d or heat1d)");
    }
    c.output_directory = problem + "_run";
    return c;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string &key, const std::string &v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

template <typename Int> Int parse_int(const std::string &key, const std::string &v) {
    Int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return out;
}

inline bool parse_bool(const std::string &key, const std::string &v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

inline std::vector<int> parse_int_list(const std::string &key, const std::string &v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_int<int>(key, trim(item)));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

} // namespace detail

/// Apply one `key = value` override.
inline void apply_config_entry(RunConfig &c, const std::string &key, const std::string &value) {
    using namespace detail;
    const std::string &v = value;
    if (key == "problem") {
        if (v != c.problem) throw ConfigError("'problem' must be applied before other keys");
    } else if (key == "network.num_modes") c.network.num_modes = parse_int<int>(key, v);
    else if (key == "network.cutoff") c.network.cutoff = parse_int<int>(key, v);
    else if (key == "network.multi_layers") c.network.multi_layers = parse_int<int>(key, v);
    else if (key == "network.single_layers") c.network.single_layers = parse_int<int>(key, v);
    else if (key == "network.output_modes") c.network.output_modes = parse_int_list(key, v);
    else if (key == "train.epochs") c.train.epochs = parse_int<long>(key, v);
    else if (key == "train.learning_rate") c.train.learning_rate = parse_double(key, v);
    else if (key == "train.schedule") {
        if (v == "constant") c.train.schedule.kind = LrSchedule::Kind::Constant;
        else if (v == "cosine") c.train.schedule.kind = LrSchedule::Kind::CosineWarmRestarts;
        else throw ConfigError("train.schedule must be constant or cosine");
    } else if (key == "train.schedule_period") c.train.schedule.period = parse_int<long>(key, v);
    else if (key == "train.schedule_mult") c.train.schedule.mult = parse_double(key, v);
    else if (key == "train.lr_min") c.train.schedule.lr_min = parse_double(key, v);
    else if (key == "train.pretrain_epochs") c.train.pretrain_epochs = parse_int<long>(key, v);
    else if (key == "train.k_collocation") c.train.k_collocation = parse_int<int>(key, v);
    else if (key == "train.seed") c.train.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "train.clip") c.train.clip = parse_double(key, v);
    else if (key == "train.early_stop_patience") c.train.early_stop_patience = parse_int<long>(key, v);
    else if (key == "train.validate_every") c.train.validate_every = parse_int<long>(key, v);
    else if (key == "weights.pde") c.train.weights.pde = parse_double(key, v);
    else if (key == "weights.bc") c.train.weights.bc = parse_double(key, v);
    else if (key == "weights.ic") c.train.weights.ic = parse_double(key, v);
    else if (key == "weights.trace") c.train.weights.trace = parse_double(key, v);
    else if (key == "weights.consistency") c.train.weights.consistency = parse_double(key, v);
    else if (key == "weights.extra") c.train.weights.extra = parse_double(key, v);
    else if (key == "output.directory") c.output_directory = v;
    else if (key == "output.plots") c.emit_plots = parse_bool(key, v);
    else throw ConfigError("unknown config key '" + key + "'");
}

/// Split `key = value`; throws on malformed lines.
inline std::pair<std::string, std::string> split_config_entry(const std::string &line, std::size_t line_no = 0) {
    const auto eq = line.find('=');
    const std::string where = line_no ? " (line " + std::to_string(line_no) + ")" : "";
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'" + where + ": " + line);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("empty key or value" + where);
    return {key, value};
}

inline RunConfig parse_run_config(const std::string &text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    std::string problem = "poisson1d";
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto kv = split_config_entry(t, line_no);
        if (!seen.insert(kv.first).second) throw ConfigError("repeated key '" + kv.first + "' (line " + std::to_string(line_no) + ")");
        if (kv.first == "problem") problem = kv.second;
        entries.push_back(std::move(kv));
    }
    RunConfig c = default_run_config(problem);
    for (const auto &[k, v] : entries) apply_config_entry(c, k, v);
    c.validate();
    return c;
}

inline std::string serialize_run_config(const RunConfig &c) {
    using detail::format_double;
    std::ostringstream os;
    os << "# cvqpinn run configuration v1\n";
    os << "problem = " << c.problem << "\n\n";
    os << "network.num_modes = " << c.network.num_modes << "\n";
    os << "network.cutoff = " << c.network.cutoff << "\n";
    os << "network.multi_layers = " << c.network.multi_layers << "\n";
    os << "network.single_layers = " << c.network.single_layers << "\n";
    os << "network.output_modes = ";
    for (std::size_t i = 0; i < c.network.output_modes.size(); ++i) os << (i ? "," : "") << c.network.output_modes[i];
    os << "\n\n";
    const auto &t = c.train;
    os << "train.epochs = " << t.epochs << "\n";
    os << "train.learning_rate = " << format_double(t.learning_rate) << "\n";
    os << "train.schedule = " << (t.schedule.kind == LrSchedule::Kind::Constant ? "constant" : "cosine") << "\n";
    os << "train.schedule_period = " << t.schedule.period << "\n";
    os << "train.schedule_mult = " << format_double(t.schedule.mult) << "\n";
    os << "train.lr_min = " << format_double(t.schedule.lr_min) << "\n";
    os << "train.pretrain_epochs = " << t.pretrain_epochs << "\n";
    os << "train.k_collocation = " << t.k_collocation << "\n";
    os << "train.seed = " << t.seed << "\n";
    os << "train.clip = " << format_double(t.clip) << "\n";
    os << "train.early_stop_patience = " << t.early_stop_patience << "\n";
    os << "train.validate_every = " << t.validate_every << "\n\n";
    const auto &w = t.weights;
    os << "weights.pde = " << format_double(w.pde) << "\n";
    os << "weights.bc = " << format_double(w.bc) << "\n";
    os << "weights.ic = " << format_double(w.ic) << "\n";
    os << "weights.trace = " << format_double(w.trace) << "\n";
    os << "weights.consistency = " << format_double(w.consistency) << "\n";
    os << "weights.extra = " << format_double(w.extra) << "\n\n";
    os << "output.directory = " << c.output_directory << "\n";
    os << "output.plots = " << (c.emit_plots ? "true" : "false") << "\n";
    return os.str();
}

} // namespace cvqpinn
