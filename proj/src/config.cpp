// SPDX-License-Identifier: Apache-2.0
//
// fbmc-mimo: FBMC/OQAM link-level simulation for massive MIMO uplinks
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

#include "fbmc/config.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <type_traits>

#include "json.hpp"

namespace fbmc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        T out{};
        if constexpr (std::is_same_v<T, double>) {
            out = std::stod(value, &pos);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (!value.empty() && value.front() == '-') throw std::invalid_argument(value);
            out = std::stoull(value, &pos);
        } else {
            const long long v = std::stoll(value, &pos);
            if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) throw std::out_of_range(value);
            out = static_cast<T>(v);
        }
        if (pos != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    std::string s = value;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("invalid boolean '" + value + "' for key '" + key + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value, Parse parse) {
    std::vector<T> out;
    for (const auto& item : split_list(value)) {
        try {
            out.push_back(parse(item));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("key '" + key + "': " + e.what());
        }
    }
    if (out.empty()) {
        throw ConfigError("key '" + key + "' needs at least one entry");
    }
    return out;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& items, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += fmt(items[i]);
    }
    return out;
}

}  // namespace

KeyValues parse_key_values(std::istream& is) {
    KeyValues out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        if (!out.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

KeyValues read_key_value_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    return parse_key_values(is);
}

void apply_key_values(ExperimentConfig& c, const KeyValues& values) {
    if (const auto it = values.find("scale"); it != values.end()) {
        if (it->second == "full") {
            c = ExperimentConfig::full_scale();
        } else if (it->second == "desk") {
            c = ExperimentConfig{};
        } else {
            throw ConfigError("scale must be 'desk' or 'full'");
        }
    }
    auto wrap = [](const std::string& key, auto fn) {
        try {
            fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError("key '" + key + "': " + e.what());
        }
    };
    for (const auto& [key, value] : values) {
        if (key == "scale") continue;
        if (key == "M") c.num_subcarriers = parse_number<int>(key, value);
        else if (key == "overlap") c.overlap = parse_number<int>(key, value);
        else if (key == "K") c.num_users = parse_number<int>(key, value);
        else if (key == "antennas") c.antennas = parse_list<int>(key, value, [&](const std::string& s) { return parse_number<int>(key, s); });
        else if (key == "T") c.num_symbols = parse_number<int>(key, value);
        else if (key == "trials") c.trials = parse_number<int>(key, value);
        else if (key == "snr_db") c.snr_db = parse_number<double>(key, value);
        else if (key == "pdp") wrap(key, [&] { c.pdp.kind = parse_pdp_kind(value); });
        else if (key == "alpha") c.pdp.alpha = parse_number<double>(key, value);
        else if (key == "L") c.pdp.num_taps = static_cast<std::size_t>(parse_number<std::uint64_t>(key, value));
        else if (key == "pdp_file") c.pdp.file = value;
        else if (key == "variants") c.variants = parse_list<FilterVariant>(key, value, [](const std::string& s) { return parse_variant(s); });
        else if (key == "detectors") c.detectors = parse_list<Detector>(key, value, [](const std::string& s) { return parse_detector(s); });
        else if (key == "estimator") wrap(key, [&] { c.estimator = parse_estimator(value); });
        else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "cp_ofdm") c.cp_ofdm_baseline = parse_bool(key, value);
        else if (key == "cp_length") c.cp_length = parse_number<int>(key, value);
        else if (key == "threads") c.threads = parse_number<int>(key, value);
        else if (key == "window_dm") c.window.max_delta_m = parse_number<int>(key, value);
        else if (key == "window_dn") c.window.max_delta_n = parse_number<int>(key, value);
        else if (key == "subcarrier_stride") c.subcarrier_stride = parse_number<int>(key, value);
        else throw ConfigError("unknown config key '" + key + "'");
    }
}

KeyValues to_key_values(const ExperimentConfig& c) {
    KeyValues kv;
    kv["M"] = std::to_string(c.num_subcarriers);
    kv["overlap"] = std::to_string(c.overlap);
    kv["K"] = std::to_string(c.num_users);
    kv["antennas"] = join(c.antennas, [](int n) { return std::to_string(n); });
    kv["T"] = std::to_string(c.num_symbols);
    kv["trials"] = std::to_string(c.trials);
    kv["snr_db"] = format_double(c.snr_db);
    kv["pdp"] = std::string(to_string(c.pdp.kind));
    kv["alpha"] = format_double(c.pdp.alpha);
    kv["L"] = std::to_string(c.pdp.num_taps);
    kv["pdp_file"] = c.pdp.file;
    kv["variants"] = join(c.variants, [](FilterVariant v) { return std::string(to_string(v)); });
    kv["detectors"] = join(c.detectors, [](Detector d) { return std::string(to_string(d)); });
    kv["estimator"] = std::string(to_string(c.estimator));
    kv["seed"] = std::to_string(c.seed);
    kv["cp_ofdm"] = c.cp_ofdm_baseline ? "true" : "false";
    kv["cp_length"] = std::to_string(c.cp_length);
    kv["threads"] = std::to_string(c.threads);
    kv["window_dm"] = std::to_string(c.window.max_delta_m);
    kv["window_dn"] = std::to_string(c.window.max_delta_n);
    kv["subcarrier_stride"] = std::to_string(c.subcarrier_stride);
    return kv;
}

std::string format_key_values(const KeyValues& values) {
    std::string out;
    for (const auto& [k, v] : values) {
        out += k + " = " + v + "\n";
    }
    return out;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["subcommand"] = m.subcommand;
    j["config"] = m.config;
    j["options"] = m.options;
    j["seed"] = m.seed;
    j["artifacts"] = m.artifacts;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write manifest '" + path.string() + "'");
    }
    os << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open manifest '" + path.string() + "'");
    }
    try {
        const auto j = nlohmann::json::parse(is);
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.config = j.at("config").get<KeyValues>();
        m.options = j.value("options", KeyValues{});
        m.seed = j.at("seed").get<std::uint64_t>();
        m.artifacts = j.value("artifacts", std::vector<std::string>{});
        m.tool_version = j.value("tool_version", std::string());
        m.timestamp = j.value("timestamp", std::string());
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed manifest '" + path.string() + "': " + e.what());
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace fbmc
