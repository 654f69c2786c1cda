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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbmc/experiment.hpp"

namespace fbmc {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Bad key, bad value, or malformed config/manifest file.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using KeyValues = std::map<std::string, std::string>;

/// `key = value` per line; '#' starts a comment; blank lines ignored.
/// Duplicate keys are an error.
KeyValues parse_key_values(std::istream& is);
KeyValues read_key_value_file(const std::filesystem::path& path);

/// Applies recognized keys on top of `config`:
///   scale (desk|full, applied first), M, overlap, K, antennas, T, trials,
///   snr_db, pdp (exponential|delta|file), alpha, L, pdp_file, variants,
///   detectors, estimator, seed, cp_ofdm, cp_length, threads, window_dm,
///   window_dn, subcarrier_stride.
/// Lists are comma separated. Unknown keys throw.
void apply_key_values(ExperimentConfig& config, const KeyValues& values);

// Every field of `config` as key-values; apply_key_values on a default
// config reproduces it exactly.
KeyValues to_key_values(const ExperimentConfig& config);

std::string format_key_values(const KeyValues& values);

struct RunManifest {
    std::string subcommand;
    KeyValues config;   // resolved experiment config
    KeyValues options;  // subcommand flags outside the experiment config
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;
    std::string tool_version{kToolVersion};
    std::string timestamp;  // UTC, ISO 8601
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace fbmc
