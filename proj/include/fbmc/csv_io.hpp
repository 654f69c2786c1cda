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

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <span>
#include <string>

#include "fbmc/channel_model.hpp"
#include "fbmc/experiment.hpp"
#include "fbmc/power_delay_profile.hpp"
#include "fbmc/prototype_filter.hpp"

namespace fbmc {

// Every CSV starts with this line.
inline constexpr int kCsvSchemaVersion = 1;

// Thrown when an input file cannot be opened or parsed.
class InputFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "x.xxxx" with four decimals; never "-0.0000".
std::string format_db(double value);

/// Filter CSV:
///   # schema_version=1
///   M,overlap,center_index
///   128,4,255
///   index,real,imag
///   0,<re>,<im>
///   ...
void write_filter_csv(std::ostream& os, const PrototypeFilter& p);
PrototypeFilter read_filter_csv(std::istream& is);
PrototypeFilter read_filter_csv(const std::filesystem::path& path);

// Columns delay,power.
void write_pdp_csv(std::ostream& os, const PowerDelayProfile& pdp);
PowerDelayProfile read_pdp_csv(std::istream& is);
PowerDelayProfile read_pdp_csv(const std::filesystem::path& path);

// Columns N,K,M,detector,variant,snr_db,sinr_db,stderr_db,saturation_db,seed.
void write_sinr_csv(std::ostream& os, std::span<const SinrRecord> records);

/// Magnitude spectra in dB relative to each peak, bins reordered to
/// [-grid/2, grid/2). freq is in subcarrier spacings; sinc_db is the
/// rectangular length-M pulse used by CP-OFDM.
void write_spectrum_csv(std::ostream& os, const FilterSpectrum& original, const FilterSpectrum& modified,
                        int num_subcarriers);

// Little-endian: uint64 N, K, L, then N*K*L (re, im) doubles in tap() order.
void write_channel_dump(const std::filesystem::path& path, const ChannelSet& ch);
ChannelSet read_channel_dump(const std::filesystem::path& path);

}  // namespace fbmc
