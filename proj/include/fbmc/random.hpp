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
#include <initializer_list>
#include <random>

namespace fbmc {

using Rng = std::mt19937_64;

// Purpose tags of the independent random substreams.
enum class Stream : std::uint64_t {
    ChannelTaps = 1,
    Noise = 2,
    Data = 3,
    Bootstrap = 4,
};

/// Substream rule: every random quantity is drawn from a generator seeded by
/// (seed, purpose, trial, block), where block is an antenna index for
/// channel taps and noise and a user index for data. Results therefore do
/// not depend on evaluation order or thread count, and the first N antennas
/// of an N' > N draw are identical to an N-antenna draw.
inline Rng substream(std::uint64_t seed, Stream purpose, std::uint64_t trial, std::uint64_t block) {
    auto split = [](std::uint64_t v) {
        return std::pair<std::uint32_t, std::uint32_t>{static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(v >> 32)};
    };
    const auto [s0, s1] = split(seed);
    const auto [t0, t1] = split(trial);
    const auto [b0, b1] = split(block);
    std::seed_seq seq{s0, s1, static_cast<std::uint32_t>(purpose), t0, t1, b0, b1};
    return Rng(seq);
}

}  // namespace fbmc
