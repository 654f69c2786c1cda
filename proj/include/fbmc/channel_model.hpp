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

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fbmc/power_delay_profile.hpp"
#include "fbmc/signal.hpp"

namespace fbmc {

// N x K x L complex channel taps h_{i,k}(l), i = BS antenna, k = terminal.
class ChannelSet {
public:
    ChannelSet(std::size_t num_antennas, std::size_t num_users, std::size_t num_taps);
    ChannelSet(std::size_t num_antennas, std::size_t num_users, std::size_t num_taps, std::vector<cplx> taps);

    std::size_t num_antennas() const { return n_; }
    std::size_t num_users() const { return k_; }
    std::size_t num_taps() const { return l_; }

    cplx& tap(std::size_t i, std::size_t k, std::size_t l) { return taps_[(i * k_ + k) * l_ + l]; }
    cplx tap(std::size_t i, std::size_t k, std::size_t l) const { return taps_[(i * k_ + k) * l_ + l]; }

    // Impulse response of the link user k -> antenna i.
    std::span<const cplx> impulse(std::size_t i, std::size_t k) const {
        return std::span<const cplx>(taps_).subspan((i * k_ + k) * l_, l_);
    }
    std::span<const cplx> data() const { return taps_; }

    std::uint64_t seed = 0;
    std::uint64_t trial = 0;

private:
    std::size_t n_, k_, l_;
    std::vector<cplx> taps_;
};

// H_m for one subcarrier: [H_m]_{ik} = sum_l h_{i,k}(l) e^{-j 2 pi m l / M}.
struct SubcarrierResponse {
    int subcarrier = 0;
    Eigen::MatrixXcd values;
};

// i.i.d. CN(0, rho(l)) taps. Deterministic in (seed, trial); antenna i uses
// its own substream.
ChannelSet draw_channels(const PowerDelayProfile& pdp, std::size_t num_antennas, std::size_t num_users,
                         std::uint64_t seed, std::uint64_t trial = 0);

SubcarrierResponse frequency_response(const ChannelSet& ch, int m, int num_subcarriers);

// All M subcarrier responses at once (FFT along the delay axis).
std::vector<SubcarrierResponse> frequency_responses(const ChannelSet& ch, int num_subcarriers);

/// y_i(l) = sum_k (x_k * h_{i,k})(l) + nu_i(l) with nu_i i.i.d. CN(0, noise_variance).
///
/// All K signals must share start index and length; the outputs are L - 1
/// samples longer. Noise for antenna i comes from substream (seed, trial, i).
std::vector<TimeSignal> apply_channel(std::span<const TimeSignal> signals, const ChannelSet& ch, double noise_variance,
                                      std::uint64_t seed, std::uint64_t trial = 0);

// rho_hat(l) = mean over (i, k) of |h_{i,k}(l)|^2, renormalized to unit sum.
PowerDelayProfile estimate_pdp(const ChannelSet& ch);

}  // namespace fbmc
