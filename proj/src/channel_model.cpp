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

#include "fbmc/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fbmc/fft.hpp"
#include "fbmc/random.hpp"

namespace fbmc {

PowerDelayProfile::PowerDelayProfile(std::vector<double> powers) : powers_(std::move(powers)) {
    if (powers_.empty()) {
        throw std::invalid_argument("PowerDelayProfile: at least one tap is required");
    }
    double sum = 0.0;
    for (double v : powers_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("PowerDelayProfile: tap powers must be finite and nonnegative");
        }
        sum += v;
    }
    if (!(sum > 0.0)) {
        throw std::invalid_argument("PowerDelayProfile: all-zero profile");
    }
    for (double& v : powers_) {
        v /= sum;
    }
}

PowerDelayProfile PowerDelayProfile::delta() { return PowerDelayProfile({1.0}); }

double PowerDelayProfile::max() const { return *std::max_element(powers_.begin(), powers_.end()); }

PowerDelayProfile exponential_pdp(double alpha, std::size_t num_taps) {
    if (num_taps == 0) {
        throw std::invalid_argument("exponential_pdp: L must be positive");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("exponential_pdp: alpha must be positive");
    }
    std::vector<double> p(num_taps);
    for (std::size_t l = 0; l < num_taps; ++l) {
        p[l] = std::exp(-alpha * static_cast<double>(l));
    }
    return PowerDelayProfile(std::move(p));
}

ChannelSet::ChannelSet(std::size_t num_antennas, std::size_t num_users, std::size_t num_taps)
    : ChannelSet(num_antennas, num_users, num_taps, std::vector<cplx>(num_antennas * num_users * num_taps)) {}

ChannelSet::ChannelSet(std::size_t num_antennas, std::size_t num_users, std::size_t num_taps, std::vector<cplx> taps)
    : n_(num_antennas), k_(num_users), l_(num_taps), taps_(std::move(taps)) {
    if (n_ == 0 || k_ == 0 || l_ == 0) {
        throw std::invalid_argument("ChannelSet: N, K and L must be positive");
    }
    if (taps_.size() != n_ * k_ * l_) {
        throw std::invalid_argument("ChannelSet: tap buffer does not match N*K*L");
    }
}

ChannelSet draw_channels(const PowerDelayProfile& pdp, std::size_t num_antennas, std::size_t num_users,
                         std::uint64_t seed, std::uint64_t trial) {
    ChannelSet ch(num_antennas, num_users, pdp.length());
    ch.seed = seed;
    ch.trial = trial;
    std::vector<double> sigma(pdp.length());
    for (std::size_t l = 0; l < pdp.length(); ++l) {
        sigma[l] = std::sqrt(pdp[l] / 2.0);
    }
    for (std::size_t i = 0; i < num_antennas; ++i) {
        Rng rng = substream(seed, Stream::ChannelTaps, trial, i);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t k = 0; k < num_users; ++k) {
            for (std::size_t l = 0; l < pdp.length(); ++l) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                ch.tap(i, k, l) = cplx(sigma[l] * re, sigma[l] * im);
            }
        }
    }
    return ch;
}

SubcarrierResponse frequency_response(const ChannelSet& ch, int m, int num_subcarriers) {
    if (num_subcarriers <= 0 || m < 0 || m >= num_subcarriers) {
        throw std::invalid_argument("frequency_response: subcarrier " + std::to_string(m) + " outside [0, " +
                                    std::to_string(num_subcarriers) + ")");
    }
    std::vector<cplx> twiddle(ch.num_taps());
    for (std::size_t l = 0; l < ch.num_taps(); ++l) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>((static_cast<std::int64_t>(m) * static_cast<std::int64_t>(l)) % num_subcarriers) / num_subcarriers;
        twiddle[l] = std::polar(1.0, phase);
    }
    SubcarrierResponse out{m, Eigen::MatrixXcd(ch.num_antennas(), ch.num_users())};
    for (std::size_t i = 0; i < ch.num_antennas(); ++i) {
        for (std::size_t k = 0; k < ch.num_users(); ++k) {
            const auto h = ch.impulse(i, k);
            cplx acc{0.0, 0.0};
            for (std::size_t l = 0; l < h.size(); ++l) {
                acc += h[l] * twiddle[l];
            }
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = acc;
        }
    }
    return out;
}

std::vector<SubcarrierResponse> frequency_responses(const ChannelSet& ch, int num_subcarriers) {
    if (num_subcarriers <= 0) {
        throw std::invalid_argument("frequency_responses: M must be positive");
    }
    const auto m_count = static_cast<std::size_t>(num_subcarriers);
    std::vector<SubcarrierResponse> out(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        out[m].subcarrier = static_cast<int>(m);
        out[m].values.resize(static_cast<Eigen::Index>(ch.num_antennas()), static_cast<Eigen::Index>(ch.num_users()));
    }
    const Fft fft(m_count, Fft::Direction::Forward);
    std::vector<cplx> buf(m_count);
    for (std::size_t i = 0; i < ch.num_antennas(); ++i) {
        for (std::size_t k = 0; k < ch.num_users(); ++k) {
            std::fill(buf.begin(), buf.end(), cplx{0.0, 0.0});
            const auto h = ch.impulse(i, k);
            for (std::size_t l = 0; l < h.size(); ++l) {
                buf[l % m_count] += h[l];  // taps beyond M alias, as the DFT definition implies
            }
            fft.execute(buf, buf);
            for (std::size_t m = 0; m < m_count; ++m) {
                out[m].values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = buf[m];
            }
        }
    }
    return out;
}

std::vector<TimeSignal> apply_channel(std::span<const TimeSignal> signals, const ChannelSet& ch, double noise_variance,
                                      std::uint64_t seed, std::uint64_t trial) {
    if (signals.size() != ch.num_users()) {
        throw std::invalid_argument("apply_channel: expected " + std::to_string(ch.num_users()) + " user signals, got " +
                                    std::to_string(signals.size()));
    }
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
        throw std::invalid_argument("apply_channel: noise variance must be finite and nonnegative");
    }
    const std::int64_t start = signals.front().start;
    const std::size_t len = signals.front().size();
    for (const auto& s : signals) {
        if (s.start != start || s.size() != len) {
            throw std::invalid_argument("apply_channel: user signals differ in length or start index");
        }
    }
    const std::size_t out_len = len == 0 ? 0 : len + ch.num_taps() - 1;
    const double noise_sigma = std::sqrt(noise_variance / 2.0);

    std::vector<TimeSignal> out(ch.num_antennas());
    for (std::size_t i = 0; i < ch.num_antennas(); ++i) {
        TimeSignal& y = out[i];
        y.start = start;
        y.samples.assign(out_len, cplx{0.0, 0.0});
        for (std::size_t k = 0; k < ch.num_users(); ++k) {
            const auto h = ch.impulse(i, k);
            const auto& x = signals[k].samples;
            for (std::size_t l = 0; l < h.size(); ++l) {
                const cplx hl = h[l];
                if (hl == cplx{0.0, 0.0}) {
                    continue;
                }
                cplx* dst = y.samples.data() + l;
                for (std::size_t t = 0; t < len; ++t) {
                    dst[t] += hl * x[t];
                }
            }
        }
        if (noise_variance > 0.0) {
            Rng rng = substream(seed, Stream::Noise, trial, i);
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (auto& v : y.samples) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                v += cplx(noise_sigma * re, noise_sigma * im);
            }
        }
    }
    return out;
}

PowerDelayProfile estimate_pdp(const ChannelSet& ch) {
    std::vector<double> acc(ch.num_taps(), 0.0);
    for (std::size_t i = 0; i < ch.num_antennas(); ++i) {
        for (std::size_t k = 0; k < ch.num_users(); ++k) {
            const auto h = ch.impulse(i, k);
            for (std::size_t l = 0; l < h.size(); ++l) {
                acc[l] += std::norm(h[l]);
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(ch.num_antennas() * ch.num_users());
    for (double& v : acc) {
        v *= inv;
    }
    return PowerDelayProfile(std::move(acc));
}

}  // namespace fbmc
