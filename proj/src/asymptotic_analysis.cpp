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

#include "fbmc/asymptotic_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fbmc {

namespace {

cplx j_power(std::int64_t k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// x(t) e^{j 2 pi m t / M} for a signal on the absolute time axis.
TimeSignal modulate(const TimeSignal& x, int m, int M) {
    TimeSignal out = x;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::int64_t t = x.start + static_cast<std::int64_t>(i);
        const std::int64_t r = ((static_cast<std::int64_t>(m) * t) % M + M) % M;
        out.samples[i] *= std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / M);
    }
    return out;
}

int wrap_subcarrier(int m, int M) { return ((m % M) + M) % M; }

double db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace

InterferenceWindow default_window(int overlap) { return {4, 2 * overlap + 2}; }

std::vector<cplx> modulated_pdp(const PowerDelayProfile& pdp, int m, int num_subcarriers) {
    if (num_subcarriers <= 0 || m < 0 || m >= num_subcarriers) {
        throw std::invalid_argument("modulated_pdp: subcarrier outside [0, M)");
    }
    std::vector<cplx> out(pdp.length());
    for (std::size_t l = 0; l < pdp.length(); ++l) {
        const std::int64_t r = (static_cast<std::int64_t>(l) * m) % num_subcarriers;
        out[l] = pdp[l] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / num_subcarriers);
    }
    return out;
}

TimeSignal asymptotic_equivalent_channel(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx,
                                         const PowerDelayProfile& pdp, int m, int m_prime) {
    const int M = p_tx.num_subcarriers();
    if (p_rx.num_subcarriers() != M) {
        throw std::invalid_argument("asymptotic_equivalent_channel: filters have different subcarrier counts");
    }
    if (M % 2 != 0) {
        throw std::invalid_argument("asymptotic_equivalent_channel: M must be even");
    }
    const TimeSignal rho_m{modulated_pdp(pdp, wrap_subcarrier(m, M), M), 0};
    const TimeSignal rx_m = modulate(p_rx.as_signal(), m, M);
    const TimeSignal tx_m = modulate(p_tx.as_signal(), m_prime, M);
    const TimeSignal tail = convolve(rho_m, rx_m);

    // Decimate the full convolution tx_m * tail at multiples of M/2.
    const std::int64_t half = M / 2;
    const std::int64_t lo = tx_m.start + tail.start;
    const std::int64_t hi = tx_m.end() + tail.end() - 2;  // last index of the full convolution
    const std::int64_t first = lo >= 0 ? (lo + half - 1) / half : -((-lo) / half);
    const std::int64_t last = hi >= 0 ? hi / half : -((-hi + half - 1) / half);

    TimeSignal out;
    out.start = first;
    for (std::int64_t dn = first; dn <= last; ++dn) {
        const std::int64_t s = dn * half;
        const std::int64_t t_lo = std::max(tx_m.start, s - tail.end() + 1);
        const std::int64_t t_hi = std::min(tx_m.end(), s - tail.start + 1);
        cplx acc{0.0, 0.0};
        for (std::int64_t t = t_lo; t < t_hi; ++t) {
            acc += tx_m.at(t) * tail.at(s - t);
        }
        out.samples.push_back(acc);
    }
    return out;
}

EquivalentChannel::EquivalentChannel(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx,
                                     const PowerDelayProfile& pdp, int m, InterferenceWindow window)
    : m_(m), window_(window) {
    const int M = p_tx.num_subcarriers();
    if (window.max_delta_m < 0 || window.max_delta_n < 0) {
        throw std::invalid_argument("EquivalentChannel: window must be nonnegative");
    }
    if (m < 0 || m >= M) {
        throw std::invalid_argument("EquivalentChannel: subcarrier outside [0, M)");
    }
    const int dm_ext = std::max(2 * window.max_delta_m, window.max_delta_m + 1);
    const std::size_t dn_count = 2 * static_cast<std::size_t>(window.max_delta_n) + 1;
    g_.assign((2 * static_cast<std::size_t>(window.max_delta_m) + 1) * dn_count, cplx{0.0, 0.0});

    double inside = 0.0;
    double total = 0.0;
    for (int dm = -dm_ext; dm <= dm_ext; ++dm) {
        const TimeSignal g = asymptotic_equivalent_channel(p_tx, p_rx, pdp, m, m + dm);
        const bool dm_inside = std::abs(dm) <= window.max_delta_m;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::int64_t dn = g.start + static_cast<std::int64_t>(i);
            const double e = std::norm(g.samples[i]);
            total += e;
            if (dm_inside && std::abs(dn) <= window.max_delta_n) {
                inside += e;
                const std::size_t idx = static_cast<std::size_t>(dm + window.max_delta_m) * dn_count +
                                        static_cast<std::size_t>(dn + window.max_delta_n);
                g_[idx] = g.samples[i] * j_power(static_cast<std::int64_t>(dm) - dn);
            }
        }
    }
    tail_fraction_ = total > 0.0 ? (total - inside) / total : 0.0;
}

cplx EquivalentChannel::at(int delta_m, int delta_n) const {
    if (std::abs(delta_m) > window_.max_delta_m || std::abs(delta_n) > window_.max_delta_n) {
        throw std::out_of_range("EquivalentChannel: offset outside the computed window");
    }
    const std::size_t dn_count = 2 * static_cast<std::size_t>(window_.max_delta_n) + 1;
    return g_[static_cast<std::size_t>(delta_m + window_.max_delta_m) * dn_count +
              static_cast<std::size_t>(delta_n + window_.max_delta_n)];
}

namespace {

double saturation_linear(const EquivalentChannel& g) {
    if (g.tail_energy_fraction() > kMaxTailEnergy) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "saturation_sinr: interference window too small (tail energy fraction %.3g)",
                      g.tail_energy_fraction());
        throw std::runtime_error(buf);
    }
    const auto w = g.window();
    double interference = 0.0;
    for (int dm = -w.max_delta_m; dm <= w.max_delta_m; ++dm) {
        for (int dn = -w.max_delta_n; dn <= w.max_delta_n; ++dn) {
            if (dm == 0 && dn == 0) {
                continue;
            }
            const double re = g.at(dm, dn).real();
            interference += re * re;
        }
    }
    const double signal = g.desired().real() * g.desired().real();
    if (interference == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return signal / interference;
}

}  // namespace

double saturation_sinr(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, const PowerDelayProfile& pdp, int m,
                       InterferenceWindow window) {
    return db(saturation_linear(EquivalentChannel(p_tx, p_rx, pdp, m, window)));
}

double saturation_sinr_average(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, const PowerDelayProfile& pdp,
                               InterferenceWindow window, int stride) {
    if (stride <= 0) {
        throw std::invalid_argument("saturation_sinr_average: stride must be positive");
    }
    double acc = 0.0;
    int count = 0;
    for (int m = 0; m < p_tx.num_subcarriers(); m += stride) {
        acc += saturation_linear(EquivalentChannel(p_tx, p_rx, pdp, m, window));
        ++count;
    }
    return db(acc / count);
}

LimitCheck asymptotic_mrc_limit_check(const ChannelSet& ch, const PrototypeFilter& p_tx, const PrototypeFilter& p_rx,
                                      const PowerDelayProfile& pdp, int m, int m_prime, int delta_n, std::size_t k,
                                      std::size_t k_prime) {
    const int M = p_tx.num_subcarriers();
    if (k >= ch.num_users() || k_prime >= ch.num_users()) {
        throw std::invalid_argument("asymptotic_mrc_limit_check: user index out of range");
    }
    const SubcarrierResponse h_m = frequency_response(ch, m, M);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < ch.num_antennas(); ++i) {
        const cplx h_int = interference_coefficient(p_tx, p_rx, ch.impulse(i, k_prime), m, m_prime, delta_n);
        acc += std::conj(h_m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))) * h_int;
    }
    LimitCheck out;
    out.empirical = acc / static_cast<double>(ch.num_antennas());
    if (k == k_prime) {
        const TimeSignal g = asymptotic_equivalent_channel(p_tx, p_rx, pdp, m, m_prime);
        out.analytic = g.at(delta_n) * j_power(static_cast<std::int64_t>(m_prime) - m - delta_n);
    }
    return out;
}

}  // namespace fbmc
