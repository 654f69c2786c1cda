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

#include <span>
#include <utility>
#include <vector>

#include "fbmc/channel_model.hpp"
#include "fbmc/fbmc_modem.hpp"
#include "fbmc/power_delay_profile.hpp"
#include "fbmc/prototype_filter.hpp"

namespace fbmc {

// Interference neighborhood |m - m'| <= max_delta_m, |n - n'| <= max_delta_n.
struct InterferenceWindow {
    int max_delta_m = 4;
    int max_delta_n = 10;
};

// |dm| <= 4, |dn| <= 2 * overlap + 2.
InterferenceWindow default_window(int overlap);

// Relative tail energy above which an interference window is rejected.
inline constexpr double kMaxTailEnergy = 1e-8;

// rho_m(l) = rho(l) e^{j 2 pi l m / M}.
std::vector<cplx> modulated_pdp(const PowerDelayProfile& pdp, int m, int num_subcarriers);

/// N -> infinity equivalent channel after MRC combining,
///   g_{mm'}(dn) = (p_{m'} * rho_m * p_rx,m)(dn M / 2),
/// without the OQAM phase factor. The returned signal is indexed by dn and
/// covers every symbol offset at which the triple convolution is nonzero.
TimeSignal asymptotic_equivalent_channel(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx,
                                         const PowerDelayProfile& pdp, int m, int m_prime);

/// Windowed set of asymptotic coefficients G_{mm',nn'} (OQAM phase included)
/// around a desired subcarrier m; m' is taken modulo M.
class EquivalentChannel {
public:
    EquivalentChannel(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, const PowerDelayProfile& pdp, int m,
                      InterferenceWindow window);

    int subcarrier() const { return m_; }
    InterferenceWindow window() const { return window_; }

    // G for m' = m + delta_m, n' = n - delta_n.
    cplx at(int delta_m, int delta_n) const;
    cplx desired() const { return at(0, 0); }

    // Energy sum |G|^2 outside the window relative to a window twice as wide
    // in delta_m (all delta_n are always included in the reference).
    double tail_energy_fraction() const { return tail_fraction_; }

private:
    int m_;
    InterferenceWindow window_;
    std::vector<cplx> g_;
    double tail_fraction_ = 0.0;
};

/// Saturation level Re^2{G_desired} / sum_{(m',n') != (m,n)} Re^2{G_{mm',nn'}}
/// in dB for subcarrier m. Throws if the window tail energy exceeds
/// kMaxTailEnergy.
double saturation_sinr(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, const PowerDelayProfile& pdp, int m,
                       InterferenceWindow window);

// Linear-domain mean of the per-subcarrier saturation SINR over
// m = 0, stride, 2*stride, ... < M, returned in dB.
double saturation_sinr_average(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, const PowerDelayProfile& pdp,
                               InterferenceWindow window, int stride = 1);

struct LimitCheck {
    cplx empirical;  // (1/N) sum_i conj(H_m^{i,k}) H^{i,k'}_{mm',nn'}
    cplx analytic;   // delta_{kk'} G_{mm',nn'}
};

// Finite-N law-of-large-numbers check of the MRC equivalent channel.
LimitCheck asymptotic_mrc_limit_check(const ChannelSet& ch, const PrototypeFilter& p_tx, const PrototypeFilter& p_rx,
                                      const PowerDelayProfile& pdp, int m, int m_prime, int delta_n, std::size_t k,
                                      std::size_t k_prime);

}  // namespace fbmc
