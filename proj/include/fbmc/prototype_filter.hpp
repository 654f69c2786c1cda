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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fbmc/power_delay_profile.hpp"
#include "fbmc/signal.hpp"

namespace fbmc {

/// FIR prototype filter of a DFT-modulated filter bank.
///
/// Tap i sits at time index i - center_index, so the filter viewed as a
/// TimeSignal starts at -center_index. PHYDYAS designs are real and even
/// about the center; modified designs are generally neither.
class PrototypeFilter {
public:
    PrototypeFilter(std::vector<cplx> taps, int num_subcarriers, int overlap, std::int64_t center_index);

    std::span<const cplx> taps() const { return taps_; }
    std::size_t length() const { return taps_.size(); }
    int num_subcarriers() const { return num_subcarriers_; }
    int overlap() const { return overlap_; }
    std::int64_t center_index() const { return center_index_; }

    // Time index of the first and one-past-last tap.
    std::int64_t first_time() const { return -center_index_; }
    std::int64_t end_time() const { return first_time() + static_cast<std::int64_t>(taps_.size()); }

    // Tap value at time index t (relative to the center), zero outside.
    cplx at(std::int64_t t) const;

    double energy() const;
    TimeSignal as_signal() const;

private:
    std::vector<cplx> taps_;
    int num_subcarriers_;
    int overlap_;
    std::int64_t center_index_;
};

// Uniform samples of the DTFT P(w) = sum_t p(t) e^{-j w t} at w_k = 2 pi k / grid_size,
// with t measured from the filter center.
struct FilterSpectrum {
    std::size_t grid_size = 0;
    std::vector<cplx> values;
};

// PHYDYAS frequency-sampling design of length overlap * M, unit energy.
// Requires M even, M >= 4 and overlap in {2, 3, 4}.
PrototypeFilter design_phydyas(int num_subcarriers, int overlap);

// p*(-l): time-reversed conjugate. The center maps to length - 1 - center.
PrototypeFilter matched_filter(const PrototypeFilter& p);

/// Composite pulse q = p_tx * rho * p_rx (full linear convolution).
///
/// p_rx is the receive-side impulse response, i.e. matched_filter() of the
/// analysis prototype, so composite_pulse(p, matched_filter(p)) is the
/// autocorrelation p(l) * p^*(-l). The returned signal is indexed so that
/// time 0 is the composite l = 0.
TimeSignal composite_pulse(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx,
                           const std::optional<PowerDelayProfile>& pdp = std::nullopt);

// max over r != 0 of |q(rM)| / |q(0)|.
double nyquist_error(const TimeSignal& q, int num_subcarriers);

FilterSpectrum spectrum(const PrototypeFilter& p, std::size_t grid_size);

// Inverse of spectrum(): returns `length` taps for time indices
// -center_index .. length-1-center_index. Exact when the grid is at least
// as long as the original support.
std::vector<cplx> inverse_spectrum(const FilterSpectrum& s, std::size_t length, std::int64_t center_index);

// Default DTFT grid: 16 * overlap * M.
std::size_t default_grid_size(const PrototypeFilter& p);

struct ModifiedDesignReport {
    double captured_energy_fraction = 1.0;  // energy kept by the truncation window
    std::size_t window_length = 0;
};

/// PDP-compensated analysis prototype with spectrum P(w) / conj(rho_bar(w)).
///
/// The division is regularized as P rho_bar / (|rho_bar|^2 + eps) with
/// eps = regularization * max|rho_bar|^2, inverse transformed on the grid and
/// truncated to the overlap*M + L - 1 window holding the most energy. The
/// result is scaled so that composite_pulse(p, matched_filter(p_mod), pdp)
/// equals exactly 1 at l = 0.
PrototypeFilter design_modified(const PrototypeFilter& p, const PowerDelayProfile& pdp, std::size_t grid_size,
                                double regularization = 1e-12, ModifiedDesignReport* report = nullptr);

PrototypeFilter design_modified(const PrototypeFilter& p, const PowerDelayProfile& pdp);

}  // namespace fbmc
