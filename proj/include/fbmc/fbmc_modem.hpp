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
#include <span>
#include <stdexcept>
#include <vector>

#include "fbmc/power_delay_profile.hpp"
#include "fbmc/prototype_filter.hpp"
#include "fbmc/signal.hpp"

namespace fbmc {

// M x T grid of per-(subcarrier, symbol) values, subcarrier-major within a symbol.
template <typename T>
class SymbolGrid {
public:
    SymbolGrid() = default;
    SymbolGrid(int num_subcarriers, int num_symbols)
        : m_(num_subcarriers), t_(num_symbols) {
        if (num_subcarriers <= 0 || num_symbols <= 0) {
            throw std::invalid_argument("SymbolGrid: dimensions must be positive");
        }
        values_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(t_), T{});
    }

    int num_subcarriers() const { return m_; }
    int num_symbols() const { return t_; }

    T& operator()(int m, int n) { return values_[index(m, n)]; }
    const T& operator()(int m, int n) const { return values_[index(m, n)]; }

    std::span<T> values() { return values_; }
    std::span<const T> values() const { return values_; }

private:
    std::size_t index(int m, int n) const {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(m);
    }

    int m_ = 0;
    int t_ = 0;
    std::vector<T> values_;
};

using RealGrid = SymbolGrid<double>;
using ComplexGrid = SymbolGrid<cplx>;

// e^{j pi (m + n) / 2}.
cplx oqam_phase(std::int64_t m, std::int64_t n);

// a_{m,n}(l) = p(l - nM/2) e^{j 2 pi m (l - nM/2) / M} e^{j theta_{m,n}},
// with l measured from the filter center.
TimeSignal basis_function(int m, std::int64_t n, const PrototypeFilter& p);

// Re{ sum_l a(l) b*(l) } over the overlap of the two supports.
double real_inner_product(const TimeSignal& a, const TimeSignal& b);

struct OrthogonalityReport {
    double max_cross = 0.0;      // max |<a_{m,n}, a_{m',n'}>_R| over distinct pairs
    double max_self_error = 0.0; // max |<a_{m,n}, a_{m,n}>_R - 1|
};

// Real-domain inner products of a_{m0,0} with a_{m0+dm,dn}, |dm| <= max_delta_m,
// |dn| <= max_delta_n, for m0 = max_delta_m and max_delta_m + 1 (both parities), subcarriers mod M.
OrthogonalityReport orthogonality_check(const PrototypeFilter& p, int max_delta_m, int max_delta_n);

// Amplitude applied by synthesize() so that E{|x(l)|^2} = 1 for unit-variance
// real symbols: 1 / sqrt(M * E_p / (M / 2)).
double transmit_scale(const PrototypeFilter& p);

/// FBMC/OQAM synthesis x(l) = transmit_scale(p) * sum_{m,n} d_{m,n} a_{m,n}(l).
///
/// The output starts at time -center_index (symbol 0) and holds
/// (T - 1) M / 2 + length(p) samples.
TimeSignal synthesize(const RealGrid& d, const PrototypeFilter& p);

// Same as above for a complex container; rejects any nonzero imaginary part.
TimeSignal synthesize(const ComplexGrid& d, const PrototypeFilter& p);

/// Analysis bank: matched filtering with the receive impulse response p_rx at
/// subcarrier m, sampling at l = nM/2, and removal of the OQAM phase.
///
/// The output is multiplied by 1 / transmit_scale of a transmit filter with
/// energy tx_filter_energy, so analyze(synthesize(d, p), matched_filter(p), T)
/// returns d plus the purely imaginary intrinsic interference. y must contain
/// every sample the receive filter touches for slots 0..T-1; samples outside
/// y are not assumed zero (use zero_pad() for finite bursts).
ComplexGrid analyze(const TimeSignal& y, const PrototypeFilter& p_rx, int num_symbols, double tx_filter_energy = 1.0);

// Sample range [first, last] that analyze() reads for T symbols.
std::pair<std::int64_t, std::int64_t> analysis_support(const PrototypeFilter& p_rx, int num_symbols);

// Copy of y extended with zeros to cover [first, last].
TimeSignal zero_pad(const TimeSignal& y, std::int64_t first, std::int64_t last);

/// H_{mm',nn'} = h_{mm'}(n - n') e^{j (theta_{m',n'} - theta_{m,n})}, with
/// h_{mm'}(l) = (p_{m'} * h * p_rx,m)(l M / 2) evaluated by direct summation.
/// h holds taps at delays 0..L-1; delta_n = n - n'.
cplx interference_coefficient(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, std::span<const cplx> h,
                              int m, int m_prime, int delta_n);

/// Precomputed per-delay interference kernel for fast evaluation of
/// interference_coefficient() over a (delta_m, delta_n) window.
///
/// C(dm, dn, l) = sum_t p_tx(t) p_rx(dn M/2 - l - t) e^{j 2 pi dm t / M}, so
/// that for a channel h and desired subcarrier m
///   H(m, m + dm, dn) = j^{dm - dn} (-1)^{m dn} sum_l h(l) e^{-j 2 pi m l / M} C(dm, dn, l).
class InterferenceKernel {
public:
    InterferenceKernel(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, std::size_t num_taps, int max_delta_m,
                       int max_delta_n);

    int num_subcarriers() const { return m_; }
    int max_delta_m() const { return dm_max_; }
    int max_delta_n() const { return dn_max_; }
    std::size_t num_taps() const { return l_; }

    std::span<const cplx> taps(int delta_m, int delta_n) const;
    cplx phase(int m, int delta_m, int delta_n) const;

    // H(m, m + dm, dn) for channel h (length <= num_taps).
    cplx coefficient(std::span<const cplx> h, int m, int delta_m, int delta_n) const;

    /// Fraction of the PDP-weighted kernel energy sum_l rho(l) |C|^2 that lies
    /// outside the window, relative to a window twice as wide in delta_m and
    /// covering every nonzero delta_n.
    double tail_energy_fraction(const PowerDelayProfile& pdp) const;

private:
    std::size_t offset(int delta_m, int delta_n) const;

    int m_;
    int dm_max_;
    int dn_max_;
    std::size_t l_;
    std::vector<cplx> c_;
    PrototypeFilter p_tx_;
    PrototypeFilter p_rx_;
};

}  // namespace fbmc
