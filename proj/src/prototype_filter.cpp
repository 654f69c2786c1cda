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

#include "fbmc/prototype_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fbmc/fft.hpp"

namespace fbmc {

namespace {

std::size_t wrap(std::int64_t t, std::size_t n) {
    const auto ni = static_cast<std::int64_t>(n);
    return static_cast<std::size_t>(((t % ni) + ni) % ni);
}

// Frequency-domain samples G_0..G_{K-1} of the PHYDYAS design.
std::vector<double> phydyas_coefficients(int overlap) {
    switch (overlap) {
        case 2:
            return {1.0, std::numbers::sqrt2 / 2.0};
        case 3:
            return {1.0, 0.911438, 0.411438};
        case 4: {
            const double g1 = 0.971960;
            return {1.0, g1, std::numbers::sqrt2 / 2.0, std::sqrt(1.0 - g1 * g1)};
        }
        default:
            throw std::invalid_argument("design_phydyas: overlap must be 2, 3 or 4, got " + std::to_string(overlap));
    }
}

}  // namespace

PrototypeFilter::PrototypeFilter(std::vector<cplx> taps, int num_subcarriers, int overlap, std::int64_t center_index)
    : taps_(std::move(taps)), num_subcarriers_(num_subcarriers), overlap_(overlap), center_index_(center_index) {
    if (taps_.empty()) {
        throw std::invalid_argument("PrototypeFilter: empty tap vector");
    }
    if (num_subcarriers_ <= 0 || overlap_ <= 0) {
        throw std::invalid_argument("PrototypeFilter: M and overlap must be positive");
    }
    double e = 0.0;
    for (const auto& v : taps_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("PrototypeFilter: non-finite tap");
        }
        e += std::norm(v);
    }
    if (!(e > 0.0)) {
        throw std::invalid_argument("PrototypeFilter: zero-energy filter");
    }
}

cplx PrototypeFilter::at(std::int64_t t) const {
    const std::int64_t i = t + center_index_;
    if (i < 0 || i >= static_cast<std::int64_t>(taps_.size())) {
        return {0.0, 0.0};
    }
    return taps_[static_cast<std::size_t>(i)];
}

double PrototypeFilter::energy() const { return fbmc::energy(taps_); }

TimeSignal PrototypeFilter::as_signal() const { return TimeSignal{taps_, first_time()}; }

PrototypeFilter design_phydyas(int num_subcarriers, int overlap) {
    if (num_subcarriers < 4 || num_subcarriers % 2 != 0) {
        throw std::invalid_argument("design_phydyas: M must be even and >= 4, got " + std::to_string(num_subcarriers));
    }
    const auto g = phydyas_coefficients(overlap);
    const int length = overlap * num_subcarriers;

    std::vector<cplx> taps(static_cast<std::size_t>(length));
    double e = 0.0;
    for (int l = 0; l < length; ++l) {
        double v = g[0];
        for (int k = 1; k < overlap; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            v += 2.0 * sign * g[static_cast<std::size_t>(k)] *
                 std::cos(2.0 * std::numbers::pi * k * (l + 1) / static_cast<double>(length));
        }
        taps[static_cast<std::size_t>(l)] = v;
        e += v * v;
    }
    const double scale = 1.0 / std::sqrt(e);
    for (auto& v : taps) {
        v *= scale;
    }
    // Even about l = length/2 - 1; the last tap is the (near-zero) unpaired edge.
    return PrototypeFilter(std::move(taps), num_subcarriers, overlap, length / 2 - 1);
}

PrototypeFilter matched_filter(const PrototypeFilter& p) {
    std::vector<cplx> taps(p.taps().rbegin(), p.taps().rend());
    for (auto& v : taps) {
        v = std::conj(v);
    }
    const auto center = static_cast<std::int64_t>(p.length()) - 1 - p.center_index();
    return PrototypeFilter(std::move(taps), p.num_subcarriers(), p.overlap(), center);
}

TimeSignal composite_pulse(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx,
                           const std::optional<PowerDelayProfile>& pdp) {
    if (p_tx.num_subcarriers() != p_rx.num_subcarriers()) {
        throw std::invalid_argument("composite_pulse: filters have different subcarrier counts");
    }
    TimeSignal q = p_tx.as_signal();
    if (pdp) {
        TimeSignal rho;
        rho.samples.assign(pdp->powers().begin(), pdp->powers().end());
        q = convolve(q, rho);
    }
    return convolve(q, p_rx.as_signal());
}

double nyquist_error(const TimeSignal& q, int num_subcarriers) {
    if (q.empty()) {
        throw std::invalid_argument("nyquist_error: empty pulse");
    }
    if (num_subcarriers <= 0) {
        throw std::invalid_argument("nyquist_error: M must be positive");
    }
    const double peak = std::abs(q.at(0));
    if (peak == 0.0) {
        throw std::invalid_argument("nyquist_error: q(0) is zero");
    }
    double worst = 0.0;
    const std::int64_t m = num_subcarriers;
    for (std::int64_t t = 0; t > q.start - m; t -= m) {
        if (t != 0) worst = std::max(worst, std::abs(q.at(t)));
    }
    for (std::int64_t t = m; t < q.end(); t += m) {
        worst = std::max(worst, std::abs(q.at(t)));
    }
    return worst / peak;
}

FilterSpectrum spectrum(const PrototypeFilter& p, std::size_t grid_size) {
    if (grid_size < p.length()) {
        throw std::invalid_argument("spectrum: grid of " + std::to_string(grid_size) + " points is shorter than the " +
                                    std::to_string(p.length()) + "-tap filter");
    }
    std::vector<cplx> buf(grid_size, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < p.length(); ++i) {
        buf[wrap(static_cast<std::int64_t>(i) - p.center_index(), grid_size)] += p.taps()[i];
    }
    Fft(grid_size, Fft::Direction::Forward).execute(buf, buf);
    return FilterSpectrum{grid_size, std::move(buf)};
}

std::vector<cplx> inverse_spectrum(const FilterSpectrum& s, std::size_t length, std::int64_t center_index) {
    if (s.values.size() != s.grid_size || s.grid_size == 0) {
        throw std::invalid_argument("inverse_spectrum: inconsistent spectrum");
    }
    std::vector<cplx> buf(s.grid_size);
    Fft(s.grid_size, Fft::Direction::Backward).execute(s.values, buf);
    const double inv = 1.0 / static_cast<double>(s.grid_size);
    std::vector<cplx> taps(length);
    for (std::size_t i = 0; i < length; ++i) {
        taps[i] = buf[wrap(static_cast<std::int64_t>(i) - center_index, s.grid_size)] * inv;
    }
    return taps;
}

std::size_t default_grid_size(const PrototypeFilter& p) {
    return 16u * static_cast<std::size_t>(p.overlap()) * static_cast<std::size_t>(p.num_subcarriers());
}

PrototypeFilter design_modified(const PrototypeFilter& p, const PowerDelayProfile& pdp, std::size_t grid_size,
                                double regularization, ModifiedDesignReport* report) {
    const std::size_t min_grid = 8u * static_cast<std::size_t>(p.overlap()) * static_cast<std::size_t>(p.num_subcarriers());
    const std::size_t window = p.length() + pdp.length() - 1;
    if (grid_size < min_grid || grid_size < 2 * window) {
        throw std::invalid_argument("design_modified: DTFT grid of " + std::to_string(grid_size) +
                                    " points is too coarse (need >= 8*overlap*M and >= twice the window)");
    }
    if (!(regularization >= 0.0) || !std::isfinite(regularization)) {
        throw std::invalid_argument("design_modified: regularization must be a finite nonnegative number");
    }

    const FilterSpectrum proto = spectrum(p, grid_size);

    std::vector<cplx> rho_bar(grid_size, cplx{0.0, 0.0});
    for (std::size_t l = 0; l < pdp.length(); ++l) {
        rho_bar[wrap(static_cast<std::int64_t>(l), grid_size)] += pdp[l];
    }
    Fft(grid_size, Fft::Direction::Forward).execute(rho_bar, rho_bar);

    double max_mag2 = 0.0;
    double min_mag2 = std::numeric_limits<double>::infinity();
    for (const auto& v : rho_bar) {
        max_mag2 = std::max(max_mag2, std::norm(v));
        min_mag2 = std::min(min_mag2, std::norm(v));
    }
    if (max_mag2 == 0.0) {
        throw std::invalid_argument("design_modified: PDP spectrum is identically zero");
    }
    if (regularization == 0.0 && std::sqrt(min_mag2) < 1e-12 * std::sqrt(max_mag2)) {
        throw std::invalid_argument("design_modified: PDP spectrum has a near-null; division is ill-posed without regularization");
    }
    const double eps = regularization * max_mag2;

    FilterSpectrum modified{grid_size, std::vector<cplx>(grid_size)};
    for (std::size_t k = 0; k < grid_size; ++k) {
        modified.values[k] = proto.values[k] * rho_bar[k] / (std::norm(rho_bar[k]) + eps);
    }

    // Full inverse on the centered time range [-G/2, G/2).
    const auto half = static_cast<std::int64_t>(grid_size / 2);
    const auto full = inverse_spectrum(modified, grid_size, half);

    // Sliding window holding the most energy.
    std::vector<double> prefix(grid_size + 1, 0.0);
    for (std::size_t i = 0; i < grid_size; ++i) {
        prefix[i + 1] = prefix[i] + std::norm(full[i]);
    }
    std::size_t best = 0;
    double best_energy = -1.0;
    for (std::size_t s = 0; s + window <= grid_size; ++s) {
        const double e = prefix[s + window] - prefix[s];
        if (e > best_energy) {
            best_energy = e;
            best = s;
        }
    }
    std::vector<cplx> taps(full.begin() + static_cast<std::ptrdiff_t>(best),
                           full.begin() + static_cast<std::ptrdiff_t>(best + window));
    const std::int64_t first_time = static_cast<std::int64_t>(best) - half;

    // Composite value at l = 0: sum_l rho(l) sum_t p(t) conj(p_mod(t + l)).
    cplx q0{0.0, 0.0};
    for (std::size_t l = 0; l < pdp.length(); ++l) {
        cplx acc{0.0, 0.0};
        for (std::int64_t t = p.first_time(); t < p.end_time(); ++t) {
            const std::int64_t idx = t + static_cast<std::int64_t>(l) - first_time;
            if (idx >= 0 && idx < static_cast<std::int64_t>(window)) {
                acc += p.at(t) * std::conj(taps[static_cast<std::size_t>(idx)]);
            }
        }
        q0 += pdp[l] * acc;
    }
    if (std::abs(q0) == 0.0) {
        throw std::runtime_error("design_modified: composite pulse vanishes at l = 0");
    }
    const cplx gain = 1.0 / std::conj(q0);
    for (auto& v : taps) {
        v *= gain;
    }

    if (report != nullptr) {
        report->captured_energy_fraction = best_energy / prefix[grid_size];
        report->window_length = window;
    }
    return PrototypeFilter(std::move(taps), p.num_subcarriers(), p.overlap(), -first_time);
}

PrototypeFilter design_modified(const PrototypeFilter& p, const PowerDelayProfile& pdp) {
    return design_modified(p, pdp, default_grid_size(p));
}

}  // namespace fbmc
