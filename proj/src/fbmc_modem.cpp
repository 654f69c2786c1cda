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

#include "fbmc/fbmc_modem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fbmc/fft.hpp"

namespace fbmc {

namespace {

constexpr cplx kJ{0.0, 1.0};

// j^k for any integer k.
cplx j_power(std::int64_t k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// e^{j 2 pi k / M} with k reduced modulo M first.
cplx unit_root(std::int64_t k, int M) {
    const std::int64_t r = ((k % M) + M) % M;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / M);
}

void require_even_m(int M, const char* who) {
    if (M <= 0 || M % 2 != 0) {
        throw std::invalid_argument(std::string(who) + ": M must be positive and even");
    }
}

// Sum over t of p_tx(t) p_rx(s - t) e^{j 2 pi dm t / M}.
cplx modulated_correlation(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, std::int64_t s, int dm) {
    const int M = p_tx.num_subcarriers();
    const std::int64_t t_lo = std::max(p_tx.first_time(), s - p_rx.end_time() + 1);
    const std::int64_t t_hi = std::min(p_tx.end_time(), s - p_rx.first_time() + 1);
    cplx acc{0.0, 0.0};
    for (std::int64_t t = t_lo; t < t_hi; ++t) {
        acc += p_tx.at(t) * p_rx.at(s - t) * unit_root(static_cast<std::int64_t>(dm) * t, M);
    }
    return acc;
}

}  // namespace

cplx oqam_phase(std::int64_t m, std::int64_t n) { return j_power(m + n); }

TimeSignal basis_function(int m, std::int64_t n, const PrototypeFilter& p) {
    const int M = p.num_subcarriers();
    require_even_m(M, "basis_function");
    if (m < 0 || m >= M) {
        throw std::invalid_argument("basis_function: subcarrier " + std::to_string(m) + " outside [0, M)");
    }
    TimeSignal a;
    a.start = p.first_time() + n * (M / 2);
    a.samples.resize(p.length());
    const cplx theta = oqam_phase(m, n);
    for (std::size_t i = 0; i < p.length(); ++i) {
        const std::int64_t u = p.first_time() + static_cast<std::int64_t>(i);
        a.samples[i] = p.taps()[i] * unit_root(static_cast<std::int64_t>(m) * u, M) * theta;
    }
    return a;
}

double real_inner_product(const TimeSignal& a, const TimeSignal& b) {
    const std::int64_t lo = std::max(a.start, b.start);
    const std::int64_t hi = std::min(a.end(), b.end());
    double acc = 0.0;
    for (std::int64_t t = lo; t < hi; ++t) {
        acc += (a.at(t) * std::conj(b.at(t))).real();
    }
    return acc;
}

OrthogonalityReport orthogonality_check(const PrototypeFilter& p, int max_delta_m, int max_delta_n) {
    if (max_delta_m < 0 || max_delta_n < 0) {
        throw std::invalid_argument("orthogonality_check: window must be nonnegative");
    }
    const int M = p.num_subcarriers();
    OrthogonalityReport r;
    for (int m0 = max_delta_m; m0 <= max_delta_m + 1; ++m0) {
        const TimeSignal ref = basis_function(m0 % M, 0, p);
        for (int dm = -max_delta_m; dm <= max_delta_m; ++dm) {
            const int m1 = ((m0 + dm) % M + M) % M;
            for (int dn = -max_delta_n; dn <= max_delta_n; ++dn) {
                const double v = real_inner_product(ref, basis_function(m1, dn, p));
                if (m1 == m0 % M && dn == 0) {
                    r.max_self_error = std::max(r.max_self_error, std::abs(v - 1.0));
                } else {
                    r.max_cross = std::max(r.max_cross, std::abs(v));
                }
            }
        }
    }
    return r;
}

double transmit_scale(const PrototypeFilter& p) { return 1.0 / std::sqrt(2.0 * p.energy()); }

TimeSignal synthesize(const RealGrid& d, const PrototypeFilter& p) {
    const int M = p.num_subcarriers();
    require_even_m(M, "synthesize");
    if (d.num_subcarriers() != M) {
        throw std::invalid_argument("synthesize: grid has " + std::to_string(d.num_subcarriers()) +
                                    " subcarriers, filter expects " + std::to_string(M));
    }
    const int T = d.num_symbols();
    const std::int64_t half = M / 2;
    TimeSignal x;
    x.start = p.first_time();
    x.samples.assign(static_cast<std::size_t>((T - 1) * half) + p.length(), cplx{0.0, 0.0});

    const double scale = transmit_scale(p);
    const Fft ifft(static_cast<std::size_t>(M), Fft::Direction::Backward);
    std::vector<cplx> coeff(static_cast<std::size_t>(M));
    std::vector<cplx> periodic(static_cast<std::size_t>(M));

    for (int n = 0; n < T; ++n) {
        bool any = false;
        for (int m = 0; m < M; ++m) {
            const double v = d(m, n);
            any = any || v != 0.0;
            coeff[static_cast<std::size_t>(m)] = v * scale * oqam_phase(m, n);
        }
        if (!any) {
            continue;
        }
        // periodic[r] = sum_m c_m e^{j 2 pi m r / M}
        ifft.execute(coeff, periodic);
        const std::size_t base = static_cast<std::size_t>(n * half);
        for (std::size_t i = 0; i < p.length(); ++i) {
            const std::int64_t u = p.first_time() + static_cast<std::int64_t>(i);
            const auto r = static_cast<std::size_t>(((u % M) + M) % M);
            x.samples[base + i] += p.taps()[i] * periodic[r];
        }
    }
    return x;
}

TimeSignal synthesize(const ComplexGrid& d, const PrototypeFilter& p) {
    RealGrid real(d.num_subcarriers(), d.num_symbols());
    for (int n = 0; n < d.num_symbols(); ++n) {
        for (int m = 0; m < d.num_subcarriers(); ++m) {
            if (d(m, n).imag() != 0.0) {
                throw std::invalid_argument("synthesize: transmit symbols must be real-valued");
            }
            real(m, n) = d(m, n).real();
        }
    }
    return synthesize(real, p);
}

std::pair<std::int64_t, std::int64_t> analysis_support(const PrototypeFilter& p_rx, int num_symbols) {
    const std::int64_t half = p_rx.num_subcarriers() / 2;
    // tau = n M/2 - u for receive-filter time u in [first_time, end_time).
    return {-(p_rx.end_time() - 1), static_cast<std::int64_t>(num_symbols - 1) * half - p_rx.first_time()};
}

TimeSignal zero_pad(const TimeSignal& y, std::int64_t first, std::int64_t last) {
    const std::int64_t lo = std::min(first, y.start);
    const std::int64_t hi = std::max(last + 1, y.end());
    TimeSignal out;
    out.start = lo;
    out.samples.assign(static_cast<std::size_t>(hi - lo), cplx{0.0, 0.0});
    std::copy(y.samples.begin(), y.samples.end(), out.samples.begin() + (y.start - lo));
    return out;
}

ComplexGrid analyze(const TimeSignal& y, const PrototypeFilter& p_rx, int num_symbols, double tx_filter_energy) {
    const int M = p_rx.num_subcarriers();
    require_even_m(M, "analyze");
    if (num_symbols <= 0) {
        throw std::invalid_argument("analyze: number of symbols must be positive");
    }
    if (!(tx_filter_energy > 0.0)) {
        throw std::invalid_argument("analyze: transmit filter energy must be positive");
    }
    const auto [first, last] = analysis_support(p_rx, num_symbols);
    if (y.start > first || y.end() <= last) {
        throw std::invalid_argument("analyze: signal covers [" + std::to_string(y.start) + ", " +
                                    std::to_string(y.end() - 1) + "] but " + std::to_string(num_symbols) +
                                    " symbols need [" + std::to_string(first) + ", " + std::to_string(last) + "]");
    }

    const std::int64_t half = M / 2;
    const double gain = std::sqrt(2.0 * tx_filter_energy);
    ComplexGrid out(M, num_symbols);
    const Fft ifft(static_cast<std::size_t>(M), Fft::Direction::Backward);
    std::vector<cplx> folded(static_cast<std::size_t>(M));
    std::vector<cplx> spec(static_cast<std::size_t>(M));

    for (int n = 0; n < num_symbols; ++n) {
        std::fill(folded.begin(), folded.end(), cplx{0.0, 0.0});
        const std::int64_t slot = n * half;
        for (std::size_t i = 0; i < p_rx.length(); ++i) {
            const std::int64_t u = p_rx.first_time() + static_cast<std::int64_t>(i);
            const auto r = static_cast<std::size_t>(((u % M) + M) % M);
            folded[r] += p_rx.taps()[i] * y.samples[static_cast<std::size_t>(slot - u - y.start)];
        }
        // z_m = sum_r folded[r] e^{j 2 pi m r / M}
        ifft.execute(folded, spec);
        for (int m = 0; m < M; ++m) {
            out(m, n) = spec[static_cast<std::size_t>(m)] * std::conj(oqam_phase(m, n)) * gain;
        }
    }
    return out;
}

cplx interference_coefficient(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, std::span<const cplx> h,
                              int m, int m_prime, int delta_n) {
    const int M = p_tx.num_subcarriers();
    if (p_rx.num_subcarriers() != M) {
        throw std::invalid_argument("interference_coefficient: filters have different subcarrier counts");
    }
    require_even_m(M, "interference_coefficient");
    const std::int64_t s = static_cast<std::int64_t>(delta_n) * (M / 2);

    // (p_{m'} * h * p_rx,m)(s) = sum_l h(l) sum_t p_tx(t) e^{j2pi m' t/M} p_rx(s-l-t) e^{j2pi m (s-l-t)/M}
    cplx acc{0.0, 0.0};
    for (std::size_t l = 0; l < h.size(); ++l) {
        if (h[l] == cplx{0.0, 0.0}) {
            continue;
        }
        const std::int64_t shift = s - static_cast<std::int64_t>(l);
        cplx inner{0.0, 0.0};
        for (std::int64_t t = p_tx.first_time(); t < p_tx.end_time(); ++t) {
            const cplx g = p_rx.at(shift - t);
            if (g == cplx{0.0, 0.0}) {
                continue;
            }
            inner += p_tx.at(t) * unit_root(static_cast<std::int64_t>(m_prime) * t, M) * g *
                     unit_root(static_cast<std::int64_t>(m) * (shift - t), M);
        }
        acc += h[l] * inner;
    }
    // theta_{m',n'} - theta_{m,n} with n' = n - delta_n
    return acc * j_power(static_cast<std::int64_t>(m_prime) - m - delta_n);
}

InterferenceKernel::InterferenceKernel(const PrototypeFilter& p_tx, const PrototypeFilter& p_rx, std::size_t num_taps,
                                       int max_delta_m, int max_delta_n)
    : m_(p_tx.num_subcarriers()), dm_max_(max_delta_m), dn_max_(max_delta_n), l_(num_taps), p_tx_(p_tx), p_rx_(p_rx) {
    if (p_rx.num_subcarriers() != m_) {
        throw std::invalid_argument("InterferenceKernel: filters have different subcarrier counts");
    }
    require_even_m(m_, "InterferenceKernel");
    if (max_delta_m < 0 || max_delta_n < 0 || num_taps == 0) {
        throw std::invalid_argument("InterferenceKernel: window and tap count must be nonnegative / positive");
    }
    const std::size_t dm_count = 2 * static_cast<std::size_t>(dm_max_) + 1;
    const std::size_t dn_count = 2 * static_cast<std::size_t>(dn_max_) + 1;
    c_.assign(dm_count * dn_count * l_, cplx{0.0, 0.0});
    for (int dm = -dm_max_; dm <= dm_max_; ++dm) {
        for (int dn = -dn_max_; dn <= dn_max_; ++dn) {
            const std::size_t off = offset(dm, dn);
            for (std::size_t l = 0; l < l_; ++l) {
                c_[off + l] = modulated_correlation(p_tx_, p_rx_, static_cast<std::int64_t>(dn) * (m_ / 2) - static_cast<std::int64_t>(l), dm);
            }
        }
    }
}

std::size_t InterferenceKernel::offset(int delta_m, int delta_n) const {
    if (std::abs(delta_m) > dm_max_ || std::abs(delta_n) > dn_max_) {
        throw std::out_of_range("InterferenceKernel: (delta_m, delta_n) outside the precomputed window");
    }
    const std::size_t dn_count = 2 * static_cast<std::size_t>(dn_max_) + 1;
    return (static_cast<std::size_t>(delta_m + dm_max_) * dn_count + static_cast<std::size_t>(delta_n + dn_max_)) * l_;
}

std::span<const cplx> InterferenceKernel::taps(int delta_m, int delta_n) const {
    return std::span<const cplx>(c_).subspan(offset(delta_m, delta_n), l_);
}

cplx InterferenceKernel::phase(int m, int delta_m, int delta_n) const {
    const double sign = (static_cast<std::int64_t>(m) * delta_n) % 2 == 0 ? 1.0 : -1.0;
    return j_power(static_cast<std::int64_t>(delta_m) - delta_n) * sign;
}

cplx InterferenceKernel::coefficient(std::span<const cplx> h, int m, int delta_m, int delta_n) const {
    if (h.size() > l_) {
        throw std::invalid_argument("InterferenceKernel: channel longer than the kernel");
    }
    const auto c = taps(delta_m, delta_n);
    cplx acc{0.0, 0.0};
    for (std::size_t l = 0; l < h.size(); ++l) {
        acc += h[l] * std::conj(unit_root(static_cast<std::int64_t>(m) * static_cast<std::int64_t>(l), m_)) * c[l];
    }
    return acc * phase(m, delta_m, delta_n);
}

double InterferenceKernel::tail_energy_fraction(const PowerDelayProfile& pdp) const {
    if (pdp.length() > l_) {
        throw std::invalid_argument("InterferenceKernel: PDP longer than the kernel");
    }
    const std::int64_t half = m_ / 2;
    const std::int64_t reach = p_tx_.end_time() - p_tx_.first_time() + p_rx_.end_time() - p_rx_.first_time() +
                               static_cast<std::int64_t>(pdp.length());
    const int dn_ext = static_cast<int>(std::max<std::int64_t>(dn_max_, reach / half + 2));
    const int dm_ext = std::max(2 * dm_max_, dm_max_ + 1);

    double inside = 0.0;
    double total = 0.0;
    for (int dm = -dm_ext; dm <= dm_ext; ++dm) {
        for (int dn = -dn_ext; dn <= dn_ext; ++dn) {
            double e = 0.0;
            for (std::size_t l = 0; l < pdp.length(); ++l) {
                const cplx c = (std::abs(dm) <= dm_max_ && std::abs(dn) <= dn_max_)
                                   ? c_[offset(dm, dn) + l]
                                   : modulated_correlation(p_tx_, p_rx_, dn * half - static_cast<std::int64_t>(l), dm);
                e += pdp[l] * std::norm(c);
            }
            total += e;
            if (std::abs(dm) <= dm_max_ && std::abs(dn) <= dn_max_) {
                inside += e;
            }
        }
    }
    return total > 0.0 ? (total - inside) / total : 0.0;
}

}  // namespace fbmc
