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

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fbmc/asymptotic_analysis.hpp"

using namespace fbmc;

namespace {

PrototypeFilter rotated(const PrototypeFilter& p, double phi) {
    std::vector<cplx> taps(p.taps().begin(), p.taps().end());
    for (auto& t : taps) t *= std::polar(1.0, phi);
    return PrototypeFilter(taps, p.num_subcarriers(), p.overlap(), p.center_index());
}

double max_interference_real(const EquivalentChannel& g, InterferenceWindow w) {
    double worst = 0.0;
    for (int dm = -w.max_delta_m; dm <= w.max_delta_m; ++dm)
        for (int dn = -w.max_delta_n; dn <= w.max_delta_n; ++dn)
            if (dm != 0 || dn != 0) worst = std::max(worst, std::abs(g.at(dm, dn).real()));
    return worst;
}

}  // namespace

TEST_SUITE("asymptotic_analysis") {

TEST_CASE("modulated_pdp") {
    const auto pdp = exponential_pdp(0.2, 6);
    const auto r0 = modulated_pdp(pdp, 0, 16);
    for (std::size_t l = 0; l < 6; ++l) {
        CHECK(r0[l] == cplx(pdp[l], 0.0));
        CHECK(std::abs(std::abs(modulated_pdp(pdp, 5, 16)[l]) - pdp[l]) < 1e-15);
    }
    const auto half = modulated_pdp(PowerDelayProfile({0.5, 0.5}), 8, 16);
    CHECK(std::abs(half[0] - cplx(0.5, 0)) < 1e-15);
    CHECK(std::abs(half[1] - cplx(-0.5, 0)) < 1e-15);
}

TEST_CASE("equivalent channel with a delta PDP is the ideal composite") {
    const auto p = design_phydyas(64, 4);
    const auto rx = matched_filter(p);
    const auto g = asymptotic_equivalent_channel(p, rx, PowerDelayProfile::delta(), 3, 3);
    CHECK(std::abs(g.at(0) - cplx(1, 0)) < 1e-12);
    const auto w = default_window(4);
    const EquivalentChannel eq(p, rx, PowerDelayProfile::delta(), 3, w);
    CHECK(std::abs(eq.desired() - cplx(1, 0)) < 1e-12);
    CHECK(max_interference_real(eq, w) <= 1e-3);
    CHECK(eq.tail_energy_fraction() < kMaxTailEnergy);
}

TEST_CASE("PDP breaks the Nyquist condition; the modified filter restores it") {
    const auto p = design_phydyas(256, 4);
    const auto pdp = exponential_pdp(0.1, 40);
    const InterferenceWindow w{4, 10};
    const EquivalentChannel orig(p, matched_filter(p), pdp, 7, w);
    const EquivalentChannel mod(p, matched_filter(design_modified(p, pdp)), pdp, 7, w);
    const double r_orig = max_interference_real(orig, w);
    const double r_mod = max_interference_real(mod, w);
    CHECK(r_orig > 1e-2);
    CHECK(r_orig / r_mod >= 100.0);
}

TEST_CASE("saturation_sinr matches the brute-force oracle") {
    const auto p = design_phydyas(16, 4);
    const auto rx = matched_filter(p);
    const auto pdp = exponential_pdp(0.3, 4);
    // tests/oracles/oracles.py
    CHECK(saturation_sinr(p, rx, pdp, 0, {4, 10}) == doctest::Approx(16.71171703259613).epsilon(1e-9));
    CHECK(saturation_sinr(p, rx, pdp, 5, {4, 10}) == doctest::Approx(16.71171703259613).epsilon(1e-9));
    CHECK(saturation_sinr_average(p, rx, pdp, {4, 10}) == doctest::Approx(16.71171703259613).epsilon(1e-9));
}

TEST_CASE("saturation levels") {
    const auto p = design_phydyas(128, 4);
    const auto rx = matched_filter(p);
    const auto pdp = exponential_pdp(0.1, 20);
    const InterferenceWindow w{4, 10};
    CHECK(saturation_sinr(p, rx, PowerDelayProfile::delta(), 0, w) >= 55.0);
    const double s_orig = saturation_sinr(p, rx, pdp, 0, w);
    const double s_mod = saturation_sinr(p, matched_filter(design_modified(p, pdp)), pdp, 0, w);
    CHECK(std::isfinite(s_orig));
    CHECK(s_mod - s_orig >= 20.0);
    // rho_m only rotates the per-delay terms by a phase the OQAM lattice absorbs
    CHECK(saturation_sinr(p, rx, pdp, 37, w) == doctest::Approx(s_orig).epsilon(1e-9));
}

TEST_CASE("saturation is invariant under a global rotation of both filters") {
    const auto p = design_phydyas(32, 4);
    const auto pdp = exponential_pdp(0.2, 8);
    const InterferenceWindow w{4, 10};
    const double base = saturation_sinr(p, matched_filter(p), pdp, 3, w);
    const auto pr = rotated(p, 0.7);
    const double rot = saturation_sinr(pr, matched_filter(pr), pdp, 3, w);
    CHECK(std::abs(base - rot) < 1e-10);
}

TEST_CASE("saturation via interference_coefficient with h = rho_m") {
    const int M = 32;
    const auto p = design_phydyas(M, 4);
    const auto rx = matched_filter(p);
    const auto pdp = exponential_pdp(0.2, 8);
    const InterferenceWindow w{4, 10};
    for (int m : {0, 9}) {
        const auto h = modulated_pdp(pdp, m, M);
        double num = 0.0, den = 0.0;
        for (int dm = -w.max_delta_m; dm <= w.max_delta_m; ++dm) {
            for (int dn = -w.max_delta_n; dn <= w.max_delta_n; ++dn) {
                const double re = interference_coefficient(p, rx, h, m, ((m + dm) % M + M) % M, dn).real();
                (dm == 0 && dn == 0 ? num : den) += re * re;
            }
        }
        CHECK(std::abs(10.0 * std::log10(num / den) - saturation_sinr(p, rx, pdp, m, w)) < 1e-9);
    }
}

TEST_CASE("too small a window trips the tail assertion") {
    const auto p = design_phydyas(64, 4);
    CHECK_THROWS_AS(saturation_sinr(p, matched_filter(p), exponential_pdp(0.1, 10), 0, {1, 1}), std::runtime_error);
}

TEST_CASE("finite-N MRC limit check") {
    const int M = 64;
    const auto p = design_phydyas(M, 4);
    const auto rx = matched_filter(p);
    const auto pdp = exponential_pdp(0.1, 10);
    const auto ch = draw_channels(pdp, 4096, 2, 99);
    const auto desired = asymptotic_mrc_limit_check(ch, p, rx, pdp, 5, 5, 0, 0, 0);
    CHECK(std::abs(desired.empirical - desired.analytic) <= 0.05 * std::abs(desired.analytic) + 0.01);
    const auto neighbour = asymptotic_mrc_limit_check(ch, p, rx, pdp, 5, 6, 1, 1, 1);
    CHECK(std::abs(neighbour.empirical - neighbour.analytic) <= 0.05 * std::abs(neighbour.analytic) + 0.01);
    const auto cross = asymptotic_mrc_limit_check(ch, p, rx, pdp, 5, 5, 0, 0, 1);
    CHECK(cross.analytic == cplx{});
    CHECK(std::abs(cross.empirical) <= 0.05);

    const auto tiny = asymptotic_mrc_limit_check(draw_channels(pdp, 1, 1, 3), p, rx, pdp, 0, 0, 0, 0, 0);
    CHECK(std::isfinite(tiny.empirical.real()));
    CHECK(std::isfinite(tiny.empirical.imag()));
}

}  // TEST_SUITE
