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
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fbmc/channel_model.hpp"

using namespace fbmc;

TEST_SUITE("channel_model") {

TEST_CASE("exponential_pdp closed form") {
    const auto pdp = exponential_pdp(0.1, 40);
    // e^{-al}(1 - e^{-a}) / (1 - e^{-aL}), tests/oracles/oracles.py
    CHECK(pdp[0] == doctest::Approx(0.09693806454889071).epsilon(1e-13));
    CHECK(pdp[39] == doctest::Approx(0.001962211718326315).epsilon(1e-13));
    double sum = 0.0;
    for (double v : pdp.powers()) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);

    CHECK(exponential_pdp(0.7, 1)[0] == 1.0);
    const auto steep = exponential_pdp(50.0, 2);
    CHECK(steep[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(steep[1] < 1e-21);
    CHECK_THROWS_AS(exponential_pdp(0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(exponential_pdp(0.0, 4), std::invalid_argument);
}

TEST_CASE("PowerDelayProfile validation") {
    CHECK_THROWS_AS(PowerDelayProfile({}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({0.5, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    const PowerDelayProfile p({2.0, 6.0});
    CHECK(p[0] == 0.25);
    CHECK(p[1] == 0.75);
    CHECK(p.max() == 0.75);
}

TEST_CASE("draw_channels statistics") {
    const auto pdp = exponential_pdp(0.3, 6);
    const auto ch = draw_channels(pdp, 2500, 4, 11);
    for (std::size_t l = 0; l < pdp.length(); ++l) {
        double var = 0.0;
        for (std::size_t i = 0; i < 2500; ++i)
            for (std::size_t k = 0; k < 4; ++k) var += std::norm(ch.tap(i, k, l));
        CHECK(var / 1e4 == doctest::Approx(pdp[l]).epsilon(0.05));
    }
    const auto flat = draw_channels(PowerDelayProfile::delta(), 10000, 2, 5);
    cplx users{}, antennas{};
    for (std::size_t i = 0; i < 10000; ++i) {
        users += flat.tap(i, 0, 0) * std::conj(flat.tap(i, 1, 0));
        if (i + 1 < 10000) antennas += flat.tap(i, 0, 0) * std::conj(flat.tap(i + 1, 0, 0));
    }
    CHECK(std::abs(users) / 1e4 <= 0.05);
    CHECK(std::abs(antennas) / 1e4 <= 0.05);
}

TEST_CASE("draw_channels determinism") {
    const auto pdp = exponential_pdp(0.1, 5);
    const auto a = draw_channels(pdp, 8, 3, 42, 7);
    const auto b = draw_channels(pdp, 8, 3, 42, 7);
    const auto c = draw_channels(pdp, 8, 3, 43, 7);
    const auto wide = draw_channels(pdp, 16, 3, 42, 7);
    bool same = true, differ = false, prefix = true;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t l = 0; l < 5; ++l) {
                same = same && a.tap(i, k, l) == b.tap(i, k, l);
                differ = differ || a.tap(i, k, l) != c.tap(i, k, l);
                prefix = prefix && a.tap(i, k, l) == wide.tap(i, k, l);
            }
    CHECK(same);
    CHECK(differ);
    CHECK(prefix);
}

TEST_CASE("frequency_response") {
    const int M = 16;
    ChannelSet delta(1, 1, 3);
    delta.tap(0, 0, 0) = 1.0;
    ChannelSet delay(1, 1, 3);
    delay.tap(0, 0, 1) = 1.0;
    for (int m = 0; m < M; ++m) {
        CHECK(std::abs(frequency_response(delta, m, M).values(0, 0) - cplx(1, 0)) < 1e-15);
        const cplx want = std::polar(1.0, -2.0 * std::numbers::pi * m / M);
        CHECK(std::abs(frequency_response(delay, m, M).values(0, 0) - want) < 1e-15);
    }
    CHECK_THROWS_AS(frequency_response(delta, M, M), std::invalid_argument);
    CHECK_THROWS_AS(frequency_response(delta, -1, M), std::invalid_argument);

    const auto ch = draw_channels(exponential_pdp(0.2, 8), 5, 2, 3);
    const auto all = frequency_responses(ch, M);
    REQUIRE(all.size() == static_cast<std::size_t>(M));
    double worst = 0.0;
    for (int m = 0; m < M; ++m) {
        CHECK(all[static_cast<std::size_t>(m)].subcarrier == m);
        worst = std::max(worst, (all[static_cast<std::size_t>(m)].values - frequency_response(ch, m, M).values).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
    // Parseval per link
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            double freq = 0.0, time = 0.0;
            for (int m = 0; m < M; ++m) freq += std::norm(all[static_cast<std::size_t>(m)].values(i, k));
            for (const auto& v : ch.impulse(i, k)) time += std::norm(v);
            CHECK(std::abs(freq / M - time) < 1e-10);
        }
    }
}

TEST_CASE("frequency_response has unit mean power") {
    const auto ch = draw_channels(exponential_pdp(0.1, 20), 5000, 2, 9);
    for (int m : {0, 37, 127}) {
        const auto h = frequency_response(ch, m, 128);
        CHECK(h.values.cwiseAbs2().mean() == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("apply_channel") {
    TimeSignal x{{cplx(1, 2), cplx(-0.5, 0.1), cplx(0.3, -0.3)}, -1};
    ChannelSet ideal(4, 1, 1);
    for (std::size_t i = 0; i < 4; ++i) ideal.tap(i, 0, 0) = 1.0;
    const std::vector<TimeSignal> one{x};
    for (const auto& y : apply_channel(one, ideal, 0.0, 1)) {
        CHECK(y.start == x.start);
        CHECK(y.samples == x.samples);
    }

    const TimeSignal silent{std::vector<cplx>(100000), 0};
    const std::vector<TimeSignal> quiet{silent};
    ChannelSet single(1, 1, 1);
    single.tap(0, 0, 0) = 1.0;
    CHECK(apply_channel(quiet, single, 0.1, 3)[0].energy() / 1e5 == doctest::Approx(0.1).epsilon(0.05));

    const auto ch = draw_channels(exponential_pdp(0.5, 4), 3, 2, 17);
    TimeSignal x1{std::vector<cplx>(50), 5}, x2{std::vector<cplx>(50), 5}, zero{std::vector<cplx>(50), 5};
    for (std::size_t t = 0; t < 50; ++t) {
        x1.samples[t] = cplx(std::sin(0.3 * t), std::cos(0.1 * t));
        x2.samples[t] = cplx(0.2 * t, -1.0);
    }
    TimeSignal sum = x1;
    for (std::size_t t = 0; t < 50; ++t) sum.samples[t] += x2.samples[t];
    const std::vector<TimeSignal> s_sum{sum, x2}, s_1{x1, x2}, s_2{x2, x2}, s_0{zero, x2};
    // user 0 carries x1, x2, x1 + x2 or nothing; user 1 always x2
    const auto y12 = apply_channel(s_sum, ch, 0.1, 4);
    const auto y1 = apply_channel(s_1, ch, 0.1, 4);
    const auto y2 = apply_channel(s_2, ch, 0.1, 4);
    const auto y0 = apply_channel(s_0, ch, 0.1, 4);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(y12[i].size() == 53);
        for (std::size_t t = 0; t < 53; ++t) {
            CHECK(std::abs(y12[i].samples[t] - (y1[i].samples[t] + y2[i].samples[t] - y0[i].samples[t])) < 1e-12);
        }
    }

    const std::vector<TimeSignal> bad{x1, TimeSignal{std::vector<cplx>(49), 5}};
    CHECK_THROWS_AS(apply_channel(bad, ch, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(apply_channel(s_1, ch, -0.1, 1), std::invalid_argument);
}

TEST_CASE("estimate_pdp") {
    const auto pdp = exponential_pdp(0.1, 40);
    const auto est = estimate_pdp(draw_channels(pdp, 400, 10, 2024));
    double err = 0.0;
    for (std::size_t l = 0; l < 40; ++l) err = std::max(err, std::abs(est[l] - pdp[l]));
    CHECK(err <= 0.05 * pdp.max());

    ChannelSet one(1, 1, 1);
    one.tap(0, 0, 0) = cplx(0.3, -2.0);
    CHECK(estimate_pdp(one)[0] == 1.0);

    const auto d = estimate_pdp(draw_channels(PowerDelayProfile::delta(), 7, 3, 1));
    REQUIRE(d.length() == 1);
    CHECK(std::abs(d[0] - 1.0) < 1e-12);

    ChannelSet padded(2, 2, 3);
    padded.tap(0, 1, 0) = 0.5;
    padded.tap(1, 0, 0) = cplx(0, 2);
    const auto pd = estimate_pdp(padded);
    CHECK(pd[0] == 1.0);
    CHECK(pd[1] == 0.0);
    CHECK(pd[2] == 0.0);
}

}  // TEST_SUITE
