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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace fbmc {

using cplx = std::complex<double>;

// A finite complex sequence placed on the integer time axis. samples[i]
// sits at time index start + i; everything outside is zero.
struct TimeSignal {
    std::vector<cplx> samples;
    std::int64_t start = 0;

    std::int64_t end() const { return start + static_cast<std::int64_t>(samples.size()); }  // one past last
    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }

    // Value at absolute time index t, zero outside the stored range.
    cplx at(std::int64_t t) const {
        if (t < start || t >= end()) {
            return {0.0, 0.0};
        }
        return samples[static_cast<std::size_t>(t - start)];
    }

    double energy() const;
};

// Full linear convolution with start indices added.
TimeSignal convolve(const TimeSignal& a, const TimeSignal& b);

double energy(std::span<const cplx> x);

}  // namespace fbmc
