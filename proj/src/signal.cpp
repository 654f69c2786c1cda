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

#include "fbmc/signal.hpp"

#include <numeric>

namespace fbmc {

double energy(std::span<const cplx> x) {
    return std::accumulate(x.begin(), x.end(), 0.0, [](double acc, const cplx& v) { return acc + std::norm(v); });
}

double TimeSignal::energy() const { return fbmc::energy(samples); }

TimeSignal convolve(const TimeSignal& a, const TimeSignal& b) {
    TimeSignal out;
    out.start = a.start + b.start;
    if (a.empty() || b.empty()) {
        return out;
    }
    out.samples.assign(a.size() + b.size() - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        const cplx ai = a.samples[i];
        if (ai == cplx{0.0, 0.0}) {
            continue;
        }
        cplx* dst = out.samples.data() + i;
        for (std::size_t j = 0; j < b.size(); ++j) {
            dst[j] += ai * b.samples[j];
        }
    }
    return out;
}

}  // namespace fbmc
