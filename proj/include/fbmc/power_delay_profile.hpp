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
#include <span>
#include <vector>

namespace fbmc {

// Tap powers rho(l) at integer sample delays l = 0..L-1, normalized to unit
// sum. Construction rejects empty, negative, non-finite, and all-zero input.
class PowerDelayProfile {
public:
    explicit PowerDelayProfile(std::vector<double> powers);

    // rho = [1].
    static PowerDelayProfile delta();

    std::span<const double> powers() const { return powers_; }
    std::size_t length() const { return powers_.size(); }
    double operator[](std::size_t l) const { return powers_[l]; }
    double max() const;

private:
    std::vector<double> powers_;
};

// rho(l) = e^{-alpha l} / sum_l' e^{-alpha l'}, l = 0..L-1.
PowerDelayProfile exponential_pdp(double alpha, std::size_t num_taps);

}  // namespace fbmc
