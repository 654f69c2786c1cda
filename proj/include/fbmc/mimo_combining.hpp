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

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbmc/channel_model.hpp"
#include "fbmc/fbmc_modem.hpp"

namespace fbmc {

enum class Detector { MRC, ZF, MMSE };

std::string_view to_string(Detector d);
Detector parse_detector(std::string_view name);  // "mrc" | "zf" | "mmse", case-insensitive

// Raised when a ZF Gram matrix is singular or too badly conditioned to invert.
class SingularChannelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Condition-number guard applied to H^H H before ZF inversion.
inline constexpr double kZfConditionLimit = 1e12;

// N x K combining matrix W_m; the estimate is Re{W_m^H y_{m,n}}.
struct CombinerMatrix {
    Eigen::MatrixXcd values;
    Detector kind = Detector::MRC;
    int subcarrier = 0;
};

// H D^{-1}, D = diag of squared column norms. Throws on an all-zero column.
CombinerMatrix mrc(const SubcarrierResponse& H);

// H (H^H H)^{-1}. Throws SingularChannelError for N < K or rank deficiency.
CombinerMatrix zf(const SubcarrierResponse& H);

// H (H^H H + sigma^2 I)^{-1}; sigma^2 must be positive.
CombinerMatrix mmse(const SubcarrierResponse& H, double noise_variance);

CombinerMatrix make_combiner(Detector kind, const SubcarrierResponse& H, double noise_variance);

// W_m^H y_{m,n} for every (m, n); returns K complex grids.
std::vector<ComplexGrid> combine(std::span<const CombinerMatrix> combiners, std::span<const ComplexGrid> y_grids);

// Re{W_m^H y_{m,n}}: K real grids of symbol estimates.
std::vector<RealGrid> combine_detect(std::span<const CombinerMatrix> combiners, std::span<const ComplexGrid> y_grids);

}  // namespace fbmc
