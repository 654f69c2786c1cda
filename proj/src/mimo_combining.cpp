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

#include "fbmc/mimo_combining.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace fbmc {

std::string_view to_string(Detector d) {
    switch (d) {
        case Detector::MRC: return "mrc";
        case Detector::ZF: return "zf";
        case Detector::MMSE: return "mmse";
    }
    return "?";
}

Detector parse_detector(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "mrc") return Detector::MRC;
    if (lower == "zf") return Detector::ZF;
    if (lower == "mmse") return Detector::MMSE;
    throw std::invalid_argument("unknown detector '" + std::string(name) + "' (expected mrc, zf or mmse)");
}

CombinerMatrix mrc(const SubcarrierResponse& H) {
    CombinerMatrix w{H.values, Detector::MRC, H.subcarrier};
    for (Eigen::Index k = 0; k < H.values.cols(); ++k) {
        const double d = H.values.col(k).squaredNorm();
        if (!(d > 0.0)) {
            throw SingularChannelError("mrc: channel column " + std::to_string(k) + " is all zero");
        }
        w.values.col(k) /= d;
    }
    return w;
}

CombinerMatrix zf(const SubcarrierResponse& H) {
    const auto n = H.values.rows();
    const auto k = H.values.cols();
    if (n < k) {
        throw SingularChannelError("zf: need at least as many antennas as users (N=" + std::to_string(n) +
                                   ", K=" + std::to_string(k) + ")");
    }
    const Eigen::MatrixXcd gram = H.values.adjoint() * H.values;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kZfConditionLimit) {
        throw SingularChannelError("zf: H^H H is singular or ill-conditioned on subcarrier " +
                                   std::to_string(H.subcarrier));
    }
    // W^H = (H^H H)^{-1} H^H
    const Eigen::MatrixXcd wh = gram.ldlt().solve(H.values.adjoint());
    return CombinerMatrix{wh.adjoint(), Detector::ZF, H.subcarrier};
}

CombinerMatrix mmse(const SubcarrierResponse& H, double noise_variance) {
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
        throw std::invalid_argument("mmse: noise variance must be positive");
    }
    Eigen::MatrixXcd gram = H.values.adjoint() * H.values;
    gram.diagonal().array() += noise_variance;
    const Eigen::MatrixXcd wh = gram.ldlt().solve(H.values.adjoint());
    return CombinerMatrix{wh.adjoint(), Detector::MMSE, H.subcarrier};
}

CombinerMatrix make_combiner(Detector kind, const SubcarrierResponse& H, double noise_variance) {
    switch (kind) {
        case Detector::MRC: return mrc(H);
        case Detector::ZF: return zf(H);
        case Detector::MMSE: return mmse(H, noise_variance);
    }
    throw std::invalid_argument("make_combiner: unknown detector");
}

std::vector<ComplexGrid> combine(std::span<const CombinerMatrix> combiners, std::span<const ComplexGrid> y_grids) {
    if (y_grids.empty() || combiners.empty()) {
        throw std::invalid_argument("combine: no antennas or no combiners");
    }
    const int M = y_grids.front().num_subcarriers();
    const int T = y_grids.front().num_symbols();
    const auto n_ant = static_cast<Eigen::Index>(y_grids.size());
    for (const auto& g : y_grids) {
        if (g.num_subcarriers() != M || g.num_symbols() != T) {
            throw std::invalid_argument("combine: antenna grids differ in shape");
        }
    }
    if (static_cast<int>(combiners.size()) != M) {
        throw std::invalid_argument("combine: expected one combiner per subcarrier (" + std::to_string(M) + "), got " +
                                    std::to_string(combiners.size()));
    }
    const auto n_users = combiners.front().values.cols();
    for (const auto& w : combiners) {
        if (w.values.rows() != n_ant || w.values.cols() != n_users) {
            throw std::invalid_argument("combine: combiner shape does not match N x K");
        }
    }

    std::vector<ComplexGrid> out;
    out.reserve(static_cast<std::size_t>(n_users));
    for (Eigen::Index k = 0; k < n_users; ++k) {
        out.emplace_back(M, T);
    }
    Eigen::VectorXcd y(n_ant);
    for (int n = 0; n < T; ++n) {
        for (int m = 0; m < M; ++m) {
            for (Eigen::Index i = 0; i < n_ant; ++i) {
                y(i) = y_grids[static_cast<std::size_t>(i)](m, n);
            }
            const Eigen::VectorXcd z = combiners[static_cast<std::size_t>(m)].values.adjoint() * y;
            for (Eigen::Index k = 0; k < n_users; ++k) {
                out[static_cast<std::size_t>(k)](m, n) = z(k);
            }
        }
    }
    return out;
}

std::vector<RealGrid> combine_detect(std::span<const CombinerMatrix> combiners, std::span<const ComplexGrid> y_grids) {
    const auto z = combine(combiners, y_grids);
    std::vector<RealGrid> out;
    out.reserve(z.size());
    for (const auto& g : z) {
        RealGrid r(g.num_subcarriers(), g.num_symbols());
        for (int n = 0; n < g.num_symbols(); ++n) {
            for (int m = 0; m < g.num_subcarriers(); ++m) {
                r(m, n) = g(m, n).real();
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace fbmc
