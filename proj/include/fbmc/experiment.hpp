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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fbmc/asymptotic_analysis.hpp"
#include "fbmc/channel_model.hpp"
#include "fbmc/fbmc_modem.hpp"
#include "fbmc/mimo_combining.hpp"
#include "fbmc/prototype_filter.hpp"

namespace fbmc {

enum class FilterVariant { Original, Modified };
enum class Estimator { Coefficient, EndToEnd };
enum class PdpKind { Exponential, Delta, File };

std::string_view to_string(FilterVariant v);
std::string_view to_string(Estimator e);
std::string_view to_string(PdpKind k);
FilterVariant parse_variant(std::string_view name);
Estimator parse_estimator(std::string_view name);
PdpKind parse_pdp_kind(std::string_view name);

// Reported SINR when the noise variance is zero and the link is interference free.
inline constexpr double kNoiseFreeSinrCapDb = 200.0;

struct PdpSpec {
    PdpKind kind = PdpKind::Exponential;
    double alpha = 0.1;
    std::size_t num_taps = 20;
    std::string file;  // CSV (delay, power) when kind == File

    PowerDelayProfile build() const;
};

struct ExperimentConfig {
    int num_subcarriers = 128;
    int overlap = 4;
    int num_users = 5;
    std::vector<int> antennas{16, 32, 64, 128, 256};
    int num_symbols = 50;
    int trials = 50;
    double snr_db = 10.0;
    PdpSpec pdp;
    std::vector<FilterVariant> variants{FilterVariant::Original, FilterVariant::Modified};
    std::vector<Detector> detectors{Detector::ZF};
    Estimator estimator = Estimator::Coefficient;
    std::uint64_t seed = 1;
    bool cp_ofdm_baseline = true;
    int cp_length = -1;  // -1: L - 1
    int threads = 0;     // 0: hardware concurrency
    InterferenceWindow window{4, 10};
    int subcarrier_stride = 1;  // subcarriers averaged: 0, stride, 2*stride, ...

    // Full-scale reproduction settings: M = 256, K = 10, L = 40, N up to 512.
    static ExperimentConfig full_scale();

    double noise_variance() const;
    int guard_symbols() const { return 2 * overlap; }
    int effective_cp_length() const;
    void validate() const;  // throws std::invalid_argument
};

// Transmit prototype and receive impulse response of one filter variant.
struct FilterPair {
    FilterVariant variant = FilterVariant::Original;
    PrototypeFilter tx;
    PrototypeFilter rx;  // matched filter of the analysis prototype

    double tx_energy() const { return tx.energy(); }
    double rx_energy() const { return rx.energy(); }
};

FilterPair make_filter_pair(int num_subcarriers, int overlap, const PowerDelayProfile& pdp, FilterVariant variant);

struct UserSinr {
    double sinr = 0.0;          // linear
    double desired_gain = 0.0;  // Re{G^{kk}_{mm,nn}}
};

/// Per-realization SINR through the interference coefficients
/// G_{mm',nn'} = W_m^H H_{mm',nn'}:
///   SINR_k = Re^2{G^{kk}_{desired}} / (sum_{others} Re^2{G^{kk'}} + E_tx E_rx sigma^2 ||w_k||^2).
/// The noise term is the real-part share of the post-analysis noise for
/// unit-power real symbols.
class CoefficientSinrEstimator {
public:
    CoefficientSinrEstimator(const FilterPair& filters, const PowerDelayProfile& pdp, InterferenceWindow window);

    const InterferenceKernel& kernel() const { return kernel_; }

    // SINR of every user on subcarrier m. combiner is the N x K W_m.
    std::vector<UserSinr> evaluate(const ChannelSet& ch, const CombinerMatrix& combiner, double noise_variance) const;

    // Re{G^{kk}_{mm,nn}} for every user.
    std::vector<double> desired_gains(const ChannelSet& ch, const CombinerMatrix& combiner) const;

private:
    InterferenceKernel kernel_;
    double noise_scale_;
    Eigen::MatrixXcd kernel_matrix_;  // L x (window entries)
    std::vector<std::pair<int, int>> offsets_;
};

// Single-(m, k) convenience wrapper; returns dB.
double sinr_coefficient_estimator(const ChannelSet& ch, const CombinerMatrix& combiner, const FilterPair& filters,
                                  const PowerDelayProfile& pdp, std::size_t k, InterferenceWindow window,
                                  double noise_variance);

struct TrialContext {
    int num_symbols = 50;
    int guard_symbols = 8;
    double noise_variance = 0.1;
    std::uint64_t seed = 1;
    std::uint64_t trial = 0;
};

/// Transmits i.i.d. +-1 grids through synthesize -> apply_channel -> analyze
/// -> combine_detect and measures, per (m, k), gain^2 / mean (d_hat - gain d)^2
/// over interior symbols. Returns the linear mean over (m, k) in subcarriers.
double sinr_end_to_end_linear(const ChannelSet& ch, std::span<const CombinerMatrix> combiners, const FilterPair& filters,
                              const CoefficientSinrEstimator& gains, const TrialContext& ctx,
                              std::span<const int> subcarriers);

double sinr_end_to_end_estimator(const ChannelSet& ch, std::span<const CombinerMatrix> combiners,
                                 const FilterPair& filters, const PowerDelayProfile& pdp, InterferenceWindow window,
                                 const TrialContext& ctx);

// Per-subcarrier ZF SINR of CP-OFDM, 1 / (sigma^2 [(H^H H)^{-1}]_{kk}), as a
// linear mean over (m, k).
double cp_ofdm_zf_sinr_linear(const ChannelSet& ch, int num_subcarriers, double noise_variance,
                              std::span<const int> subcarriers);

struct SinrRecord {
    int num_antennas = 0;
    int num_users = 0;
    int num_subcarriers = 0;
    std::string detector;
    std::string variant;  // "original", "modified" or "cp_ofdm"
    std::string estimator;
    double snr_db = 0.0;
    double sinr_db = 0.0;
    double stderr_db = 0.0;
    std::optional<double> saturation_db;
    std::uint64_t seed = 0;
    int trials = 0;
    double wall_time_s = 0.0;
};

// CP-OFDM / ZF benchmark at one array size.
SinrRecord cp_ofdm_zf_baseline(const ExperimentConfig& config, int num_antennas);

/// One record per (N, detector, variant), plus a CP-OFDM/ZF row per N when
/// enabled. Trials run in parallel; every trial draws from its own RNG
/// substreams and aggregation is in trial order, so results do not depend on
/// the thread count.
std::vector<SinrRecord> sweep_antennas(const ExperimentConfig& config);

// Linear mean of per-trial values in dB and its bootstrap standard error.
std::pair<double, double> aggregate_db(std::span<const double> per_trial_linear, std::uint64_t seed,
                                       std::uint64_t stream);

}  // namespace fbmc
