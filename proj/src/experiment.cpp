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

#include "fbmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "fbmc/csv_io.hpp"
#include "fbmc/random.hpp"

namespace fbmc {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

double capped_ratio(double signal, double impairment) {
    const double cap = std::pow(10.0, kNoiseFreeSinrCapDb / 10.0);
    if (impairment <= 0.0) {
        return cap;
    }
    return std::min(signal / impairment, cap);
}

std::vector<int> subcarrier_set(int num_subcarriers, int stride) {
    std::vector<int> out;
    for (int m = 0; m < num_subcarriers; m += stride) {
        out.push_back(m);
    }
    return out;
}

// Runs body(trial) for trial = 0..count-1 on up to `threads` workers.
template <typename Body>
void parallel_trials(int count, int threads, Body&& body) {
    int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int t = 0; t < count; ++t) {
            body(t);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int t = next++; t < count; t = next++) {
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace

std::string_view to_string(FilterVariant v) { return v == FilterVariant::Original ? "original" : "modified"; }

std::string_view to_string(Estimator e) { return e == Estimator::Coefficient ? "coefficient" : "end_to_end"; }

std::string_view to_string(PdpKind k) {
    switch (k) {
        case PdpKind::Exponential: return "exponential";
        case PdpKind::Delta: return "delta";
        case PdpKind::File: return "file";
    }
    return "?";
}

FilterVariant parse_variant(std::string_view name) {
    const auto s = lower(name);
    if (s == "original") return FilterVariant::Original;
    if (s == "modified") return FilterVariant::Modified;
    throw std::invalid_argument("unknown filter variant '" + std::string(name) + "' (expected original or modified)");
}

Estimator parse_estimator(std::string_view name) {
    const auto s = lower(name);
    if (s == "coefficient") return Estimator::Coefficient;
    if (s == "end_to_end" || s == "end-to-end") return Estimator::EndToEnd;
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "' (expected coefficient or end_to_end)");
}

PdpKind parse_pdp_kind(std::string_view name) {
    const auto s = lower(name);
    if (s == "exponential") return PdpKind::Exponential;
    if (s == "delta") return PdpKind::Delta;
    if (s == "file") return PdpKind::File;
    throw std::invalid_argument("unknown PDP kind '" + std::string(name) + "' (expected exponential, delta or file)");
}

PowerDelayProfile PdpSpec::build() const {
    switch (kind) {
        case PdpKind::Exponential: return exponential_pdp(alpha, num_taps);
        case PdpKind::Delta: return PowerDelayProfile::delta();
        case PdpKind::File: return read_pdp_csv(file);
    }
    throw std::invalid_argument("PdpSpec: unknown kind");
}

ExperimentConfig ExperimentConfig::full_scale() {
    ExperimentConfig c;
    c.num_subcarriers = 256;
    c.num_users = 10;
    c.pdp.num_taps = 40;
    c.antennas = {16, 32, 64, 128, 256, 512};
    c.detectors = {Detector::MRC, Detector::ZF, Detector::MMSE};
    return c;
}

double ExperimentConfig::noise_variance() const { return std::pow(10.0, -snr_db / 10.0); }

int ExperimentConfig::effective_cp_length() const {
    const int taps = pdp.kind == PdpKind::Exponential ? static_cast<int>(pdp.num_taps) : static_cast<int>(pdp.build().length());
    return cp_length >= 0 ? cp_length : taps - 1;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (num_subcarriers < 4 || num_subcarriers % 2 != 0) fail("M must be even and >= 4");
    if (overlap < 2 || overlap > 4) fail("overlap must be 2, 3 or 4");
    if (num_users < 1) fail("K must be positive");
    if (antennas.empty()) fail("antenna list is empty");
    for (int n : antennas) {
        if (n < 1) fail("antenna counts must be positive");
        if (n < num_users && std::find(detectors.begin(), detectors.end(), Detector::ZF) != detectors.end()) {
            fail("ZF needs N >= K (N=" + std::to_string(n) + ", K=" + std::to_string(num_users) + ")");
        }
    }
    if (num_symbols < 1) fail("T must be positive");
    if (estimator == Estimator::EndToEnd && num_symbols <= 2 * guard_symbols()) {
        fail("T must exceed twice the guard of " + std::to_string(guard_symbols()) + " symbols");
    }
    if (trials < 1) fail("trials must be >= 1");
    if (!std::isfinite(snr_db)) fail("snr_db must be finite");
    if (pdp.kind == PdpKind::Exponential && (!(pdp.alpha > 0.0) || pdp.num_taps == 0)) fail("exponential PDP needs alpha > 0 and L >= 1");
    if (variants.empty() && !cp_ofdm_baseline) fail("nothing to simulate");
    if (!variants.empty() && detectors.empty()) fail("detector list is empty");
    if (cp_ofdm_baseline) {
        const int taps = static_cast<int>(pdp.build().length());
        if (effective_cp_length() < taps - 1) {
            fail("CP of " + std::to_string(effective_cp_length()) + " samples is shorter than the channel (L-1 = " +
                 std::to_string(taps - 1) + ")");
        }
    }
    if (window.max_delta_m < 0 || window.max_delta_n < 0) fail("interference window must be nonnegative");
    if (subcarrier_stride < 1 || subcarrier_stride > num_subcarriers) fail("subcarrier_stride must be in [1, M]");
    if (threads < 0) fail("threads must be >= 0");
}

FilterPair make_filter_pair(int num_subcarriers, int overlap, const PowerDelayProfile& pdp, FilterVariant variant) {
    PrototypeFilter p = design_phydyas(num_subcarriers, overlap);
    PrototypeFilter analysis = variant == FilterVariant::Modified ? design_modified(p, pdp) : p;
    PrototypeFilter rx = matched_filter(analysis);
    return FilterPair{variant, std::move(p), std::move(rx)};
}

CoefficientSinrEstimator::CoefficientSinrEstimator(const FilterPair& filters, const PowerDelayProfile& pdp,
                                                   InterferenceWindow window)
    : kernel_(filters.tx, filters.rx, pdp.length(), window.max_delta_m, window.max_delta_n),
      noise_scale_(filters.tx_energy() * filters.rx_energy()) {
    const double tail = kernel_.tail_energy_fraction(pdp);
    if (tail > kMaxTailEnergy) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "interference window too small (tail energy fraction %.3g); widen the subcarrier window (window_dm)",
                      tail);
        throw std::runtime_error(buf);
    }
    for (int dm = -window.max_delta_m; dm <= window.max_delta_m; ++dm) {
        for (int dn = -window.max_delta_n; dn <= window.max_delta_n; ++dn) {
            offsets_.emplace_back(dm, dn);
        }
    }
    const auto L = static_cast<Eigen::Index>(pdp.length());
    kernel_matrix_.resize(L, static_cast<Eigen::Index>(offsets_.size()));
    for (std::size_t w = 0; w < offsets_.size(); ++w) {
        const auto c = kernel_.taps(offsets_[w].first, offsets_[w].second);
        for (Eigen::Index l = 0; l < L; ++l) {
            kernel_matrix_(l, static_cast<Eigen::Index>(w)) = c[static_cast<std::size_t>(l)];
        }
    }
}

namespace {

using RowMajorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A(k, k' L + l) = sum_i conj(W_{ik}) h_{ik'}(l) e^{-j 2 pi m l / M}
Eigen::MatrixXcd combined_taps(const ChannelSet& ch, const CombinerMatrix& combiner, int num_subcarriers) {
    const auto n = static_cast<Eigen::Index>(ch.num_antennas());
    const auto kl = static_cast<Eigen::Index>(ch.num_users() * ch.num_taps());
    if (combiner.values.rows() != n || combiner.values.cols() != static_cast<Eigen::Index>(ch.num_users())) {
        throw std::invalid_argument("coefficient estimator: combiner shape does not match the channel");
    }
    const Eigen::Map<const RowMajorMatrix> taps(ch.data().data(), n, kl);
    Eigen::MatrixXcd a = combiner.values.adjoint() * taps;
    const int m = combiner.subcarrier;
    for (std::size_t l = 0; l < ch.num_taps(); ++l) {
        const std::int64_t r = (static_cast<std::int64_t>(m) * static_cast<std::int64_t>(l)) % num_subcarriers;
        const cplx tw = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / num_subcarriers);
        for (std::size_t k = 0; k < ch.num_users(); ++k) {
            a.col(static_cast<Eigen::Index>(k * ch.num_taps() + l)) *= tw;
        }
    }
    return a;
}

}  // namespace

std::vector<UserSinr> CoefficientSinrEstimator::evaluate(const ChannelSet& ch, const CombinerMatrix& combiner,
                                                         double noise_variance) const {
    if (ch.num_taps() != kernel_.num_taps()) {
        throw std::invalid_argument("coefficient estimator: channel length differs from the kernel");
    }
    const int m = combiner.subcarrier;
    const auto users = static_cast<Eigen::Index>(ch.num_users());
    const auto L = static_cast<Eigen::Index>(ch.num_taps());
    const Eigen::MatrixXcd a = combined_taps(ch, combiner, kernel_.num_subcarriers());

    std::vector<cplx> phases(offsets_.size());
    std::size_t desired_index = 0;
    for (std::size_t w = 0; w < offsets_.size(); ++w) {
        phases[w] = kernel_.phase(m, offsets_[w].first, offsets_[w].second);
        if (offsets_[w].first == 0 && offsets_[w].second == 0) desired_index = w;
    }

    std::vector<double> total(static_cast<std::size_t>(users), 0.0);
    std::vector<double> desired(static_cast<std::size_t>(users), 0.0);
    for (Eigen::Index kp = 0; kp < users; ++kp) {
        // G(k, w) for interfering user k'
        const Eigen::MatrixXcd g = a.middleCols(kp * L, L) * kernel_matrix_;
        for (Eigen::Index k = 0; k < users; ++k) {
            for (std::size_t w = 0; w < offsets_.size(); ++w) {
                const double re = (g(k, static_cast<Eigen::Index>(w)) * phases[w]).real();
                total[static_cast<std::size_t>(k)] += re * re;
                if (k == kp && w == desired_index) {
                    desired[static_cast<std::size_t>(k)] = re;
                }
            }
        }
    }

    std::vector<UserSinr> out(static_cast<std::size_t>(users));
    for (Eigen::Index k = 0; k < users; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double signal = desired[ku] * desired[ku];
        const double interference = std::max(0.0, total[ku] - signal);
        const double noise = noise_scale_ * noise_variance * combiner.values.col(k).squaredNorm();
        out[ku] = UserSinr{capped_ratio(signal, interference + noise), desired[ku]};
    }
    return out;
}

std::vector<double> CoefficientSinrEstimator::desired_gains(const ChannelSet& ch, const CombinerMatrix& combiner) const {
    const int m = combiner.subcarrier;
    const auto c = kernel_.taps(0, 0);
    const cplx ph = kernel_.phase(m, 0, 0);
    const Eigen::MatrixXcd a = combined_taps(ch, combiner, kernel_.num_subcarriers());
    std::vector<double> out(ch.num_users());
    for (std::size_t k = 0; k < ch.num_users(); ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t l = 0; l < ch.num_taps(); ++l) {
            acc += a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k * ch.num_taps() + l)) * c[l];
        }
        out[k] = (acc * ph).real();
    }
    return out;
}

double sinr_coefficient_estimator(const ChannelSet& ch, const CombinerMatrix& combiner, const FilterPair& filters,
                                  const PowerDelayProfile& pdp, std::size_t k, InterferenceWindow window,
                                  double noise_variance) {
    if (k >= ch.num_users()) {
        throw std::invalid_argument("sinr_coefficient_estimator: user index out of range");
    }
    const CoefficientSinrEstimator est(filters, pdp, window);
    return to_db(est.evaluate(ch, combiner, noise_variance)[k].sinr);
}

double sinr_end_to_end_linear(const ChannelSet& ch, std::span<const CombinerMatrix> combiners, const FilterPair& filters,
                              const CoefficientSinrEstimator& gains, const TrialContext& ctx,
                              std::span<const int> subcarriers) {
    const int M = filters.tx.num_subcarriers();
    const int T = ctx.num_symbols;
    if (T <= 2 * ctx.guard_symbols) {
        throw std::invalid_argument("sinr_end_to_end: no interior symbols left after the edge guards");
    }
    if (static_cast<int>(combiners.size()) != M) {
        throw std::invalid_argument("sinr_end_to_end: expected one combiner per subcarrier");
    }
    const std::size_t K = ch.num_users();

    std::vector<RealGrid> data;
    std::vector<TimeSignal> tx;
    for (std::size_t k = 0; k < K; ++k) {
        Rng rng = substream(ctx.seed, Stream::Data, ctx.trial, k);
        std::bernoulli_distribution coin(0.5);
        RealGrid d(M, T);
        for (auto& v : d.values()) {
            v = coin(rng) ? 1.0 : -1.0;
        }
        tx.push_back(synthesize(d, filters.tx));
        data.push_back(std::move(d));
    }
    const auto rx = apply_channel(tx, ch, ctx.noise_variance, ctx.seed, ctx.trial);

    const auto [first, last] = analysis_support(filters.rx, T);
    std::vector<ComplexGrid> grids;
    grids.reserve(rx.size());
    for (const auto& y : rx) {
        grids.push_back(analyze(zero_pad(y, first, last), filters.rx, T, filters.tx_energy()));
    }
    const auto estimates = combine_detect(combiners, grids);

    double acc = 0.0;
    std::size_t count = 0;
    const double cap = std::pow(10.0, kNoiseFreeSinrCapDb / 10.0);
    for (int m : subcarriers) {
        const auto g = gains.desired_gains(ch, combiners[static_cast<std::size_t>(m)]);
        for (std::size_t k = 0; k < K; ++k) {
            double mse = 0.0;
            for (int n = ctx.guard_symbols; n < T - ctx.guard_symbols; ++n) {
                const double e = estimates[k](m, n) - g[k] * data[k](m, n);
                mse += e * e;
            }
            mse /= static_cast<double>(T - 2 * ctx.guard_symbols);
            acc += mse > 0.0 ? std::min(g[k] * g[k] / mse, cap) : cap;
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

double sinr_end_to_end_estimator(const ChannelSet& ch, std::span<const CombinerMatrix> combiners,
                                 const FilterPair& filters, const PowerDelayProfile& pdp, InterferenceWindow window,
                                 const TrialContext& ctx) {
    const CoefficientSinrEstimator gains(filters, pdp, window);
    const auto subcarriers = subcarrier_set(filters.tx.num_subcarriers(), 1);
    return to_db(sinr_end_to_end_linear(ch, combiners, filters, gains, ctx, subcarriers));
}

double cp_ofdm_zf_sinr_linear(const ChannelSet& ch, int num_subcarriers, double noise_variance,
                              std::span<const int> subcarriers) {
    const double cap = std::pow(10.0, kNoiseFreeSinrCapDb / 10.0);
    double acc = 0.0;
    std::size_t count = 0;
    for (int m : subcarriers) {
        const SubcarrierResponse h = frequency_response(ch, m, num_subcarriers);
        const CombinerMatrix w = zf(h);
        for (Eigen::Index k = 0; k < w.values.cols(); ++k) {
            // [(H^H H)^{-1}]_{kk} = ||w_k||^2
            const double post = noise_variance * w.values.col(k).squaredNorm();
            acc += post > 0.0 ? std::min(1.0 / post, cap) : cap;
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

std::pair<double, double> aggregate_db(std::span<const double> per_trial_linear, std::uint64_t seed,
                                       std::uint64_t stream) {
    if (per_trial_linear.empty()) {
        throw std::invalid_argument("aggregate_db: no trials");
    }
    const double n = static_cast<double>(per_trial_linear.size());
    const double mean = std::accumulate(per_trial_linear.begin(), per_trial_linear.end(), 0.0) / n;
    if (per_trial_linear.size() == 1) {
        return {to_db(mean), 0.0};
    }
    constexpr int kResamples = 200;
    Rng rng = substream(seed, Stream::Bootstrap, stream, 0);
    std::uniform_int_distribution<std::size_t> pick(0, per_trial_linear.size() - 1);
    double s1 = 0.0;
    double s2 = 0.0;
    for (int b = 0; b < kResamples; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < per_trial_linear.size(); ++i) {
            acc += per_trial_linear[pick(rng)];
        }
        const double v = to_db(acc / n);
        s1 += v;
        s2 += v * v;
    }
    const double mu = s1 / kResamples;
    const double var = std::max(0.0, s2 / kResamples - mu * mu);
    return {to_db(mean), std::sqrt(var * kResamples / (kResamples - 1))};
}

SinrRecord cp_ofdm_zf_baseline(const ExperimentConfig& config, int num_antennas) {
    config.validate();
    if (num_antennas < config.num_users) {
        throw std::invalid_argument("cp_ofdm_zf_baseline: ZF needs N >= K");
    }
    const auto start = std::chrono::steady_clock::now();
    const PowerDelayProfile pdp = config.pdp.build();
    const auto subcarriers = subcarrier_set(config.num_subcarriers, config.subcarrier_stride);
    std::vector<double> per_trial(static_cast<std::size_t>(config.trials));
    parallel_trials(config.trials, config.threads, [&](int t) {
        const ChannelSet ch = draw_channels(pdp, static_cast<std::size_t>(num_antennas),
                                            static_cast<std::size_t>(config.num_users), config.seed,
                                            static_cast<std::uint64_t>(t));
        per_trial[static_cast<std::size_t>(t)] =
            cp_ofdm_zf_sinr_linear(ch, config.num_subcarriers, config.noise_variance(), subcarriers);
    });
    const auto [db, se] = aggregate_db(per_trial, config.seed, static_cast<std::uint64_t>(num_antennas) << 8);
    SinrRecord r;
    r.num_antennas = num_antennas;
    r.num_users = config.num_users;
    r.num_subcarriers = config.num_subcarriers;
    r.detector = "zf";
    r.variant = "cp_ofdm";
    r.estimator = "analytic";
    r.snr_db = config.snr_db;
    r.sinr_db = db;
    r.stderr_db = se;
    r.seed = config.seed;
    r.trials = config.trials;
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<SinrRecord> sweep_antennas(const ExperimentConfig& config) {
    config.validate();
    const PowerDelayProfile pdp = config.pdp.build();
    const auto subcarriers = subcarrier_set(config.num_subcarriers, config.subcarrier_stride);
    const double noise = config.noise_variance();

    std::vector<FilterPair> filters;
    std::vector<CoefficientSinrEstimator> estimators;
    std::optional<double> saturation;
    for (const auto v : config.variants) {
        filters.push_back(make_filter_pair(config.num_subcarriers, config.overlap, pdp, v));
        estimators.emplace_back(filters.back(), pdp, config.window);
        if (v == FilterVariant::Original && !saturation) {
            saturation = saturation_sinr_average(filters.back().tx, filters.back().rx, pdp, config.window,
                                                 config.subcarrier_stride);
        }
    }

    const std::size_t n_det = config.detectors.size();
    const std::size_t n_var = filters.size();
    std::vector<SinrRecord> records;
    for (const int n_ant : config.antennas) {
        const auto start = std::chrono::steady_clock::now();
        // results[(d * n_var + v) * trials + t]
        std::vector<double> results(n_det * n_var * static_cast<std::size_t>(config.trials), 0.0);
        std::vector<double> baseline(static_cast<std::size_t>(config.trials), 0.0);

        parallel_trials(config.trials, config.threads, [&](int t) {
            const auto trial = static_cast<std::uint64_t>(t);
            const ChannelSet ch = draw_channels(pdp, static_cast<std::size_t>(n_ant),
                                                static_cast<std::size_t>(config.num_users), config.seed, trial);
            const auto responses = frequency_responses(ch, config.num_subcarriers);
            for (std::size_t d = 0; d < n_det; ++d) {
                std::vector<CombinerMatrix> combiners;
                combiners.reserve(responses.size());
                for (const auto& h : responses) {
                    combiners.push_back(make_combiner(config.detectors[d], h, noise));
                }
                for (std::size_t v = 0; v < n_var; ++v) {
                    double value = 0.0;
                    if (config.estimator == Estimator::Coefficient) {
                        double acc = 0.0;
                        std::size_t count = 0;
                        for (int m : subcarriers) {
                            for (const auto& u : estimators[v].evaluate(ch, combiners[static_cast<std::size_t>(m)], noise)) {
                                acc += u.sinr;
                                ++count;
                            }
                        }
                        value = acc / static_cast<double>(count);
                    } else {
                        const TrialContext ctx{config.num_symbols, config.guard_symbols(), noise, config.seed, trial};
                        value = sinr_end_to_end_linear(ch, combiners, filters[v], estimators[v], ctx, subcarriers);
                    }
                    results[(d * n_var + v) * static_cast<std::size_t>(config.trials) + static_cast<std::size_t>(t)] = value;
                }
            }
            if (config.cp_ofdm_baseline) {
                baseline[static_cast<std::size_t>(t)] = cp_ofdm_zf_sinr_linear(ch, config.num_subcarriers, noise, subcarriers);
            }
        });
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        auto base_record = [&](std::string detector, std::string variant) {
            SinrRecord r;
            r.num_antennas = n_ant;
            r.num_users = config.num_users;
            r.num_subcarriers = config.num_subcarriers;
            r.detector = std::move(detector);
            r.variant = std::move(variant);
            r.estimator = std::string(to_string(config.estimator));
            r.snr_db = config.snr_db;
            r.seed = config.seed;
            r.trials = config.trials;
            r.wall_time_s = elapsed;
            return r;
        };
        for (std::size_t d = 0; d < n_det; ++d) {
            for (std::size_t v = 0; v < n_var; ++v) {
                const std::span<const double> slice(results.data() + (d * n_var + v) * static_cast<std::size_t>(config.trials),
                                                    static_cast<std::size_t>(config.trials));
                const std::uint64_t stream = (static_cast<std::uint64_t>(n_ant) << 8) | ((d * n_var + v + 1) & 0xff);
                const auto [db, se] = aggregate_db(slice, config.seed, stream);
                SinrRecord r = base_record(std::string(to_string(config.detectors[d])), std::string(to_string(filters[v].variant)));
                r.sinr_db = db;
                r.stderr_db = se;
                if (filters[v].variant == FilterVariant::Original) {
                    r.saturation_db = saturation;
                }
                records.push_back(std::move(r));
            }
        }
        if (config.cp_ofdm_baseline && n_ant >= config.num_users) {
            const auto [db, se] = aggregate_db(baseline, config.seed, static_cast<std::uint64_t>(n_ant) << 8);
            SinrRecord r = base_record("zf", "cp_ofdm");
            r.estimator = "analytic";
            r.sinr_db = db;
            r.stderr_db = se;
            records.push_back(std::move(r));
        }
    }
    return records;
}

}  // namespace fbmc
