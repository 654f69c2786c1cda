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

// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance [--criterion N]...   (default: all)

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbmc/asymptotic_analysis.hpp"
#include "fbmc/channel_model.hpp"
#include "fbmc/experiment.hpp"
#include "fbmc/fbmc_modem.hpp"
#include "fbmc/mimo_combining.hpp"
#include "fbmc/prototype_filter.hpp"

using namespace fbmc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig desk(std::vector<int> antennas, std::vector<Detector> detectors, std::vector<FilterVariant> variants,
                      bool cp_ofdm) {
    ExperimentConfig c;
    c.antennas = std::move(antennas);
    c.detectors = std::move(detectors);
    c.variants = std::move(variants);
    c.cp_ofdm_baseline = cp_ofdm;
    c.trials = 50;
    return c;
}

const SinrRecord& find(const std::vector<SinrRecord>& rs, int n, std::string_view det, std::string_view var) {
    for (const auto& r : rs) {
        if (r.num_antennas == n && r.detector == det && r.variant == var) return r;
    }
    throw std::runtime_error("record missing");
}

Outcome orthogonality() {
    const auto t0 = std::chrono::steady_clock::now();
    double cross = 0.0, self = 0.0;
    for (int M : {16, 64}) {
        const auto r = orthogonality_check(design_phydyas(M, 4), 4, 8);
        cross = std::max(cross, r.max_cross);
        self = std::max(self, r.max_self_error);
    }
    const double dt = seconds_since(t0);
    return {cross <= 1e-3 && self <= 1e-3 && dt < 30.0,
            fmt("max |<a,a'>| = %.3g, max |<a,a>-1| = %.3g, %.2f s", cross, self, dt)};
}

Outcome saturation() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rs = sweep_antennas(desk({64, 256}, {Detector::ZF}, {FilterVariant::Original}, false));
    const auto& a = find(rs, 64, "zf", "original");
    const auto& b = find(rs, 256, "zf", "original");
    const double sat = *b.saturation_db;
    const double dt = seconds_since(t0);
    return {std::abs(b.sinr_db - sat) <= 1.0 && b.sinr_db - a.sinr_db <= 1.0 && dt < 600.0,
            fmt("SINR(64) = %.2f dB, SINR(256) = %.2f dB, saturation = %.2f dB, %.1f s", a.sinr_db, b.sinr_db, sat,
                dt)};
}

Outcome desaturation() {
    const std::vector<int> ns{32, 64, 128, 256};
    const auto rs =
        sweep_antennas(desk(ns, {Detector::ZF}, {FilterVariant::Original, FilterVariant::Modified}, false));
    double min_step = 1e9;
    std::string curve;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double s = find(rs, ns[i], "zf", "modified").sinr_db;
        curve += fmt("%s%.2f", i ? "/" : "", s);
        if (i > 0) min_step = std::min(min_step, s - find(rs, ns[i - 1], "zf", "modified").sinr_db);
    }
    const double gap = find(rs, 256, "zf", "modified").sinr_db - find(rs, 256, "zf", "original").sinr_db;
    return {min_step >= 2.0 && gap >= 5.0,
            fmt("modified N=32..256: %s dB, min gain per doubling %.2f dB, modified - original at 256 = %.2f dB",
                curve.c_str(), min_step, gap)};
}

Outcome detector_equivalence() {
    const auto rs = sweep_antennas(
        desk({256}, {Detector::MRC, Detector::ZF, Detector::MMSE}, {FilterVariant::Original}, false));
    const double mrc = find(rs, 256, "mrc", "original").sinr_db;
    const double zf = find(rs, 256, "zf", "original").sinr_db;
    const double mmse = find(rs, 256, "mmse", "original").sinr_db;
    const double spread = std::max({mrc, zf, mmse}) - std::min({mrc, zf, mmse});
    return {spread <= 1.0, fmt("MRC %.2f, ZF %.2f, MMSE %.2f dB, spread %.2f dB", mrc, zf, mmse, spread)};
}

Outcome cp_ofdm_gap() {
    const auto rs = sweep_antennas(desk({128}, {Detector::ZF}, {FilterVariant::Modified}, true));
    const double fbmc = find(rs, 128, "zf", "modified").sinr_db;
    const double ofdm = find(rs, 128, "zf", "cp_ofdm").sinr_db;
    const double gap = ofdm - fbmc;
    return {gap >= 0.5 && gap <= 2.5, fmt("CP-OFDM %.2f dB, modified FBMC %.2f dB, gap %.2f dB", ofdm, fbmc, gap)};
}

Outcome filter_design() {
    double identity = 0.0;
    for (int M : {16, 128, 256}) {
        const auto p = design_phydyas(M, 4);
        const auto q = design_modified(p, PowerDelayProfile::delta());
        for (std::int64_t t = std::min(p.first_time(), q.first_time()); t < std::max(p.end_time(), q.end_time()); ++t) {
            identity = std::max(identity, std::abs(p.at(t) - q.at(t)));
        }
    }
    double worst_ratio = 1e300;
    std::string detail;
    for (auto [M, L] : {std::pair{256, 40}, std::pair{128, 20}}) {
        const auto pdp = exponential_pdp(0.1, static_cast<std::size_t>(L));
        const auto p = design_phydyas(M, 4);
        const double before = nyquist_error(composite_pulse(p, matched_filter(p), pdp), M);
        const double after = nyquist_error(composite_pulse(p, matched_filter(design_modified(p, pdp)), pdp), M);
        worst_ratio = std::min(worst_ratio, before / after);
        detail += fmt(", M=%d L=%d Nyquist error %.3g -> %.3g (x%.0f)", M, L, before, after, before / after);
    }
    return {identity <= 1e-10 && worst_ratio >= 100.0, fmt("delta-PDP max tap change %.3g", identity) + detail};
}

Outcome estimator_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const int M = 32;
    const int trials = 20;
    const InterferenceWindow window{6, 10};
    const double noise = std::pow(10.0, -1.0);
    std::vector<int> all(M);
    for (int m = 0; m < M; ++m) all[static_cast<std::size_t>(m)] = m;

    double worst = 0.0;
    std::string where;
    int points = 0;
    for (const auto& pdp : {PowerDelayProfile::delta(), exponential_pdp(0.2, 8)}) {
        for (auto variant : {FilterVariant::Original, FilterVariant::Modified}) {
            const auto filters = make_filter_pair(M, 4, pdp, variant);
            const CoefficientSinrEstimator est(filters, pdp, window);
            for (std::size_t N : {1u, 8u, 64u}) {
                for (std::size_t K : {1u, 4u}) {
                    const Detector det = N < K ? Detector::MMSE : Detector::ZF;
                    double coef = 0.0, e2e = 0.0;
                    for (int t = 0; t < trials; ++t) {
                        const auto ch = draw_channels(pdp, N, K, 7, static_cast<std::uint64_t>(t));
                        std::vector<CombinerMatrix> w;
                        for (const auto& H : frequency_responses(ch, M)) w.push_back(make_combiner(det, H, noise));
                        double c = 0.0;
                        for (int m = 0; m < M; ++m) {
                            for (const auto& u : est.evaluate(ch, w[static_cast<std::size_t>(m)], noise)) c += u.sinr;
                        }
                        coef += c / static_cast<double>(M * static_cast<int>(K));
                        const TrialContext ctx{100, 8, noise, 7, static_cast<std::uint64_t>(t)};
                        e2e += sinr_end_to_end_linear(ch, w, filters, est, ctx, all);
                    }
                    const double diff = std::abs(10.0 * std::log10(coef / e2e));
                    ++points;
                    if (diff > worst) {
                        worst = diff;
                        where = fmt("N=%zu K=%zu %s %s L=%zu", N, K, std::string(to_string(det)).c_str(),
                                    std::string(to_string(variant)).c_str(), pdp.length());
                    }
                }
            }
        }
    }
    return {worst <= 0.5, fmt("%d lattice points, max |coefficient - end-to-end| = %.3f dB at %s, %.1f s", points,
                              worst, where.c_str(), seconds_since(t0))};
}

Outcome correlation_limit() {
    const int M = 128;
    const std::size_t N = 10000, K = 3;
    const auto pdp = exponential_pdp(0.1, 20);
    const auto ch = draw_channels(pdp, N, K, 11);
    double worst = 0.0;
    for (int m : {0, 17, 64, 127}) {
        const auto H = frequency_response(ch, m, M);
        const auto rho_m = modulated_pdp(pdp, m, M);
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t kp = 0; kp < K; ++kp) {
                for (std::size_t l = 0; l < pdp.length(); ++l) {
                    cplx acc{};
                    for (std::size_t i = 0; i < N; ++i) acc += std::conj(H.values(i, k)) * ch.tap(i, kp, l);
                    const cplx expected = k == kp ? rho_m[l] : cplx{};
                    worst = std::max(worst, std::abs(acc / static_cast<double>(N) - expected));
                }
            }
        }
    }
    return {worst <= 0.05, fmt("N=10^4, K=3, L=20, m in {0,17,64,127}: max abs error %.4f", worst)};
}

Outcome pdp_estimation() {
    const auto pdp = exponential_pdp(0.1, 40);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto est = estimate_pdp(draw_channels(pdp, 400, 10, seed));
        for (std::size_t l = 0; l < pdp.length(); ++l) worst = std::max(worst, std::abs(est[l] - pdp[l]));
    }
    const double rel = worst / pdp.max();
    return {rel <= 0.05, fmt("N=400, K=10, L=40, seeds 1..5: max error %.4f = %.3f max rho", worst, rel)};
}

int shell(const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return fa && fb && sa.str() == sb.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("fbmc_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::string tool = FBMC_MIMO_TOOL;
    const std::vector<std::string> runs{
        "design-filter",
        "sweep --antennas 8,32 --trials 6 --detectors mrc,zf,mmse --threads 1",
        "sweep --antennas 16 --K 2 --trials 3 --estimator end_to_end --M 32 --L 8 --window-dm 6 --threads 1",
        "saturation --stride 16",
        "estimate-pdp --num-antennas 64 --dump",
        "validate",
    };
    int compared = 0;
    std::string bad;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const fs::path a = root / std::to_string(i) / "a", b = root / std::to_string(i) / "b";
        const std::string sub = runs[i].substr(0, runs[i].find(' '));
        if (shell(tool + " --out-dir " + a.string() + " " + runs[i]) != 0) {
            bad += " [" + sub + ": first run failed]";
            continue;
        }
        // the rerun may use a different thread count; results must not depend on it
        if (shell(tool + " --manifest " + (a / (sub + ".manifest.json")).string() + " --threads 3 --out-dir " +
                  b.string()) != 0) {
            bad += " [" + sub + ": manifest rerun failed]";
            continue;
        }
        for (const auto& e : fs::directory_iterator(a)) {
            const auto ext = e.path().extension();
            if (ext != ".csv" && ext != ".bin") continue;
            ++compared;
            if (!same_bytes(e.path(), b / e.path().filename())) bad += " [" + sub + ": " + e.path().filename().string() + "]";
        }
    }
    fs::remove_all(root);
    return {bad.empty() && compared > 0,
            fmt("%zu runs re-executed from their manifests, %d output files compared", runs.size(), compared) +
                (bad.empty() ? std::string() : ", mismatches:" + bad)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fbmc-mimo acceptance criteria"};
    std::vector<int> selected;
    app.add_option("--criterion,-c", selected, "criterion number (repeatable; default all)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
        {1, {"orthogonality", orthogonality}},
        {2, {"saturation", saturation}},
        {3, {"de-saturation", desaturation}},
        {4, {"detector equivalence", detector_equivalence}},
        {5, {"CP-OFDM gap", cp_ofdm_gap}},
        {6, {"filter design", filter_design}},
        {7, {"estimator equivalence", estimator_equivalence}},
        {8, {"correlation limit", correlation_limit}},
        {9, {"PDP estimation", pdp_estimation}},
        {10, {"determinism", determinism}},
    };
    if (selected.empty()) {
        for (const auto& [n, c] : criteria) selected.push_back(n);
    }
    bool all = true;
    for (int n : selected) {
        const auto& [name, run] = criteria.at(n);
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): " << o.detail
                  << std::endl;
    }
    return all ? 0 : 1;
}
