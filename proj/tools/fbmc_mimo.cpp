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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbmc/asymptotic_analysis.hpp"
#include "fbmc/channel_model.hpp"
#include "fbmc/config.hpp"
#include "fbmc/csv_io.hpp"
#include "fbmc/experiment.hpp"
#include "fbmc/fbmc_modem.hpp"
#include "fbmc/prototype_filter.hpp"

namespace fs = std::filesystem;
using namespace fbmc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct Run {
    std::string subcommand;
    ExperimentConfig config;
    KeyValues options;
    fs::path out_dir;
    std::vector<std::string> artifacts;
};

std::string option(const Run& run, const std::string& key, const std::string& fallback = {}) {
    const auto it = run.options.find(key);
    return it == run.options.end() ? fallback : it->second;
}

std::ofstream open_output(Run& run, const std::string& name) {
    const fs::path path = run.out_dir / name;
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    run.artifacts.push_back(name);
    return os;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double max_tap_deviation(const PrototypeFilter& a, const PrototypeFilter& b) {
    double peak = 0.0;
    for (const auto& v : a.taps()) peak = std::max(peak, std::abs(v));
    const auto lo = std::min(a.first_time(), b.first_time());
    const auto hi = std::max(a.end_time(), b.end_time());
    double dev = 0.0;
    for (auto t = lo; t < hi; ++t) dev = std::max(dev, std::abs(a.at(t) - b.at(t)));
    return peak > 0.0 ? dev / peak : dev;
}

int cmd_design_filter(Run& run) {
    const auto& c = run.config;
    const PowerDelayProfile pdp = c.pdp.build();
    const PrototypeFilter p = design_phydyas(c.num_subcarriers, c.overlap);
    ModifiedDesignReport report;
    const std::size_t grid = default_grid_size(p);
    const PrototypeFilter pm = design_modified(p, pdp, grid, 1e-12, &report);

    {
        auto os = open_output(run, "filter_original.csv");
        write_filter_csv(os, p);
    }
    {
        auto os = open_output(run, "filter_modified.csv");
        write_filter_csv(os, pm);
    }
    {
        auto os = open_output(run, "spectrum.csv");
        write_spectrum_csv(os, spectrum(p, grid), spectrum(pm, grid), c.num_subcarriers);
    }
    {
        auto os = open_output(run, "pdp.csv");
        write_pdp_csv(os, pdp);
    }

    const double err_orig = nyquist_error(composite_pulse(p, matched_filter(p), pdp), c.num_subcarriers);
    const double err_mod = nyquist_error(composite_pulse(p, matched_filter(pm), pdp), c.num_subcarriers);
    std::cout << "M=" << c.num_subcarriers << " overlap=" << c.overlap << " L=" << pdp.length() << '\n'
              << "original: " << p.length() << " taps, composite Nyquist error " << fmt(err_orig) << '\n'
              << "modified: " << pm.length() << " taps, composite Nyquist error " << fmt(err_mod) << '\n'
              << "captured energy fraction " << fmt(report.captured_energy_fraction) << '\n'
              << "max tap deviation / peak " << fmt(max_tap_deviation(p, pm)) << '\n';
    return kExitOk;
}

struct Check {
    std::string suite;
    std::string name;
    double value;
    double threshold;
    bool pass;
};

void orthogonality_rows(std::vector<Check>& rows, const std::string& label, const PrototypeFilter& p) {
    const auto r = orthogonality_check(p, 4, 2 * p.overlap());
    rows.push_back({"orthogonality", label + " cross", r.max_cross, 1e-3, r.max_cross <= 1e-3});
    rows.push_back({"orthogonality", label + " self", r.max_self_error, 1e-3, r.max_self_error <= 1e-3});
}

int cmd_validate(Run& run) {
    const auto& c = run.config;
    const PowerDelayProfile pdp = c.pdp.build();
    std::vector<Check> rows;

    const PrototypeFilter p = design_phydyas(c.num_subcarriers, c.overlap);
    orthogonality_rows(rows, "phydyas M=" + std::to_string(c.num_subcarriers), p);

    std::optional<PrototypeFilter> file_filter;
    if (const auto path = option(run, "filter"); !path.empty()) {
        file_filter = read_filter_csv(fs::path(path));
        orthogonality_rows(rows, "file", *file_filter);
        const double e = nyquist_error(composite_pulse(*file_filter, matched_filter(*file_filter)),
                                       file_filter->num_subcarriers());
        rows.push_back({"nyquist", "file composite", e, 1e-3, e <= 1e-3});
    }

    const PrototypeFilter pm = design_modified(p, pdp);
    const double base = nyquist_error(composite_pulse(p, matched_filter(p)), c.num_subcarriers);
    rows.push_back({"nyquist", "phydyas composite", base, 1e-3, base <= 1e-3});
    const double unmod = nyquist_error(composite_pulse(p, matched_filter(p), pdp), c.num_subcarriers);
    const double mod = nyquist_error(composite_pulse(p, matched_filter(pm), pdp), c.num_subcarriers);
    rows.push_back({"nyquist", "modified composite with PDP", mod, 1e-3, mod <= 1e-3});
    if (pdp.length() == 1) {
        const double dev = max_tap_deviation(p, pm);
        rows.push_back({"nyquist", "modified equals original for delta PDP", dev, 1e-10, dev <= 1e-10});
    } else {
        const double gain = unmod / mod;
        rows.push_back({"nyquist", "improvement over unmodified", gain, 100.0, gain >= 100.0});
    }

    ExperimentConfig small = c;
    small.antennas = {16};
    small.num_users = std::min(c.num_users, 2);
    small.trials = 4;
    small.num_symbols = std::max(c.num_symbols, 100);
    small.detectors = {Detector::ZF};
    small.variants = {FilterVariant::Original, FilterVariant::Modified};
    small.cp_ofdm_baseline = false;
    small.estimator = Estimator::Coefficient;
    const auto coef = sweep_antennas(small);
    small.estimator = Estimator::EndToEnd;
    const auto e2e = sweep_antennas(small);
    for (std::size_t i = 0; i < coef.size(); ++i) {
        const double diff = std::abs(coef[i].sinr_db - e2e[i].sinr_db);
        rows.push_back({"estimator_agreement", coef[i].variant + " N=16 K=" + std::to_string(small.num_users), diff, 0.5,
                        diff <= 0.5});
    }

    bool all = true;
    auto os = open_output(run, "validation.csv");
    os << "# schema_version=" << kCsvSchemaVersion << '\n' << "suite,check,value,threshold,pass\n";
    for (const auto& r : rows) {
        all = all && r.pass;
        os << r.suite << ',' << r.name << ',' << fmt(r.value) << ',' << fmt(r.threshold) << ','
           << (r.pass ? "pass" : "fail") << '\n';
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.suite << ": " << r.name << " = " << fmt(r.value)
                  << " (limit " << fmt(r.threshold) << ")\n";
    }
    std::cout << (all ? "all checks passed" : "validation FAILED") << '\n';
    return all ? kExitOk : kExitValidation;
}

int cmd_sweep(Run& run) {
    const auto records = sweep_antennas(run.config);
    {
        auto os = open_output(run, "sinr.csv");
        write_sinr_csv(os, records);
    }
    std::printf("%6s %-6s %-9s %10s %9s %10s\n", "N", "det", "variant", "sinr_db", "stderr", "sat_db");
    for (const auto& r : records) {
        std::printf("%6d %-6s %-9s %10.4f %9.4f %10s\n", r.num_antennas, r.detector.c_str(), r.variant.c_str(),
                    r.sinr_db, r.stderr_db, r.saturation_db ? format_db(*r.saturation_db).c_str() : "");
    }
    return kExitOk;
}

int cmd_saturation(Run& run) {
    const auto& c = run.config;
    const PowerDelayProfile pdp = c.pdp.build();
    const FilterPair f = make_filter_pair(c.num_subcarriers, c.overlap, pdp, FilterVariant::Original);
    auto os = open_output(run, "saturation.csv");
    os << "# schema_version=" << kCsvSchemaVersion << '\n' << "m,saturation_db\n";
    for (int m = 0; m < c.num_subcarriers; m += c.subcarrier_stride) {
        os << m << ',' << format_db(saturation_sinr(f.tx, f.rx, pdp, m, c.window)) << '\n';
    }
    const double avg = saturation_sinr_average(f.tx, f.rx, pdp, c.window, c.subcarrier_stride);
    std::cout << "saturation_sinr_db = " << format_db(avg) << '\n';
    return kExitOk;
}

int cmd_estimate_pdp(Run& run) {
    const auto& c = run.config;
    std::optional<PowerDelayProfile> truth;
    std::optional<ChannelSet> ch;
    if (const auto path = option(run, "channels"); !path.empty()) {
        ch = read_channel_dump(fs::path(path));
    } else {
        truth = c.pdp.build();
        const auto n = std::stoul(option(run, "num_antennas", "400"));
        ch = draw_channels(*truth, n, static_cast<std::size_t>(c.num_users), c.seed);
        if (option(run, "dump") == "true") {
            run.artifacts.push_back("channels.bin");
            write_channel_dump(run.out_dir / "channels.bin", *ch);
        }
    }
    const PowerDelayProfile est = estimate_pdp(*ch);
    {
        auto os = open_output(run, "pdp_estimate.csv");
        write_pdp_csv(os, est);
    }
    std::cout << "N=" << ch->num_antennas() << " K=" << ch->num_users() << " L=" << ch->num_taps() << '\n';
    if (truth) {
        double err = 0.0;
        for (std::size_t l = 0; l < est.length(); ++l) err = std::max(err, std::abs(est[l] - (*truth)[l]));
        std::cout << "linf error / max rho = " << fmt(err / truth->max()) << '\n';
    }
    return kExitOk;
}

int dispatch(Run& run) {
    fs::create_directories(run.out_dir);
    int rc = kExitUsage;
    if (run.subcommand == "design-filter") rc = cmd_design_filter(run);
    else if (run.subcommand == "validate") rc = cmd_validate(run);
    else if (run.subcommand == "sweep") rc = cmd_sweep(run);
    else if (run.subcommand == "saturation") rc = cmd_saturation(run);
    else if (run.subcommand == "estimate-pdp") rc = cmd_estimate_pdp(run);
    else throw ConfigError("unknown subcommand '" + run.subcommand + "'");

    RunManifest m;
    m.subcommand = run.subcommand;
    m.config = to_key_values(run.config);
    m.options = run.options;
    m.seed = run.config.seed;
    m.artifacts = run.artifacts;
    m.timestamp = utc_timestamp();
    write_manifest(run.out_dir / (run.subcommand + ".manifest.json"), m);
    return rc;
}

std::string absolute_path(const std::string& p) { return p.empty() ? p : fs::absolute(p).lexically_normal().string(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FBMC/OQAM massive MIMO uplink simulator", "fbmc-mimo"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::string config_file;
    std::string manifest_file;
    std::string out_dir = ".";
    app.add_option("--config", config_file, "key = value config file");
    app.add_option("--manifest", manifest_file, "re-run the invocation recorded in a manifest");
    app.add_option("--out-dir", out_dir, "output directory");

    // Flags that map one-to-one onto config keys; they override file values.
    const std::vector<std::pair<std::string, std::string>> keyed = {
        {"--seed", "seed"},         {"--scale", "scale"},
        {"--M", "M"},               {"--overlap", "overlap"},
        {"--K", "K"},               {"--antennas", "antennas"},
        {"--T", "T"},               {"--trials", "trials"},
        {"--snr-db", "snr_db"},     {"--pdp", "pdp"},
        {"--alpha", "alpha"},       {"--L", "L"},
        {"--pdp-file", "pdp_file"}, {"--variants", "variants"},
        {"--detectors", "detectors"}, {"--estimator", "estimator"},
        {"--cp-ofdm", "cp_ofdm"},   {"--cp-length", "cp_length"},
        {"--threads", "threads"},   {"--window-dm", "window_dm"},
        {"--window-dn", "window_dn"}, {"--stride", "subcarrier_stride"},
    };
    std::vector<std::string> flag_values(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        app.add_option(keyed[i].first, flag_values[i], "config key '" + keyed[i].second + "'");
    }
    std::vector<std::string> sets;
    app.add_option("--set", sets, "key=value config override (repeatable)");

    auto* design = app.add_subcommand("design-filter", "write original/modified filter taps and spectra");
    auto* validate = app.add_subcommand("validate", "run orthogonality, Nyquist and estimator-agreement checks");
    std::string filter_file;
    validate->add_option("--filter", filter_file, "also check a filter read from CSV");
    auto* sweep = app.add_subcommand("sweep", "SINR versus number of BS antennas");
    auto* saturation = app.add_subcommand("saturation", "asymptotic SINR ceiling of the unmodified filter");
    auto* estimate = app.add_subcommand("estimate-pdp", "estimate the PDP from channel taps");
    std::string channels_file;
    std::string num_antennas = "400";
    bool dump = false;
    estimate->add_option("--channels", channels_file, "binary channel dump to read");
    estimate->add_option("--num-antennas", num_antennas, "antennas to draw when no dump is given");
    estimate->add_flag("--dump", dump, "write the drawn channels to channels.bin");
    (void)design;
    (void)sweep;
    (void)saturation;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        Run run;
        run.out_dir = out_dir;
        KeyValues merged;
        if (const char* env = std::getenv("FBMC_SEED"); env && *env) {
            merged["seed"] = env;
        }
        if (!manifest_file.empty()) {
            const RunManifest m = read_manifest(manifest_file);
            run.subcommand = m.subcommand;
            run.options = m.options;
            for (const auto& [k, v] : m.config) merged[k] = v;
        } else {
            const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
            if (!sub) {
                std::cerr << app.help();
                return kExitUsage;
            }
            run.subcommand = sub->get_name();
            if (!filter_file.empty()) run.options["filter"] = absolute_path(filter_file);
            if (run.subcommand == "estimate-pdp") {
                if (!channels_file.empty()) run.options["channels"] = absolute_path(channels_file);
                run.options["num_antennas"] = num_antennas;
                run.options["dump"] = dump ? "true" : "false";
            }
        }
        if (!config_file.empty()) {
            for (const auto& [k, v] : read_key_value_file(config_file)) merged[k] = v;
        }
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            if (app.count(keyed[i].first) > 0) merged[keyed[i].second] = flag_values[i];
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
            merged[s.substr(0, eq)] = s.substr(eq + 1);
        }
        if (const auto it = merged.find("pdp_file"); it != merged.end()) {
            it->second = absolute_path(it->second);
        }
        apply_key_values(run.config, merged);
        run.config.validate();
        return dispatch(run);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const InputFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
