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

#include "fbmc/csv_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

namespace fbmc {

namespace {

std::string schema_line() { return "# schema_version=" + std::to_string(kCsvSchemaVersion); }

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, sep)) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    return out;
}

// Next non-empty line that is not a comment.
bool next_data_line(std::istream& is, std::string& line) {
    while (std::getline(is, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        return true;
    }
    return false;
}

double to_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputFileError(std::string("invalid number '") + s + "' in " + what);
    }
}

long long to_integer(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputFileError(std::string("invalid integer '") + s + "' in " + what);
    }
}

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream is(path, mode);
    if (!is) {
        throw InputFileError("cannot open '" + path.string() + "'");
    }
    return is;
}

double magnitude_db(double mag, double peak) {
    if (peak <= 0.0 || mag <= 0.0) return -300.0;
    return std::max(-300.0, 20.0 * std::log10(mag / peak));
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) {
        throw InputFileError("channel dump truncated");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

std::string format_db(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

void write_filter_csv(std::ostream& os, const PrototypeFilter& p) {
    os << schema_line() << '\n';
    os << "M,overlap,center_index\n";
    os << p.num_subcarriers() << ',' << p.overlap() << ',' << p.center_index() << '\n';
    os << "index,real,imag\n";
    const auto taps = p.taps();
    for (std::size_t i = 0; i < taps.size(); ++i) {
        os << i << ',' << format_full(taps[i].real()) << ',' << format_full(taps[i].imag()) << '\n';
    }
}

PrototypeFilter read_filter_csv(std::istream& is) {
    std::string line;
    if (!next_data_line(is, line) || split(line).at(0) != "M") {
        throw InputFileError("filter CSV: missing 'M,overlap,center_index' header");
    }
    if (!next_data_line(is, line)) {
        throw InputFileError("filter CSV: missing parameter row");
    }
    const auto params = split(line);
    if (params.size() != 3) {
        throw InputFileError("filter CSV: parameter row needs 3 fields");
    }
    const auto M = to_integer(params[0], "filter CSV");
    const auto overlap = to_integer(params[1], "filter CSV");
    const auto center = to_integer(params[2], "filter CSV");
    if (!next_data_line(is, line) || split(line).at(0) != "index") {
        throw InputFileError("filter CSV: missing 'index,real,imag' header");
    }
    std::vector<cplx> taps;
    while (next_data_line(is, line)) {
        const auto f = split(line);
        if (f.size() != 3) {
            throw InputFileError("filter CSV: tap rows need 3 fields");
        }
        if (to_integer(f[0], "filter CSV") != static_cast<long long>(taps.size())) {
            throw InputFileError("filter CSV: tap indices must be consecutive from 0");
        }
        taps.emplace_back(to_double(f[1], "filter CSV"), to_double(f[2], "filter CSV"));
    }
    try {
        return PrototypeFilter(std::move(taps), static_cast<int>(M), static_cast<int>(overlap), center);
    } catch (const std::invalid_argument& e) {
        throw InputFileError(std::string("filter CSV: ") + e.what());
    }
}

PrototypeFilter read_filter_csv(const std::filesystem::path& path) {
    auto is = open_input(path);
    return read_filter_csv(is);
}

void write_pdp_csv(std::ostream& os, const PowerDelayProfile& pdp) {
    os << schema_line() << '\n';
    os << "delay,power\n";
    for (std::size_t l = 0; l < pdp.length(); ++l) {
        os << l << ',' << format_full(pdp[l]) << '\n';
    }
}

PowerDelayProfile read_pdp_csv(std::istream& is) {
    std::string line;
    std::vector<double> powers;
    bool header_seen = false;
    while (next_data_line(is, line)) {
        const auto f = split(line);
        if (!header_seen && f.at(0) == "delay") {
            header_seen = true;
            continue;
        }
        if (f.size() != 2) {
            throw InputFileError("PDP CSV: rows need 2 fields (delay, power)");
        }
        const auto delay = to_integer(f[0], "PDP CSV");
        if (delay < 0 || delay > 1'000'000) {
            throw InputFileError("PDP CSV: delay out of range");
        }
        const auto d = static_cast<std::size_t>(delay);
        if (d >= powers.size()) powers.resize(d + 1, 0.0);
        powers[d] += to_double(f[1], "PDP CSV");
    }
    try {
        return PowerDelayProfile(std::move(powers));
    } catch (const std::invalid_argument& e) {
        throw InputFileError(std::string("PDP CSV: ") + e.what());
    }
}

PowerDelayProfile read_pdp_csv(const std::filesystem::path& path) {
    auto is = open_input(path);
    return read_pdp_csv(is);
}

void write_sinr_csv(std::ostream& os, std::span<const SinrRecord> records) {
    os << schema_line() << '\n';
    os << "N,K,M,detector,variant,snr_db,sinr_db,stderr_db,saturation_db,seed\n";
    for (const auto& r : records) {
        os << r.num_antennas << ',' << r.num_users << ',' << r.num_subcarriers << ',' << r.detector << ','
           << r.variant << ',' << format_db(r.snr_db) << ',' << format_db(r.sinr_db) << ',' << format_db(r.stderr_db)
           << ',' << (r.saturation_db ? format_db(*r.saturation_db) : std::string()) << ',' << r.seed << '\n';
    }
}

void write_spectrum_csv(std::ostream& os, const FilterSpectrum& original, const FilterSpectrum& modified,
                        int num_subcarriers) {
    if (original.grid_size != modified.grid_size || original.values.size() != original.grid_size ||
        modified.values.size() != modified.grid_size) {
        throw std::invalid_argument("write_spectrum_csv: spectra must share one grid");
    }
    const auto grid = static_cast<long long>(original.grid_size);
    auto peak = [](const FilterSpectrum& s) {
        double m = 0.0;
        for (const auto& v : s.values) m = std::max(m, std::abs(v));
        return m;
    };
    const double peak_o = peak(original);
    const double peak_m = peak(modified);
    const double M = num_subcarriers;

    os << schema_line() << '\n';
    os << "bin,freq,original_db,modified_db,sinc_db\n";
    for (long long b = -grid / 2; b < grid - grid / 2; ++b) {
        const auto idx = static_cast<std::size_t>((b + grid) % grid);
        const double f = static_cast<double>(b) * M / static_cast<double>(grid);
        // |sin(pi f) / (M sin(pi f / M))| for the length-M rectangle
        const double x = std::numbers::pi * f;
        const double s = std::sin(x / M);
        const double sinc = std::abs(s) < 1e-300 ? 1.0 : std::abs(std::sin(x) / (M * s));
        os << b << ',' << format_full(f) << ',' << format_db(magnitude_db(std::abs(original.values[idx]), peak_o))
           << ',' << format_db(magnitude_db(std::abs(modified.values[idx]), peak_m)) << ','
           << format_db(magnitude_db(sinc, 1.0)) << '\n';
    }
}

void write_channel_dump(const std::filesystem::path& path, const ChannelSet& ch) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    put_u64(os, ch.num_antennas());
    put_u64(os, ch.num_users());
    put_u64(os, ch.num_taps());
    for (const auto& v : ch.data()) {
        put_u64(os, std::bit_cast<std::uint64_t>(v.real()));
        put_u64(os, std::bit_cast<std::uint64_t>(v.imag()));
    }
    if (!os) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

ChannelSet read_channel_dump(const std::filesystem::path& path) {
    auto is = open_input(path, std::ios::in | std::ios::binary);
    const auto n = get_u64(is);
    const auto k = get_u64(is);
    const auto l = get_u64(is);
    constexpr std::uint64_t kLimit = 1ull << 32;
    if (n == 0 || k == 0 || l == 0 || n > kLimit || k > kLimit || l > kLimit || n * k > kLimit / l) {
        throw InputFileError("channel dump: implausible shape header");
    }
    std::vector<cplx> taps(n * k * l);
    for (auto& v : taps) {
        const double re = std::bit_cast<double>(get_u64(is));
        const double im = std::bit_cast<double>(get_u64(is));
        v = cplx(re, im);
    }
    if (is.peek() != std::char_traits<char>::eof()) {
        throw InputFileError("channel dump: trailing bytes after " + std::to_string(taps.size()) + " taps");
    }
    return ChannelSet(n, k, l, std::move(taps));
}

}  // namespace fbmc
