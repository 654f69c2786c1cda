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

#include "fbmc/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fbmc {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Fft::Impl {
    fftw_plan plan = nullptr;
    ~Impl() {
        if (plan != nullptr) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

Fft::Fft(std::size_t size, Direction dir) : size_(size), impl_(std::make_unique<Impl>()) {
    if (size == 0) {
        throw std::invalid_argument("Fft: size must be positive");
    }
    std::vector<std::complex<double>> in(size), out(size);
    std::lock_guard lock(planner_mutex());
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(size), reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()),
                                   dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (impl_->plan == nullptr) {
        throw std::runtime_error("Fft: FFTW planning failed");
    }
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    if (in.size() != size_ || out.size() != size_) {
        throw std::invalid_argument("Fft: buffer length mismatch");
    }
    // The plan is out-of-place; aliasing buffers go through a copy.
    if (in.data() == out.data()) {
        std::vector<std::complex<double>> tmp(in.begin(), in.end());
        fftw_execute_dft(impl_->plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
        return;
    }
    // FFTW does not modify the input of an out-of-place complex transform.
    fftw_execute_dft(impl_->plan, const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace fbmc
