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

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace fbmc {

// Thin RAII wrapper around an FFTW plan of fixed length. Plans are created
// under a global lock; execute() is safe to call concurrently on distinct
// buffers.
class Fft {
public:
    enum class Direction { Forward, Backward };

    Fft(std::size_t size, Direction dir);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&&) noexcept;
    Fft& operator=(Fft&&) noexcept;

    std::size_t size() const { return size_; }

    // Unnormalized transform: Forward uses e^{-j 2 pi k n / size},
    // Backward uses e^{+j 2 pi k n / size}. in and out may alias.
    void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

private:
    struct Impl;
    std::size_t size_ = 0;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fbmc
