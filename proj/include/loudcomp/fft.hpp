// Copyright 2026 The Loudcomp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOUDCOMP_FFT_HPP
#define LOUDCOMP_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace loudcomp {

// In-place iterative radix-2 DFT. data.size() must be a power of two.
// Forward transform uses the e^{-i 2 pi k n / N} convention, no scaling.
void fft(std::span<std::complex<double>> data, bool inverse = false);

// Forward DFT of a real frame; returns all N complex bins.
std::vector<std::complex<double>> fft_real(std::span<const double> frame);

bool is_power_of_two(std::size_t n);

}  // namespace loudcomp

#endif  // LOUDCOMP_FFT_HPP
