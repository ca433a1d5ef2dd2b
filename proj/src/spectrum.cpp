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

#include "loudcomp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loudcomp/erb.hpp"
#include "loudcomp/errors.hpp"
#include "loudcomp/fft.hpp"

namespace loudcomp {
namespace {

// Frequencies this far below the lowest audiometric knot carry no audiogram
// information; their filters reuse the 50 Hz geometry.
constexpr double kMinFilterCenterHz = 50.0;

double one_sided_weight(std::size_t bin, std::size_t half) {
  return (bin == 0 || bin == half) ? 1.0 : 2.0;
}

}  // namespace

std::vector<double> raised_cosine_window(std::size_t length) {
  if (length < 2 || !is_power_of_two(length)) {
    throw ValidationError("window length must be a power of two >= 2");
  }
  std::vector<double> window(length);
  for (std::size_t n = 0; n < length; ++n) {
    window[n] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                             static_cast<double>(n) / static_cast<double>(length));
  }
  window[length / 2] = 1.0;
  return window;
}

double calibration_offset(std::span<const double> window,
                          double full_scale_spl) {
  double sum_sq = 0.0;
  for (double w : window) sum_sq += w * w;
  const double n = static_cast<double>(window.size());
  return full_scale_spl - 10.0 * std::log10(n * sum_sq / 2.0);
}

FrameSpectrum frame_spectrum(std::span<const double> frame,
                             std::span<const double> window,
                             double sample_rate, double full_scale_spl) {
  if (frame.size() != window.size()) {
    throw ValidationError("frame and window lengths differ");
  }
  std::vector<double> windowed(frame.size());
  for (std::size_t n = 0; n < frame.size(); ++n) {
    windowed[n] = frame[n] * window[n];
  }
  FrameSpectrum spectrum;
  spectrum.bins = fft_real(windowed);
  spectrum.sample_rate = sample_rate;
  spectrum.calibration_offset = calibration_offset(window, full_scale_spl);
  return spectrum;
}

FilterBank make_filter_bank(std::size_t window_length, double sample_rate) {
  if (!is_power_of_two(window_length) || window_length < 2) {
    throw ValidationError("filter bank window length must be a power of two");
  }
  if (sample_rate <= 0.0) {
    throw ValidationError("filter bank sample rate must be positive");
  }
  const std::size_t half = window_length / 2;
  const double bin_hz = sample_rate / static_cast<double>(window_length);
  FilterBank bank;
  bank.lo.resize(half + 1);
  bank.hi.resize(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double raw_center = static_cast<double>(k) * bin_hz;
    const double center = std::max(raw_center, kMinFilterCenterHz);
    const double half_bw = 0.5 * erb_bandwidth(center);
    const double lo_hz = center - half_bw;
    const double hi_hz = center + half_bw;
    const std::size_t lo =
        lo_hz <= 0.0 ? 0
                     : static_cast<std::size_t>(std::ceil(lo_hz / bin_hz));
    const double hi_real = std::floor(hi_hz / bin_hz);
    const std::size_t hi =
        hi_real < 0.0 ? 0
                      : std::min(static_cast<std::size_t>(hi_real), half);
    bank.lo[k] = std::min(lo, half);
    bank.hi[k] = hi;
  }
  return bank;
}

std::vector<double> auditory_filter_levels(const FrameSpectrum& spectrum) {
  const std::size_t n = spectrum.bins.size();
  if (!is_power_of_two(n) || n < 2) {
    throw ValidationError("spectrum length must be a power of two");
  }
  const std::size_t half = n / 2;
  const FilterBank bank = make_filter_bank(n, spectrum.sample_rate);

  // Prefix sums of one-sided power make every band sum O(1).
  std::vector<double> cumulative(half + 2, 0.0);
  for (std::size_t j = 0; j <= half; ++j) {
    const double magnitude_sq = std::norm(spectrum.bins[j]);
    cumulative[j + 1] = cumulative[j] + one_sided_weight(j, half) * magnitude_sq;
  }

  std::vector<double> levels(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double band = bank.lo[k] > bank.hi[k]
                            ? 0.0
                            : cumulative[bank.hi[k] + 1] - cumulative[bank.lo[k]];
    levels[k] = band > 0.0
                    ? std::max(10.0 * std::log10(band) +
                                   spectrum.calibration_offset,
                               kSilenceFloorDb)
                    : kSilenceFloorDb;
  }
  return levels;
}

std::vector<double> welch_power_spectrum(std::span<const double> samples,
                                         std::size_t window_length) {
  if (!is_power_of_two(window_length) || window_length < 2) {
    throw ValidationError("welch window length must be a power of two");
  }
  if (samples.size() < window_length) {
    throw ValidationError("welch input shorter than the analysis window");
  }
  const std::vector<double> window = raised_cosine_window(window_length);
  double window_energy = 0.0;
  for (double w : window) window_energy += w * w;
  const std::size_t half = window_length / 2;
  const std::size_t hop = window_length / 2;
  const std::size_t segments = (samples.size() - window_length) / hop + 1;

  std::vector<double> power(half + 1, 0.0);
  std::vector<double> windowed(window_length);
  for (std::size_t s = 0; s < segments; ++s) {
    const std::size_t start = s * hop;
    for (std::size_t n = 0; n < window_length; ++n) {
      windowed[n] = samples[start + n] * window[n];
    }
    const std::vector<std::complex<double>> bins = fft_real(windowed);
    for (std::size_t j = 0; j <= half; ++j) {
      power[j] += one_sided_weight(j, half) * std::norm(bins[j]);
    }
  }
  const double scale = 1.0 / (static_cast<double>(segments) *
                              static_cast<double>(window_length) * window_energy);
  for (double& p : power) p *= scale;
  return power;
}

double erb_band_power(std::span<const double> power, double bin_hz,
                      double center_hz) {
  if (bin_hz <= 0.0) throw ValidationError("bin spacing must be positive");
  const double half_bw = 0.5 * erb_bandwidth(center_hz);
  const double lo_hz = center_hz - half_bw;
  const double hi_hz = center_hz + half_bw;
  const std::size_t lo =
      lo_hz <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(lo_hz / bin_hz));
  double sum = 0.0;
  for (std::size_t j = lo; j < power.size(); ++j) {
    if (static_cast<double>(j) * bin_hz > hi_hz) break;
    sum += power[j];
  }
  return sum;
}

}  // namespace loudcomp
