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

#include "loudcomp/processor.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "loudcomp/errors.hpp"
#include "loudcomp/fft.hpp"
#include "loudcomp/spectrum.hpp"

namespace loudcomp {
namespace {

// 10^(g/20) = exp2(g * log2(10) / 20)
constexpr double kGainDbToLog2 = 0.16609640474436811739;

std::vector<double> analysis_window(const ProcessorConfig& cfg) {
  if (cfg.window == AnalysisWindow::kRaisedCosine) {
    return raised_cosine_window(cfg.window_length);
  }
  return std::vector<double>(cfg.window_length, 1.0);
}

void check_compatible(const Waveform& input, const GainTable& table,
                      const ProcessorConfig& cfg) {
  cfg.validate();
  if (input.samples.empty()) {
    throw ValidationError("processor: empty input");
  }
  if (!(input.sample_rate > 0.0)) {
    throw ValidationError("processor: sample rate must be positive");
  }
  if (input.sample_rate != table.sample_rate()) {
    throw ValidationError("processor: gain table was built for sample rate " +
                          std::to_string(table.sample_rate()));
  }
  if (cfg.window_length != table.window_length()) {
    throw ValidationError("processor: gain table was built for window length " +
                          std::to_string(table.window_length()));
  }
}

// Per-bin level -> gain -> weighted center-sample contribution, shared by
// both paths so they differ only in how the spectrum is obtained.
// real[k]/imag[k] hold the one-sided windowed spectrum; returns the center
// sample times window_length.
double gained_center_sum(const double* real, const double* imag,
                         std::size_t half, const FilterBank& bank,
                         double offset, const GainTable& table,
                         double* power_prefix) {
  power_prefix[0] = 0.0;
  for (std::size_t j = 0; j <= half; ++j) {
    const double weight = (j == 0 || j == half) ? 1.0 : 2.0;
    const double magnitude_sq = real[j] * real[j] + imag[j] * imag[j];
    power_prefix[j + 1] = power_prefix[j] + weight * magnitude_sq;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const double band = bank.lo[k] > bank.hi[k]
                            ? 0.0
                            : power_prefix[bank.hi[k] + 1] -
                                  power_prefix[bank.lo[k]];
    const double level =
        band > 0.0 ? 10.0 * std::log10(band) + offset : kSilenceFloorDb;
    const double gain_db = table.lookup_bin(k, level);
    const double gain = std::exp2(gain_db * kGainDbToLog2);
    if (k == 0 || k == half) {
      // (-1)^k = 1: k = 0, and half is even for every window length >= 4.
      sum += gain * real[k];
    } else {
      sum += (k & 1U) ? -2.0 * gain * real[k] : 2.0 * gain * real[k];
    }
  }
  return sum;
}

}  // namespace

void ProcessorConfig::validate() const {
  if (!is_power_of_two(window_length) || window_length < 4) {
    throw ValidationError(
        "processor: window length must be a power of two >= 4");
  }
  if (hop != 1) {
    throw ValidationError("processor: hop is fixed at 1 sample");
  }
  if (center_index != window_length / 2) {
    throw ValidationError(
        "processor: center index must equal window_length / 2");
  }
  if (resync_interval < 1) {
    throw ValidationError("processor: resync interval must be >= 1");
  }
}

double calibration_offset(const ProcessorConfig& cfg) {
  cfg.validate();
  const std::vector<double> window = analysis_window(cfg);
  return calibration_offset(window, cfg.full_scale_spl);
}

Waveform process(const Waveform& input, const GainTable& table,
                 const ProcessorConfig& cfg) {
  check_compatible(input, table, cfg);
  const std::size_t n = cfg.window_length;
  const std::size_t half = n / 2;
  const std::size_t center = cfg.center_index;
  const std::vector<double> window = analysis_window(cfg);
  const double offset = calibration_offset(window, cfg.full_scale_spl);
  const FilterBank bank = make_filter_bank(n, input.sample_rate);
  const std::ptrdiff_t length =
      static_cast<std::ptrdiff_t>(input.samples.size());

  Waveform output;
  output.sample_rate = input.sample_rate;
  output.samples.resize(input.samples.size());

  std::vector<std::complex<double>> bins(n);
  std::vector<double> real(half + 1);
  std::vector<double> imag(half + 1);
  std::vector<double> power_prefix(half + 2);
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::ptrdiff_t m = 0; m < length; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::ptrdiff_t idx =
          m - static_cast<std::ptrdiff_t>(center) + static_cast<std::ptrdiff_t>(j);
      const double sample =
          (idx >= 0 && idx < length) ? input.samples[static_cast<std::size_t>(idx)]
                                     : 0.0;
      bins[j] = std::complex<double>(sample * window[j], 0.0);
    }
    fft(bins);
    for (std::size_t k = 0; k <= half; ++k) {
      real[k] = bins[k].real();
      imag[k] = bins[k].imag();
    }
    output.samples[static_cast<std::size_t>(m)] =
        inv_n * gained_center_sum(real.data(), imag.data(), half, bank, offset,
                                  table, power_prefix.data());
  }
  return output;
}

Waveform process_sliding(const Waveform& input, const GainTable& table,
                         const ProcessorConfig& cfg) {
  check_compatible(input, table, cfg);
  const std::size_t n = cfg.window_length;
  const std::size_t half = n / 2;
  const std::size_t center = cfg.center_index;
  const std::size_t mask = n - 1;
  const bool raised = cfg.window == AnalysisWindow::kRaisedCosine;
  const std::vector<double> window = analysis_window(cfg);
  const double offset = calibration_offset(window, cfg.full_scale_spl);
  const FilterBank bank = make_filter_bank(n, input.sample_rate);
  const std::ptrdiff_t length =
      static_cast<std::ptrdiff_t>(input.samples.size());

  Waveform output;
  output.sample_rate = input.sample_rate;
  output.samples.resize(input.samples.size());

  // Rotation factors of the sliding recurrence R' = (R + delta) * e^(i*2*pi*k/N).
  std::vector<double> rot_cos(half + 1);
  std::vector<double> rot_sin(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    rot_cos[k] = std::cos(angle);
    rot_sin[k] = std::sin(angle);
  }

  // ring[(start + j) & mask] is frame sample j; the frame for output m spans
  // input indices [m - center, m + center - 1], zero-padded outside.
  std::vector<double> ring(n, 0.0);
  std::size_t start = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::ptrdiff_t idx =
        -static_cast<std::ptrdiff_t>(center) + static_cast<std::ptrdiff_t>(j);
    ring[j] = (idx >= 0 && idx < length)
                  ? input.samples[static_cast<std::size_t>(idx)]
                  : 0.0;
  }

  std::vector<double> rect_real(half + 1);
  std::vector<double> rect_imag(half + 1);
  std::vector<std::complex<double>> fft_buffer(n);
  const auto resync = [&] {
    for (std::size_t j = 0; j < n; ++j) {
      fft_buffer[j] = std::complex<double>(ring[(start + j) & mask], 0.0);
    }
    fft(fft_buffer);
    for (std::size_t k = 0; k <= half; ++k) {
      rect_real[k] = fft_buffer[k].real();
      rect_imag[k] = fft_buffer[k].imag();
    }
  };
  resync();
  std::size_t since_resync = 0;

  std::vector<double> real(half + 1);
  std::vector<double> imag(half + 1);
  std::vector<double> power_prefix(half + 2);
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::ptrdiff_t m = 0; m < length; ++m) {
    if (since_resync >= cfg.resync_interval) {
      resync();
      since_resync = 0;
    }
    if (raised) {
      // Raised-cosine spectrum via the 3-tap convolution; off-range
      // neighbors come from conjugate symmetry of the real-input transform.
      for (std::size_t k = 0; k <= half; ++k) {
        const double prev_re = k == 0 ? rect_real[1] : rect_real[k - 1];
        const double prev_im = k == 0 ? -rect_imag[1] : rect_imag[k - 1];
        const double next_re = k == half ? rect_real[half - 1] : rect_real[k + 1];
        const double next_im =
            k == half ? -rect_imag[half - 1] : rect_imag[k + 1];
        real[k] = 0.5 * rect_real[k] - 0.25 * (prev_re + next_re);
        imag[k] = 0.5 * rect_imag[k] - 0.25 * (prev_im + next_im);
      }
    } else {
      real = rect_real;
      imag = rect_imag;
    }
    output.samples[static_cast<std::size_t>(m)] =
        inv_n * gained_center_sum(real.data(), imag.data(), half, bank, offset,
                                  table, power_prefix.data());

    // Slide to the frame of m + 1.
    const std::ptrdiff_t incoming = m + static_cast<std::ptrdiff_t>(center);
    const double sample_new =
        incoming < length ? input.samples[static_cast<std::size_t>(incoming)]
                          : 0.0;
    const double sample_old = ring[start];
    const double delta = sample_new - sample_old;
    for (std::size_t k = 0; k <= half; ++k) {
      const double re = rect_real[k] + delta;
      const double im = rect_imag[k];
      rect_real[k] = re * rot_cos[k] - im * rot_sin[k];
      rect_imag[k] = re * rot_sin[k] + im * rot_cos[k];
    }
    ring[start] = sample_new;
    start = (start + 1) & mask;
    ++since_resync;
  }
  return output;
}

}  // namespace loudcomp
