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

#include "loudcomp/stoi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

#include "loudcomp/errors.hpp"
#include "loudcomp/fft.hpp"

namespace loudcomp {
namespace {

constexpr double kStoiRateHz = 10000.0;
constexpr std::size_t kFrameLength = 256;
constexpr std::size_t kFrameHop = 128;
constexpr std::size_t kFftLength = 512;
constexpr std::size_t kBandCount = 15;
constexpr double kLowestBandHz = 150.0;
constexpr std::size_t kSegmentFrames = 30;
constexpr double kSilenceRangeDb = 40.0;
constexpr double kSdrClipDb = -15.0;

// Kaiser-windowed sinc lowpass designed for 60 dB stopband attenuation with
// the transition band [0.45, 0.5] * min_rate.
std::vector<double> design_lowpass(double upsampled_rate, double min_rate,
                                   std::size_t& delay) {
  constexpr double kAttenuationDb = 60.0;
  const double beta = 0.1102 * (kAttenuationDb - 8.7);
  const double transition_rad =
      2.0 * std::numbers::pi * (0.05 * min_rate) / upsampled_rate;
  std::size_t taps = static_cast<std::size_t>(
      std::ceil((kAttenuationDb - 7.95) / (2.285 * transition_rad)));
  if (taps % 2 == 0) ++taps;
  const double center = static_cast<double>(taps - 1) / 2.0;
  const double cutoff_rad =
      2.0 * std::numbers::pi * (0.475 * min_rate) / upsampled_rate;
  const double i0_beta = std::cyl_bessel_i(0.0, beta);

  std::vector<double> taps_out(taps);
  for (std::size_t n = 0; n < taps; ++n) {
    const double t = static_cast<double>(n) - center;
    const double sinc =
        t == 0.0 ? cutoff_rad / std::numbers::pi
                 : std::sin(cutoff_rad * t) / (std::numbers::pi * t);
    const double r = t / center;
    const double kaiser =
        std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
        i0_beta;
    taps_out[n] = sinc * kaiser;
  }
  delay = (taps - 1) / 2;
  return taps_out;
}

// Symmetric raised-cosine analysis window without zero endpoints.
std::vector<double> stoi_window(std::size_t length) {
  std::vector<double> window(length);
  for (std::size_t n = 0; n < length; ++n) {
    window[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                      static_cast<double>(n + 1) /
                                      static_cast<double>(length + 1)));
  }
  return window;
}

}  // namespace

Waveform resample(const Waveform& signal, double to_hz) {
  if (!(signal.sample_rate > 0.0) || !(to_hz > 0.0)) {
    throw ValidationError("resample: rates must be positive");
  }
  if (signal.sample_rate == to_hz) return signal;

  const long long from_i = std::llround(signal.sample_rate);
  const long long to_i = std::llround(to_hz);
  if (from_i <= 0 || to_i <= 0) {
    throw ValidationError("resample: rates must be positive integers in Hz");
  }
  const long long divisor = std::gcd(from_i, to_i);
  const std::size_t up = static_cast<std::size_t>(to_i / divisor);
  const std::size_t down = static_cast<std::size_t>(from_i / divisor);
  if (up == 1 && down == 1) {
    Waveform copy = signal;
    copy.sample_rate = to_hz;
    return copy;
  }

  const double min_rate = std::min(signal.sample_rate, to_hz);
  const double upsampled_rate = signal.sample_rate * static_cast<double>(up);
  std::size_t delay = 0;
  const std::vector<double> lowpass =
      design_lowpass(upsampled_rate, min_rate, delay);

  // Polyphase split with per-phase unity DC gain, so constants pass exactly.
  std::vector<std::vector<double>> phases(up);
  for (std::size_t p = 0; p < up; ++p) {
    double sum = 0.0;
    for (std::size_t n = p; n < lowpass.size(); n += up) sum += lowpass[n];
    std::vector<double>& taps = phases[p];
    for (std::size_t n = p; n < lowpass.size(); n += up) {
      taps.push_back(lowpass[n] / sum);
    }
  }

  const std::size_t in_length = signal.samples.size();
  const std::size_t out_length =
      in_length * up / down;  // length * to / from, rounded down
  Waveform output;
  output.sample_rate = to_hz;
  output.samples.resize(out_length);
  for (std::size_t j = 0; j < out_length; ++j) {
    const std::size_t u = j * down + delay;
    const std::size_t phase = u % up;
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(u / up);
    const std::vector<double>& taps = phases[phase];
    double acc = 0.0;
    for (std::size_t q = 0; q < taps.size(); ++q) {
      const std::ptrdiff_t idx = base - static_cast<std::ptrdiff_t>(q);
      if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(in_length)) {
        acc += taps[q] * signal.samples[static_cast<std::size_t>(idx)];
      }
    }
    output.samples[j] = acc;
  }
  return output;
}

StoiScore stoi(const Waveform& clean, const Waveform& degraded) {
  if (clean.samples.size() != degraded.samples.size()) {
    throw ValidationError("stoi: signals must have equal lengths");
  }
  if (clean.sample_rate != degraded.sample_rate) {
    throw ValidationError("stoi: signals must share one sample rate");
  }
  if (clean.sample_rate < kStoiRateHz) {
    throw ValidationError("stoi: sample rate must be at least 10 kHz");
  }
  const Waveform x10 = resample(clean, kStoiRateHz);
  const Waveform y10 = resample(degraded, kStoiRateHz);
  const std::size_t length = x10.samples.size();
  if (length < kFrameLength) {
    throw ValidationError("stoi: signal shorter than one frame");
  }

  const std::vector<double> window = stoi_window(kFrameLength);
  const std::size_t frame_count = (length - kFrameLength) / kFrameHop + 1;

  // Silent-frame removal keyed on the clean signal's windowed frame energy.
  std::vector<double> frame_energy_db(frame_count);
  double max_energy_db = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < frame_count; ++m) {
    double energy = 0.0;
    const std::size_t start = m * kFrameHop;
    for (std::size_t n = 0; n < kFrameLength; ++n) {
      const double v = x10.samples[start + n] * window[n];
      energy += v * v;
    }
    frame_energy_db[m] =
        energy > 0.0 ? 10.0 * std::log10(energy)
                     : -std::numeric_limits<double>::infinity();
    max_energy_db = std::max(max_energy_db, frame_energy_db[m]);
  }
  if (std::isinf(max_energy_db)) {
    throw ValidationError("stoi: clean signal contains no energy");
  }
  std::vector<std::size_t> kept;
  for (std::size_t m = 0; m < frame_count; ++m) {
    if (frame_energy_db[m] > max_energy_db - kSilenceRangeDb) kept.push_back(m);
  }
  const std::size_t active = kept.size();
  if (active < kSegmentFrames) {
    throw ValidationError("stoi: signal shorter than one 30-frame segment");
  }

  // One-third-octave band edges: centers 150 * 2^(j/3).
  std::vector<std::size_t> band_lo(kBandCount);
  std::vector<std::size_t> band_hi(kBandCount);  // exclusive
  const double bin_hz = kStoiRateHz / static_cast<double>(kFftLength);
  for (std::size_t j = 0; j < kBandCount; ++j) {
    const double center =
        kLowestBandHz * std::exp2(static_cast<double>(j) / 3.0);
    const double lo_hz = center * std::exp2(-1.0 / 6.0);
    const double hi_hz = center * std::exp2(1.0 / 6.0);
    band_lo[j] = static_cast<std::size_t>(std::ceil(lo_hz / bin_hz));
    band_hi[j] = static_cast<std::size_t>(std::ceil(hi_hz / bin_hz));
  }

  // Time-frequency envelopes of the kept frames.
  const auto envelopes = [&](const Waveform& signal) {
    std::vector<double> out(kBandCount * active);
    std::vector<std::complex<double>> bins(kFftLength);
    for (std::size_t i = 0; i < active; ++i) {
      const std::size_t start = kept[i] * kFrameHop;
      for (std::size_t n = 0; n < kFftLength; ++n) {
        const double v = n < kFrameLength
                             ? signal.samples[start + n] * window[n]
                             : 0.0;
        bins[n] = std::complex<double>(v, 0.0);
      }
      fft(bins);
      for (std::size_t j = 0; j < kBandCount; ++j) {
        double power = 0.0;
        for (std::size_t k = band_lo[j]; k < band_hi[j]; ++k) {
          power += std::norm(bins[k]);
        }
        out[j * active + i] = std::sqrt(power);
      }
    }
    return out;
  };
  const std::vector<double> env_x = envelopes(x10);
  const std::vector<double> env_y = envelopes(y10);

  const std::size_t segments = active - kSegmentFrames + 1;
  const double clip_factor = 1.0 + std::pow(10.0, kSdrClipDb / 20.0);
  StoiScore score;
  score.bands = kBandCount;
  score.segments = segments;
  score.correlations.assign(kBandCount * segments,
                            std::numeric_limits<double>::quiet_NaN());

  double total = 0.0;
  std::size_t counted = 0;
  std::vector<double> seg_y(kSegmentFrames);
  for (std::size_t j = 0; j < kBandCount; ++j) {
    for (std::size_t s = 0; s < segments; ++s) {
      const double* seg_x = &env_x[j * active + s];
      const double* seg_y_raw = &env_y[j * active + s];
      double xx = 0.0;
      double yy = 0.0;
      for (std::size_t i = 0; i < kSegmentFrames; ++i) {
        xx += seg_x[i] * seg_x[i];
        yy += seg_y_raw[i] * seg_y_raw[i];
      }
      if (xx == 0.0) continue;  // no clean content: uninformative, skipped
      const double alpha = yy > 0.0 ? std::sqrt(xx / yy) : 0.0;
      double mean_x = 0.0;
      double mean_y = 0.0;
      for (std::size_t i = 0; i < kSegmentFrames; ++i) {
        seg_y[i] = std::min(alpha * seg_y_raw[i], seg_x[i] * clip_factor);
        mean_x += seg_x[i];
        mean_y += seg_y[i];
      }
      mean_x /= static_cast<double>(kSegmentFrames);
      mean_y /= static_cast<double>(kSegmentFrames);
      double dot = 0.0;
      double norm_x = 0.0;
      double norm_y = 0.0;
      for (std::size_t i = 0; i < kSegmentFrames; ++i) {
        const double dx = seg_x[i] - mean_x;
        const double dy = seg_y[i] - mean_y;
        dot += dx * dy;
        norm_x += dx * dx;
        norm_y += dy * dy;
      }
      double d = 0.0;
      if (norm_x > 0.0 && norm_y > 0.0) {
        d = dot / std::sqrt(norm_x * norm_y);
      }
      score.correlations[j * segments + s] = d;
      total += d;
      ++counted;
    }
  }
  if (counted == 0) {
    throw ValidationError("stoi: no scoreable band segments");
  }
  score.value = total / static_cast<double>(counted);
  return score;
}

}  // namespace loudcomp
