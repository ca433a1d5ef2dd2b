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

#include "loudcomp/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <random>

#include "loudcomp/errors.hpp"
#include "loudcomp/fft.hpp"
#include "loudcomp/spectrum.hpp"

namespace loudcomp {
namespace {

// Band indices n relative to the 1 kHz band: 50 Hz through 8 kHz.
constexpr int kFirstBand = -13;
constexpr int kLastBand = 9;
constexpr int kBandTotal = kLastBand - kFirstBand + 1;

constexpr double kNominalCenters[kBandTotal] = {
    50.0,   63.0,   80.0,   100.0,  125.0,  160.0,  200.0,  250.0,
    315.0,  400.0,  500.0,  630.0,  800.0,  1000.0, 1250.0, 1600.0,
    2000.0, 2500.0, 3150.0, 4000.0, 5000.0, 6300.0, 8000.0};

constexpr std::size_t kMaxWelchWindow = 16384;
constexpr std::size_t kMinSamples = 1024;

double exact_center(int n) { return 1000.0 * std::exp2(n / 3.0); }

// Lower edge of band n; identical expression to band n-1's upper edge, so
// adjacent bands tile exactly when boundary bins are split by overlap.
double lower_edge(int n) { return 1000.0 * std::exp2((2 * n - 1) / 6.0); }

std::vector<double> welch_of(const Waveform& signal, std::size_t& window_out) {
  if (signal.samples.size() < kMinSamples) {
    throw ValidationError("analysis: signal shorter than 1024 samples");
  }
  if (!(signal.sample_rate > 0.0)) {
    throw ValidationError("analysis: sample rate must be positive");
  }
  window_out = std::min(kMaxWelchWindow, std::bit_floor(signal.samples.size()));
  return welch_power_spectrum(signal.samples, window_out);
}

// Per-band mean-square powers from the long-term spectrum. Each bin covers
// [f_k - bin/2, f_k + bin/2); bins straddling a band edge are apportioned by
// overlap so narrow low bands are not quantized to whole bins.
std::vector<double> third_octave_band_powers(const Waveform& signal) {
  std::size_t window = 0;
  const std::vector<double> power = welch_of(signal, window);
  const double bin_hz = signal.sample_rate / static_cast<double>(window);
  std::vector<double> bands(kBandTotal, 0.0);
  for (int n = kFirstBand; n <= kLastBand; ++n) {
    const double lo_hz = lower_edge(n);
    const double hi_hz = lower_edge(n + 1);
    const std::size_t first = static_cast<std::size_t>(
        std::max(0.0, std::ceil(lo_hz / bin_hz - 0.5)));
    double sum = 0.0;
    for (std::size_t k = first; k < power.size(); ++k) {
      const double bin_lo = (static_cast<double>(k) - 0.5) * bin_hz;
      if (bin_lo >= hi_hz) break;
      const double overlap =
          std::min(hi_hz, bin_lo + bin_hz) - std::max(lo_hz, bin_lo);
      if (overlap > 0.0) sum += power[k] * (overlap / bin_hz);
    }
    bands[n - kFirstBand] = sum;
  }
  return bands;
}

ThirdOctaveSpectrum spectrum_from_powers(const std::vector<double>& bands,
                                         double full_scale_spl) {
  ThirdOctaveSpectrum spectrum;
  spectrum.center_hz.reserve(kBandTotal);
  spectrum.nominal_hz.assign(kNominalCenters, kNominalCenters + kBandTotal);
  spectrum.level_db.reserve(kBandTotal);
  for (int n = kFirstBand; n <= kLastBand; ++n) {
    spectrum.center_hz.push_back(exact_center(n));
    const double p = bands[n - kFirstBand];
    spectrum.level_db.push_back(
        p > 0.0 ? std::max(full_scale_spl + 10.0 * std::log10(p / 0.5),
                           kSilenceFloorDb)
                : kSilenceFloorDb);
  }
  return spectrum;
}

// Piecewise-linear interpolation of band values over log-frequency, flat
// outside the band centers.
double interp_band_curve(const ThirdOctaveSpectrum& shape, double frequency_hz,
                         const std::vector<double>& values) {
  const double key = std::log2(std::max(frequency_hz, 1.0));
  if (key <= std::log2(shape.center_hz.front())) return values.front();
  if (key >= std::log2(shape.center_hz.back())) return values.back();
  std::size_t hi = 1;
  while (std::log2(shape.center_hz[hi]) < key) ++hi;
  const double k0 = std::log2(shape.center_hz[hi - 1]);
  const double k1 = std::log2(shape.center_hz[hi]);
  const double t = (key - k0) / (k1 - k0);
  return values[hi - 1] + t * (values[hi] - values[hi - 1]);
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const std::size_t rank = std::min(
      n - 1, static_cast<std::size_t>(std::ceil(q * static_cast<double>(n))) -
                 (q > 0.0 ? 1 : 0));
  return values[rank];
}

}  // namespace

ThirdOctaveSpectrum third_octave_spectrum(const Waveform& signal,
                                          double full_scale_spl) {
  return spectrum_from_powers(third_octave_band_powers(signal), full_scale_spl);
}

ThirdOctaveSpectrum average_spectra(std::span<const Waveform> signals,
                                    double full_scale_spl) {
  if (signals.empty()) {
    throw ValidationError("analysis: cannot average an empty corpus");
  }
  std::vector<double> mean(kBandTotal, 0.0);
  for (const Waveform& signal : signals) {
    const std::vector<double> bands = third_octave_band_powers(signal);
    for (int b = 0; b < kBandTotal; ++b) mean[b] += bands[b];
  }
  for (double& p : mean) p /= static_cast<double>(signals.size());
  return spectrum_from_powers(mean, full_scale_spl);
}

std::string spectrum_to_csv(const ThirdOctaveSpectrum& spectrum) {
  std::string out = "band_hz,level_db\n";
  char line[64];
  for (std::size_t b = 0; b < spectrum.level_db.size(); ++b) {
    std::snprintf(line, sizeof(line), "%.10g,%.6g\n", spectrum.nominal_hz[b],
                  spectrum.level_db[b]);
    out += line;
  }
  return out;
}

double match_loudness(const Waveform& reference, const Waveform& target,
                      const EarModel& ear, double full_scale_spl) {
  ear.validate();
  const ChannelLevels ref_channels = channel_levels(reference, full_scale_spl);
  const ChannelLevels tgt_channels = channel_levels(target, full_scale_spl);
  const double wanted = total_loudness_of_channels(tgt_channels, ear);

  double lo = -40.0;
  double hi = 40.0;
  const double at_lo = total_loudness_of_channels(ref_channels, ear, lo);
  const double at_hi = total_loudness_of_channels(ref_channels, ear, hi);
  if (!(at_lo <= wanted) || !(at_hi >= wanted)) {
    throw ValidationError(
        "match loudness: no gain in [-40, 40] dB matches (degenerate input)");
  }
  while (hi - lo > 0.005) {
    const double mid = 0.5 * (lo + hi);
    if (total_loudness_of_channels(ref_channels, ear, mid) < wanted) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Waveform speech_shaped_noise(const ThirdOctaveSpectrum& shape,
                             double duration_seconds, double sample_rate,
                             double full_scale_spl, std::uint64_t seed) {
  if (!(duration_seconds > 0.0) || !(sample_rate > 0.0)) {
    throw ValidationError("noise: duration and sample rate must be positive");
  }
  if (shape.center_hz.size() < 2 ||
      shape.center_hz.size() != shape.level_db.size()) {
    throw ValidationError("noise: malformed spectrum template");
  }
  const std::size_t length =
      static_cast<std::size_t>(std::llround(duration_seconds * sample_rate));
  if (length < kMinSamples) {
    throw ValidationError("noise: duration shorter than 1024 samples");
  }
  const std::size_t nfft = std::bit_ceil(length);
  const std::size_t half = nfft / 2;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gaussian(0.0, 1.0);
  std::vector<std::complex<double>> bins(nfft);
  for (std::size_t n = 0; n < nfft; ++n) {
    bins[n] = std::complex<double>(gaussian(rng), 0.0);
  }
  fft(bins);

  // Target power density ~ band power spread over a bandwidth proportional
  // to frequency; amplitude follows as its square root.
  const auto shaping_amplitude = [&](double f) {
    if (!(f > 0.0)) return 0.0;
    const double level = interp_band_curve(shape, f, shape.level_db);
    if (level <= kSilenceFloorDb) return 0.0;
    return std::sqrt(std::pow(10.0, level / 10.0) / f);
  };
  const auto apply_gains = [&](const std::vector<double>& gain_half) {
    for (std::size_t k = 0; k <= half; ++k) {
      bins[k] *= gain_half[k];
      if (k > 0 && k < half) bins[nfft - k] = std::conj(bins[k]);
    }
  };
  const auto synthesize = [&] {
    std::vector<std::complex<double>> time = bins;
    fft(time, true);
    Waveform out;
    out.sample_rate = sample_rate;
    out.samples.resize(length);
    const double inv = 1.0 / static_cast<double>(nfft);
    for (std::size_t n = 0; n < length; ++n) {
      out.samples[n] = time[n].real() * inv;
    }
    return out;
  };

  std::vector<double> gain(half + 1);
  const double bin_hz = sample_rate / static_cast<double>(nfft);
  for (std::size_t k = 0; k <= half; ++k) {
    gain[k] = shaping_amplitude(static_cast<double>(k) * bin_hz);
  }
  apply_gains(gain);
  Waveform shaped = synthesize();

  // The interpolated correction is inexact where the template is steep, so
  // measure and re-correct until every audible band sits within 0.05 dB.
  for (int round = 0; round < 8; ++round) {
    const ThirdOctaveSpectrum measured =
        third_octave_spectrum(shaped, full_scale_spl);
    std::vector<double> correction_db(measured.level_db.size(), 0.0);
    double worst = 0.0;
    for (std::size_t b = 0; b < correction_db.size(); ++b) {
      if (shape.level_db[b] > kSilenceFloorDb &&
          measured.level_db[b] > kSilenceFloorDb) {
        correction_db[b] = shape.level_db[b] - measured.level_db[b];
        worst = std::max(worst, std::abs(correction_db[b]));
      }
    }
    if (worst < 0.05) break;
    for (std::size_t k = 0; k <= half; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      const double db =
          f > 0.0 ? interp_band_curve(shape, f, correction_db) : 0.0;
      gain[k] = std::pow(10.0, db / 20.0);
    }
    apply_gains(gain);
    shaped = synthesize();
  }
  return shaped;
}

RestorationReport restoration_report(const Waveform& original,
                                     const Waveform& processed,
                                     const EarModel& impaired_ear,
                                     double full_scale_spl) {
  impaired_ear.validate();
  if (original.samples.size() != processed.samples.size()) {
    throw ValidationError("restoration report: signals differ in length");
  }
  EarModel normal_ear = impaired_ear;
  normal_ear.audiogram.reset();

  const ChannelLevels orig = channel_levels(original, full_scale_spl);
  const ChannelLevels proc = channel_levels(processed, full_scale_spl);

  RestorationReport report;
  std::vector<double> errors;
  for (std::size_t c = 0; c < orig.center_hz.size(); ++c) {
    const FrequencyParams normal_params =
        frequency_params(normal_ear, orig.center_hz[c]);
    const FrequencyParams impaired_params =
        frequency_params(impaired_ear, orig.center_hz[c]);
    const double target = std::isinf(orig.level_db[c])
                              ? 0.0
                              : specific_loudness_unscaled(
                                    normal_ear, normal_params, orig.level_db[c]);
    if (!(target > 0.0)) continue;
    const double received =
        std::isinf(proc.level_db[c])
            ? 0.0
            : specific_loudness_unscaled(impaired_ear, impaired_params,
                                         proc.level_db[c]);
    const double error = std::abs(received - target) / target;
    report.center_cam.push_back(orig.center_cam[c]);
    report.relative_error.push_back(error);
    errors.push_back(error);
  }
  if (errors.empty()) {
    throw ValidationError("restoration report: no audible channels");
  }
  report.median_error = nearest_rank_quantile(errors, 0.5);
  report.p90_error = nearest_rank_quantile(errors, 0.9);
  return report;
}

std::string restoration_to_csv(const RestorationReport& report) {
  std::string out = "cam,err_rel\n";
  char line[64];
  for (std::size_t c = 0; c < report.center_cam.size(); ++c) {
    std::snprintf(line, sizeof(line), "%.4g,%.6g\n", report.center_cam[c],
                  report.relative_error[c]);
    out += line;
  }
  return out;
}

double wideband_spl(const Waveform& signal, double full_scale_spl) {
  if (signal.samples.empty()) {
    throw ValidationError("wideband level: empty signal");
  }
  double sum = 0.0;
  for (double s : signal.samples) sum += s * s;
  const double mean_square = sum / static_cast<double>(signal.samples.size());
  if (!(mean_square > 0.0)) return -std::numeric_limits<double>::infinity();
  return full_scale_spl + 10.0 * std::log10(mean_square / 0.5);
}

Waveform apply_gain_db(const Waveform& signal, double gain_db) {
  Waveform out = signal;
  const double factor = std::pow(10.0, gain_db / 20.0);
  for (double& s : out.samples) s *= factor;
  return out;
}

Waveform scale_to_spl(const Waveform& signal, double target_spl,
                      double full_scale_spl) {
  const double current = wideband_spl(signal, full_scale_spl);
  if (std::isinf(current)) {
    throw ValidationError("scale to level: cannot scale silence");
  }
  return apply_gain_db(signal, target_spl - current);
}

}  // namespace loudcomp
