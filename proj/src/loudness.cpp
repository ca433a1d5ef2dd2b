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

#include "loudcomp/loudness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "loudcomp/erb.hpp"
#include "loudcomp/errors.hpp"
#include "loudcomp/spectrum.hpp"

namespace loudcomp {
namespace {

// Width of the recruitment region above the elevated threshold: by `join`
// the compressive OHC loss has been fully caught up and only the linear IHC
// attenuation remains.
constexpr double kRecruitmentRangeDb = 25.0;

constexpr double kMinLevelDb = -30.0;
constexpr double kMaxLevelDb = 140.0;

constexpr double kChannelSpacingCam = 0.25;
constexpr std::size_t kMaxWelchWindow = 16384;
constexpr std::size_t kMinSignalSamples = 1024;

bool effectively_normal(const EarModel& ear) {
  return !ear.audiogram.has_value() || ear.audiogram->is_zero_loss();
}

}  // namespace

EarModel EarModel::normal_hearing() { return EarModel{}; }

EarModel EarModel::impaired(Audiogram audiogram) {
  EarModel ear;
  ear.audiogram = std::move(audiogram);
  return ear;
}

void EarModel::validate() const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ValidationError("ear model: alpha must be within (0, 1)");
  }
  if (!(passive_denominator > 0.0)) {
    throw ValidationError("ear model: passive_denominator must be positive");
  }
  if (!(scale_c > 0.0)) {
    throw ValidationError("ear model: scale_c must be positive");
  }
}

bool EarModel::same_loudness_function(const EarModel& other) const {
  if (alpha != other.alpha || passive_denominator != other.passive_denominator ||
      scale_c != other.scale_c || !(thresholds == other.thresholds)) {
    return false;
  }
  const bool normal_a = effectively_normal(*this);
  const bool normal_b = effectively_normal(other);
  if (normal_a || normal_b) return normal_a && normal_b;
  return *audiogram == *other.audiogram;
}

FrequencyParams frequency_params(const EarModel& ear, double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw ValidationError("loudness model: frequency must be positive");
  }
  FrequencyParams p;
  p.t_q = ear.thresholds.threshold_quiet(frequency_hz);
  const double t_q_ref = ear.thresholds.threshold_quiet(1000.0);
  p.g = std::min(1.0, std::pow(10.0, (t_q_ref - p.t_q) / 10.0));
  p.e_tq = std::pow(10.0, p.t_q / 10.0);
  p.a = 2.0 * p.g * p.e_tq;
  if (ear.audiogram.has_value()) {
    const auto [hl_ohc, hl_ihc] = ear.audiogram->split_hl(frequency_hz);
    p.hl = hl_ohc + hl_ihc;
    p.hl_ihc = hl_ihc;
    p.slope = 1.0 + hl_ohc / kRecruitmentRangeDb;
  }
  p.t_elev = p.t_q + p.hl;
  p.join = p.t_elev + kRecruitmentRangeDb;
  return p;
}

double warp_level(const FrequencyParams& params, double level_db) {
  if (params.hl == 0.0) return level_db;
  if (level_db > params.join) return level_db - params.hl_ihc;
  return params.t_q + params.slope * (level_db - params.t_elev);
}

double warp_inverse_level(const FrequencyParams& params, double warped_db) {
  if (params.hl == 0.0) return warped_db;
  if (warped_db > params.join - params.hl_ihc) return warped_db + params.hl_ihc;
  return params.t_elev + (warped_db - params.t_q) / params.slope;
}

double specific_loudness_unscaled(const EarModel& ear,
                                  const FrequencyParams& params,
                                  double level_db) {
  const double u = warp_level(params, level_db);
  const double e = std::pow(10.0, u / 10.0);
  double compressive =
      std::pow(params.g * e + params.a, ear.alpha) - std::pow(params.a, ear.alpha);
  if (e < params.e_tq) {
    compressive *= std::pow(2.0 * e / (e + params.e_tq), 1.5);
  }
  const double passive = std::sqrt(e / ear.passive_denominator);
  return std::max(compressive, passive);
}

double specific_loudness(double level_db, double frequency_hz,
                         const EarModel& ear) {
  ear.validate();
  if (!(level_db >= kMinLevelDb) || !(level_db <= kMaxLevelDb)) {
    throw ValidationError("loudness model: level must be within [-30, 140] dB");
  }
  const FrequencyParams params = frequency_params(ear, frequency_hz);
  return ear.scale_c * specific_loudness_unscaled(ear, params, level_db);
}

ChannelLevels channel_levels(const Waveform& signal, double full_scale_spl) {
  if (!(signal.sample_rate > 0.0)) {
    throw ValidationError("loudness model: sample rate must be positive");
  }
  if (signal.samples.size() < kMinSignalSamples) {
    throw ValidationError("loudness model: signal shorter than 1024 samples");
  }
  const std::size_t window =
      std::min(kMaxWelchWindow, std::bit_floor(signal.samples.size()));
  const std::vector<double> power = welch_power_spectrum(signal.samples, window);
  const double bin_hz = signal.sample_rate / static_cast<double>(window);

  const double cam_lo =
      std::ceil(erb_number(50.0) / kChannelSpacingCam) * kChannelSpacingCam;
  const double cam_hi = std::floor(erb_number(signal.sample_rate / 2.0) /
                                   kChannelSpacingCam) *
                        kChannelSpacingCam;
  ChannelLevels channels;
  for (double cam = cam_lo; cam <= cam_hi + 1e-9; cam += kChannelSpacingCam) {
    const double center_hz = erb_to_frequency(cam);
    const double band = erb_band_power(power, bin_hz, center_hz);
    channels.center_cam.push_back(cam);
    channels.center_hz.push_back(center_hz);
    channels.level_db.push_back(
        band > 0.0 ? full_scale_spl + 10.0 * std::log10(band / 0.5)
                   : -std::numeric_limits<double>::infinity());
  }
  return channels;
}

double total_loudness_of_channels(const ChannelLevels& channels,
                                  const EarModel& ear, double gain_db) {
  ear.validate();
  double sum = 0.0;
  for (std::size_t c = 0; c < channels.center_hz.size(); ++c) {
    if (std::isinf(channels.level_db[c])) continue;  // exact silence
    const FrequencyParams params = frequency_params(ear, channels.center_hz[c]);
    sum += specific_loudness_unscaled(ear, params,
                                      channels.level_db[c] + gain_db);
  }
  return ear.scale_c * kChannelSpacingCam * sum;
}

double total_loudness(const Waveform& signal, double full_scale_spl,
                      const EarModel& ear) {
  ear.validate();
  return total_loudness_of_channels(channel_levels(signal, full_scale_spl),
                                    ear);
}

}  // namespace loudcomp
