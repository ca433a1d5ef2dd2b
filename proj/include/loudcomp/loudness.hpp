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

#ifndef LOUDCOMP_LOUDNESS_HPP
#define LOUDCOMP_LOUDNESS_HPP

#include <optional>

#include "loudcomp/audiogram.hpp"
#include "loudcomp/threshold_table.hpp"
#include "loudcomp/waveform.hpp"

namespace loudcomp {

// Loudness model of one ear. An absent audiogram (or an all-zero one) is
// exactly the normal-hearing case. Immutable once constructed; all
// operations on it are pure functions, safe for parallel use.
struct EarModel {
  std::optional<Audiogram> audiogram;
  ThresholdTable thresholds = ThresholdTable::builtin();
  double alpha = 0.2;                  // compression exponent, in (0, 1)
  double passive_denominator = 1.04e6; // > 0
  double scale_c = 1.0;                // overall loudness scale, > 0

  static EarModel normal_hearing();
  static EarModel impaired(Audiogram audiogram);

  // Throws ValidationError if alpha, passive_denominator, or scale_c is out
  // of range.
  void validate() const;

  // True when both ears produce the identical specific-loudness function,
  // so equal-loudness searches can return the input level unchanged.
  bool same_loudness_function(const EarModel& other) const;
};

// Per-frequency constants of the loudness model, precomputed once per
// frequency so level sweeps and equal-loudness searches stay cheap.
struct FrequencyParams {
  double t_q = 0.0;    // normal threshold of quiet, dB SPL
  double e_tq = 0.0;   // 10^(t_q/10)
  double g = 1.0;      // cochlear amplifier gain relative to 1 kHz, <= 1
  double a = 0.0;      // 2 * g * e_tq
  double hl = 0.0;     // total hearing loss, dB
  double hl_ihc = 0.0; // inner-hair-cell portion of the loss, dB
  double t_elev = 0.0; // elevated threshold t_q + hl, dB SPL
  double join = 0.0;   // upper end of the recruitment region, dB SPL
  double slope = 1.0;  // recruitment slope, 1 + hl_ohc / 25
};

FrequencyParams frequency_params(const EarModel& ear, double frequency_hz);

// Maps a level presented to this ear to the normal-ear level producing the
// same specific loudness: identity for zero loss; below `join` a line of
// slope `slope` anchored at (t_elev -> t_q); above `join` a pure hl_ihc
// offset. Continuous and strictly increasing.
double warp_level(const FrequencyParams& params, double level_db);

// Closed-form inverse of warp_level (used as an independent test oracle for
// the iterative equal-loudness search).
double warp_inverse_level(const FrequencyParams& params, double warped_db);

// Specific loudness divided by scale_c. All comparisons between ears happen
// in these units, which is what makes gains independent of the scale.
double specific_loudness_unscaled(const EarModel& ear,
                                  const FrequencyParams& params,
                                  double level_db);

// Specific loudness of a uniformly exciting noise at the given
// auditory-filter level, in sone per Cam. Strictly increasing in level;
// an impaired ear never exceeds the normal ear at the same level.
// Requires level in [-30, 140] dB SPL and frequency > 0.
double specific_loudness(double level_db, double frequency_hz,
                         const EarModel& ear);

// Long-term auditory-filter levels on the 0.25 Cam channel grid, from the
// Welch power spectrum. Channels with exactly zero band power carry
// -infinity so downstream code can treat them as exact silence.
struct ChannelLevels {
  std::vector<double> center_cam;
  std::vector<double> center_hz;
  std::vector<double> level_db;
};
ChannelLevels channel_levels(const Waveform& signal, double full_scale_spl);

// Loudness of the channel levels, optionally with a broadband gain applied,
// in sone: sum of per-channel specific loudness * 0.25 Cam. Silent channels
// contribute exactly zero.
double total_loudness_of_channels(const ChannelLevels& channels,
                                  const EarModel& ear, double gain_db = 0.0);

// Long-term loudness: Welch power spectrum -> auditory-filter levels on a
// 0.25 Cam grid -> specific loudness -> sum * 0.25. Channels with exactly
// zero band power contribute exactly zero, so silence maps to 0 sone.
// Requires at least 1024 samples.
double total_loudness(const Waveform& signal, double full_scale_spl,
                      const EarModel& ear);

}  // namespace loudcomp

#endif  // LOUDCOMP_LOUDNESS_HPP
