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

#ifndef LOUDCOMP_ANALYSIS_HPP
#define LOUDCOMP_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "loudcomp/loudness.hpp"
#include "loudcomp/waveform.hpp"

namespace loudcomp {

// Standard one-third-octave bands from the 50 Hz to the 8 kHz band
// (23 bands). Band n has exact center 1000*2^(n/3); edges at center*2^(±1/6)
// tile the axis exactly, so the bands partition the in-range spectrum.
struct ThirdOctaveSpectrum {
  std::vector<double> center_hz;   // exact base-two centers
  std::vector<double> nominal_hz;  // conventional labels (50, 63, ..., 8000)
  std::vector<double> level_db;    // silent bands report -200 dB
};

// Long-term third-octave band levels from the Welch power spectrum.
// Requires at least 1024 samples.
ThirdOctaveSpectrum third_octave_spectrum(const Waveform& signal,
                                          double full_scale_spl);

// Power-mean of the per-file band powers, in dB. Requires a non-empty set.
ThirdOctaveSpectrum average_spectra(std::span<const Waveform> signals,
                                    double full_scale_spl);

std::string spectrum_to_csv(const ThirdOctaveSpectrum& spectrum);

// Broadband gain (dB) to apply to `reference` so its loudness for `ear`
// matches `target`, solved by bisection on [-40, 40] dB. Throws when the
// root is not bracketed (degenerate silence).
double match_loudness(const Waveform& reference, const Waveform& target,
                      const EarModel& ear, double full_scale_spl);

// Steady noise whose third-octave spectrum matches `shape` (absolute levels
// under the same calibration) within about 1 dB per band for durations of
// 10 s or more: seeded white noise, spectrally shaped, then corrected once
// against its own measured spectrum.
Waveform speech_shaped_noise(const ThirdOctaveSpectrum& shape,
                             double duration_seconds, double sample_rate,
                             double full_scale_spl, std::uint64_t seed);

// Per-channel comparison of the loudness an impaired ear receives from the
// processed signal against what a normal ear receives from the original,
// on the 0.25 Cam grid. Channels where the normal-ear loudness is exactly
// zero are omitted.
struct RestorationReport {
  std::vector<double> center_cam;
  std::vector<double> relative_error;
  double median_error = 0.0;
  double p90_error = 0.0;
};
RestorationReport restoration_report(const Waveform& original,
                                     const Waveform& processed,
                                     const EarModel& impaired_ear,
                                     double full_scale_spl);

std::string restoration_to_csv(const RestorationReport& report);

// Level of the signal as a whole: full_scale_spl + 10*log10(mean(x^2)/0.5).
// Silence returns -infinity.
double wideband_spl(const Waveform& signal, double full_scale_spl);

Waveform apply_gain_db(const Waveform& signal, double gain_db);

// Scales the signal so wideband_spl hits target_spl. Rejects silence.
Waveform scale_to_spl(const Waveform& signal, double target_spl,
                      double full_scale_spl);

}  // namespace loudcomp

#endif  // LOUDCOMP_ANALYSIS_HPP
