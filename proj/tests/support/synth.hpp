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

#ifndef LOUDCOMP_TESTS_SUPPORT_SYNTH_HPP
#define LOUDCOMP_TESTS_SUPPORT_SYNTH_HPP

#include <cstdint>
#include <string>

#include "loudcomp/waveform.hpp"

namespace loudcomp::testing {

// Deterministic speech-like clip: drifting F0 pulse train through formant
// resonators, syllabic amplitude modulation, fricative noise bursts between
// syllables, and a low-frequency component so every third-octave band from
// 50 Hz up carries energy. RMS is normalized to -13 dBFS.
Waveform synth_speech(std::uint64_t seed, double duration_seconds,
                      double sample_rate = 22050.0);

Waveform synth_sine(double frequency_hz, double duration_seconds,
                    double sample_rate, double amplitude);

// White noise with the requested RMS.
Waveform synth_white(std::uint64_t seed, double duration_seconds,
                     double sample_rate, double rms);

// Fixture audiogram JSON paths (from the repository data directory).
std::string fixture_audiogram_path(const std::string& name);

// Unique scratch directory under the system temp dir, created on call.
std::string make_scratch_dir(const std::string& tag);

}  // namespace loudcomp::testing

#endif  // LOUDCOMP_TESTS_SUPPORT_SYNTH_HPP
