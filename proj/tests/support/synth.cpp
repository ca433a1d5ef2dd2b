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

#include "support/synth.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <vector>

namespace loudcomp::testing {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two-pole resonator y[n] = x[n] + 2 r cos(w) y[n-1] - r^2 y[n-2].
struct Resonator {
  double b0, a1, a2;
  double y1 = 0.0, y2 = 0.0;

  Resonator(double center_hz, double bandwidth_hz, double fs) {
    const double r = std::exp(-std::numbers::pi * bandwidth_hz / fs);
    a1 = 2.0 * r * std::cos(kTwoPi * center_hz / fs);
    a2 = -r * r;
    b0 = (1.0 - r) * std::sqrt(1.0 - a1 + r * r);
  }

  double step(double x) {
    const double y = b0 * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

void normalize_rms(std::vector<double>& x, double target_rms) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  const double rms = std::sqrt(sum / static_cast<double>(x.size()));
  if (rms <= 0.0) return;
  const double k = target_rms / rms;
  for (double& v : x) v *= k;
}

}  // namespace

Waveform synth_speech(std::uint64_t seed, double duration_seconds,
                      double sample_rate) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::size_t n =
      static_cast<std::size_t>(std::llround(duration_seconds * sample_rate));

  const double f0_base = 95.0 + 45.0 * uni(rng);
  const double f0_depth = 0.06 + 0.06 * uni(rng);
  const double f0_rate = 3.5 + 2.0 * uni(rng);
  const double syllable_rate = 3.0 + 1.5 * uni(rng);
  const double syllable_phase = uni(rng) * kTwoPi;

  // Glottal-like pulse train with drifting F0 and mild shimmer.
  std::vector<double> source(n, 0.0);
  double phase = uni(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double f0 = f0_base * (1.0 + f0_depth * std::sin(kTwoPi * f0_rate * t));
    phase += f0 / sample_rate;
    if (phase >= 1.0) {
      phase -= 1.0;
      source[i] = 1.0 + 0.3 * (uni(rng) - 0.5);
    }
  }

  Resonator formant1(500.0, 90.0, sample_rate);
  Resonator formant2(1500.0, 160.0, sample_rate);
  Resonator formant3(2700.0, 320.0, sample_rate);
  // Broad obstruent resonance for the fricative band.
  Resonator sibilance(4500.0, 2800.0, sample_rate);

  // Two glottal poles give the source a -12 dB/oct harmonic rolloff; lip
  // radiation differentiates it back up, leaving the familiar long-term
  // speech slope that peaks near 300-500 Hz and falls above.
  const double pole = std::exp(-kTwoPi * 170.0 / sample_rate);

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(n, 0.0);
  double lp1 = 0.0, lp2 = 0.0, lp2_prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    // Syllabic envelope in [0.08, 1]; dips mark syllable boundaries.
    const double syl =
        0.5 - 0.5 * std::cos(kTwoPi * syllable_rate * t + syllable_phase);
    const double env = 0.08 + 0.92 * std::pow(syl, 1.4);

    lp1 += (1.0 - pole) * (source[i] - lp1);
    lp2 += (1.0 - pole) * (lp1 - lp2);
    const double excitation = lp2 - lp2_prev;
    lp2_prev = lp2;

    const double voiced = 8.0 * excitation + formant1.step(excitation) +
                          0.63 * formant2.step(excitation) +
                          0.4 * formant3.step(excitation);

    // Fricative-like bursts fill the gaps between syllables.
    const double hiss = sibilance.step(gauss(rng));
    const double fric = hiss * (1.0 - syl) * (1.0 - syl) * 0.002;

    out[i] = voiced * env + fric;
  }

  normalize_rms(out, 0.224);  // about -13 dBFS
  Waveform wave;
  wave.samples = std::move(out);
  wave.sample_rate = sample_rate;
  return wave;
}

Waveform synth_sine(double frequency_hz, double duration_seconds,
                    double sample_rate, double amplitude) {
  const std::size_t n =
      static_cast<std::size_t>(std::llround(duration_seconds * sample_rate));
  Waveform wave;
  wave.sample_rate = sample_rate;
  wave.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    wave.samples[i] =
        amplitude * std::sin(kTwoPi * frequency_hz * static_cast<double>(i) /
                             sample_rate);
  }
  return wave;
}

Waveform synth_white(std::uint64_t seed, double duration_seconds,
                     double sample_rate, double rms) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n =
      static_cast<std::size_t>(std::llround(duration_seconds * sample_rate));
  std::vector<double> x(n);
  for (double& v : x) v = gauss(rng);
  normalize_rms(x, rms);
  Waveform wave;
  wave.samples = std::move(x);
  wave.sample_rate = sample_rate;
  return wave;
}

std::string fixture_audiogram_path(const std::string& name) {
  return std::string(LOUDCOMP_DATA_DIR) + "/audiograms/" + name + ".json";
}

std::string make_scratch_dir(const std::string& tag) {
  namespace fs = std::filesystem;
  static std::uint64_t counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("loudcomp_test_" + tag + "_" +
                        std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace loudcomp::testing
