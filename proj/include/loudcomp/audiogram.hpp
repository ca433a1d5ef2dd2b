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

#ifndef LOUDCOMP_AUDIOGRAM_HPP
#define LOUDCOMP_AUDIOGRAM_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace loudcomp {

// Pure-tone audiogram: hearing level in dB HL at a set of audiometric
// frequencies, plus the fraction of the loss attributed to outer hair cells.
//
// Between knots HL is interpolated linearly on the ERB-number axis; outside
// the knot range it extends flat. The default OHC fraction of 0.9 encodes the
// usual 90% outer / 10% inner hair cell attribution.
class Audiogram {
 public:
  // Throws ValidationError unless: >= 2 points, frequencies strictly
  // increasing and within [125, 16000] Hz, losses within [0, 120] dB,
  // ohc_fraction within [0, 1].
  Audiogram(std::vector<double> frequencies_hz, std::vector<double> hl_db,
            double ohc_fraction = 0.9);

  // Parses {"frequencies_hz": [...], "hl_db": [...], "ohc_fraction": 0.9}.
  // Error messages name the offending field.
  static Audiogram parse(const std::string& json_text);
  static Audiogram load(const std::string& path);

  // HL at any frequency > 0 (flat extrapolation outside the knot range).
  double hl_at(double frequency_hz) const;

  // Splits hl_at(f) into (hl_ohc, hl_ihc); the parts always sum to the total
  // exactly because the IHC part is computed as the remainder.
  std::pair<double, double> split_hl(double frequency_hz) const;

  bool is_zero_loss() const;

  const std::vector<double>& frequencies_hz() const { return frequencies_hz_; }
  const std::vector<double>& hl_db() const { return hl_db_; }
  double ohc_fraction() const { return ohc_fraction_; }

  std::string to_json() const;
  // CRC32 of the canonical JSON serialization; used in manifests and cache keys.
  std::uint32_t digest() const;

  bool operator==(const Audiogram& other) const;

 private:
  std::vector<double> frequencies_hz_;
  std::vector<double> hl_db_;
  std::vector<double> knot_cam_;  // erb_number of each knot frequency
  double ohc_fraction_ = 0.9;
};

}  // namespace loudcomp

#endif  // LOUDCOMP_AUDIOGRAM_HPP
