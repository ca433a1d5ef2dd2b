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

#ifndef LOUDCOMP_THRESHOLD_TABLE_HPP
#define LOUDCOMP_THRESHOLD_TABLE_HPP

#include <string>
#include <vector>

namespace loudcomp {

// Free-field threshold of hearing for the median normal ear, as a function
// of frequency. Knots are interpolated linearly on the ERB-number axis and
// extended flat outside the tabulated range.
class ThresholdTable {
 public:
  // The compiled-in default table (same values as data/free_field_thresholds.txt).
  static const ThresholdTable& builtin();

  // Loads "frequency_hz threshold_db" pairs from a plain text file.
  // '#' starts a comment; blank lines are ignored. Frequencies must be
  // positive and strictly increasing.
  static ThresholdTable load(const std::string& path);

  ThresholdTable(std::vector<double> frequencies_hz,
                 std::vector<double> threshold_db);

  // Threshold in dB SPL at any frequency > 0.
  double threshold_quiet(double frequency_hz) const;

  const std::vector<double>& frequencies_hz() const { return frequencies_hz_; }
  const std::vector<double>& threshold_db() const { return threshold_db_; }

  bool operator==(const ThresholdTable& other) const;

 private:
  std::vector<double> frequencies_hz_;
  std::vector<double> threshold_db_;
  std::vector<double> knot_cam_;
};

// Convenience: builtin().threshold_quiet(frequency_hz).
double threshold_quiet(double frequency_hz);

}  // namespace loudcomp

#endif  // LOUDCOMP_THRESHOLD_TABLE_HPP
