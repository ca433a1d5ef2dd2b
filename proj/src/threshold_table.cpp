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

#include "loudcomp/threshold_table.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "loudcomp/erb.hpp"
#include "loudcomp/errors.hpp"

namespace loudcomp {

ThresholdTable::ThresholdTable(std::vector<double> frequencies_hz,
                               std::vector<double> threshold_db)
    : frequencies_hz_(std::move(frequencies_hz)),
      threshold_db_(std::move(threshold_db)) {
  if (frequencies_hz_.size() < 2) {
    throw ValidationError("threshold table: needs at least 2 points");
  }
  if (threshold_db_.size() != frequencies_hz_.size()) {
    throw ValidationError(
        "threshold table: frequency and threshold counts differ");
  }
  for (std::size_t i = 0; i < frequencies_hz_.size(); ++i) {
    if (frequencies_hz_[i] <= 0.0) {
      throw ValidationError("threshold table: frequencies must be positive");
    }
    if (i > 0 && frequencies_hz_[i] <= frequencies_hz_[i - 1]) {
      throw ValidationError(
          "threshold table: frequencies must be strictly increasing");
    }
  }
  knot_cam_.reserve(frequencies_hz_.size());
  for (double f : frequencies_hz_) knot_cam_.push_back(erb_number(f));
}

const ThresholdTable& ThresholdTable::builtin() {
  static const ThresholdTable table(
      {20.0,   25.0,   31.5,   40.0,   50.0,   63.0,    80.0,   100.0,
       125.0,  160.0,  200.0,  250.0,  315.0,  400.0,   500.0,  630.0,
       800.0,  1000.0, 1250.0, 1600.0, 2000.0, 2500.0,  3150.0, 4000.0,
       5000.0, 6300.0, 8000.0, 10000.0, 12500.0},
      {74.3, 65.0, 56.3, 48.4, 41.7, 35.5, 29.8, 25.1, 20.7, 16.8,
       13.8, 11.2, 8.9,  7.2,  6.0,  5.0,  4.4,  4.2,  3.7,  2.6,
       1.0,  -1.2, -3.6, -3.9, -1.1, 4.3,  11.1, 15.3, 16.4});
  return table;
}

ThresholdTable ThresholdTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("threshold table: cannot open '" + path + "'");
  std::vector<double> freqs;
  std::vector<double> thresholds;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double f = 0.0;
    double t = 0.0;
    if (!(fields >> f)) continue;  // blank or comment-only line
    if (!(fields >> t)) {
      throw ValidationError("threshold table: '" + path + "' line " +
                            std::to_string(line_number) +
                            ": expected 'frequency threshold'");
    }
    std::string extra;
    if (fields >> extra) {
      throw ValidationError("threshold table: '" + path + "' line " +
                            std::to_string(line_number) +
                            ": trailing tokens after threshold");
    }
    freqs.push_back(f);
    thresholds.push_back(t);
  }
  return ThresholdTable(std::move(freqs), std::move(thresholds));
}

double ThresholdTable::threshold_quiet(double frequency_hz) const {
  if (frequency_hz <= 0.0) {
    throw ValidationError("threshold table: frequency must be positive");
  }
  const double cam = erb_number(frequency_hz);
  if (cam <= knot_cam_.front()) return threshold_db_.front();
  if (cam >= knot_cam_.back()) return threshold_db_.back();
  std::size_t hi = 1;
  while (knot_cam_[hi] < cam) ++hi;
  const double span = knot_cam_[hi] - knot_cam_[hi - 1];
  const double t = (cam - knot_cam_[hi - 1]) / span;
  return threshold_db_[hi - 1] + t * (threshold_db_[hi] - threshold_db_[hi - 1]);
}

bool ThresholdTable::operator==(const ThresholdTable& other) const {
  return frequencies_hz_ == other.frequencies_hz_ &&
         threshold_db_ == other.threshold_db_;
}

double threshold_quiet(double frequency_hz) {
  return ThresholdTable::builtin().threshold_quiet(frequency_hz);
}

}  // namespace loudcomp
