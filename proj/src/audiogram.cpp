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

#include "loudcomp/audiogram.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "loudcomp/crc32.hpp"
#include "loudcomp/erb.hpp"
#include "loudcomp/errors.hpp"

namespace loudcomp {
namespace {

constexpr double kMinFrequencyHz = 125.0;
constexpr double kMaxFrequencyHz = 16000.0;
constexpr double kMaxHlDb = 120.0;

std::vector<double> require_number_array(const nlohmann::json& doc,
                                         const char* field) {
  if (!doc.contains(field)) {
    throw ValidationError(std::string("audiogram: missing field '") + field +
                          "'");
  }
  const auto& node = doc.at(field);
  if (!node.is_array()) {
    throw ValidationError(std::string("audiogram: '") + field +
                          "' must be an array of numbers");
  }
  std::vector<double> values;
  values.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) {
      throw ValidationError(std::string("audiogram: '") + field + "[" +
                            std::to_string(i) + "]' must be a number");
    }
    values.push_back(node[i].get<double>());
  }
  return values;
}

}  // namespace

Audiogram::Audiogram(std::vector<double> frequencies_hz,
                     std::vector<double> hl_db, double ohc_fraction)
    : frequencies_hz_(std::move(frequencies_hz)),
      hl_db_(std::move(hl_db)),
      ohc_fraction_(ohc_fraction) {
  if (frequencies_hz_.size() < 2) {
    throw ValidationError(
        "audiogram: 'frequencies_hz' needs at least 2 points");
  }
  if (hl_db_.size() != frequencies_hz_.size()) {
    throw ValidationError(
        "audiogram: 'hl_db' must have the same length as 'frequencies_hz'");
  }
  for (std::size_t i = 0; i < frequencies_hz_.size(); ++i) {
    const double f = frequencies_hz_[i];
    if (f < kMinFrequencyHz || f > kMaxFrequencyHz) {
      throw ValidationError("audiogram: 'frequencies_hz[" + std::to_string(i) +
                            "]' must be within [125, 16000] Hz");
    }
    if (i > 0 && f <= frequencies_hz_[i - 1]) {
      throw ValidationError("audiogram: 'frequencies_hz[" + std::to_string(i) +
                            "]' must be strictly increasing");
    }
    const double hl = hl_db_[i];
    if (hl < 0.0 || hl > kMaxHlDb) {
      throw ValidationError("audiogram: 'hl_db[" + std::to_string(i) +
                            "]' must be within [0, 120] dB");
    }
  }
  if (ohc_fraction_ < 0.0 || ohc_fraction_ > 1.0) {
    throw ValidationError("audiogram: 'ohc_fraction' must be within [0, 1]");
  }
  knot_cam_.reserve(frequencies_hz_.size());
  for (double f : frequencies_hz_) knot_cam_.push_back(erb_number(f));
}

Audiogram Audiogram::parse(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("audiogram: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("audiogram: top level must be a JSON object");
  }
  std::vector<double> freqs = require_number_array(doc, "frequencies_hz");
  std::vector<double> losses = require_number_array(doc, "hl_db");
  double ohc = 0.9;
  if (doc.contains("ohc_fraction")) {
    if (!doc.at("ohc_fraction").is_number()) {
      throw ValidationError("audiogram: 'ohc_fraction' must be a number");
    }
    ohc = doc.at("ohc_fraction").get<double>();
  }
  return Audiogram(std::move(freqs), std::move(losses), ohc);
}

Audiogram Audiogram::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("audiogram: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

double Audiogram::hl_at(double frequency_hz) const {
  if (frequency_hz <= 0.0) {
    throw ValidationError("audiogram: frequency must be positive");
  }
  const double cam = erb_number(frequency_hz);
  if (cam <= knot_cam_.front()) return hl_db_.front();
  if (cam >= knot_cam_.back()) return hl_db_.back();
  std::size_t hi = 1;
  while (knot_cam_[hi] < cam) ++hi;
  const double span = knot_cam_[hi] - knot_cam_[hi - 1];
  const double t = (cam - knot_cam_[hi - 1]) / span;
  return hl_db_[hi - 1] + t * (hl_db_[hi] - hl_db_[hi - 1]);
}

std::pair<double, double> Audiogram::split_hl(double frequency_hz) const {
  const double total = hl_at(frequency_hz);
  const double ohc_part = ohc_fraction_ * total;
  return {ohc_part, total - ohc_part};
}

bool Audiogram::is_zero_loss() const {
  for (double hl : hl_db_) {
    if (hl != 0.0) return false;
  }
  return true;
}

std::string Audiogram::to_json() const {
  // Canonical form: fixed field order, %.17g numbers, no whitespace variance.
  auto format_number = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::string out = "{\"frequencies_hz\":[";
  for (std::size_t i = 0; i < frequencies_hz_.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(frequencies_hz_[i]);
  }
  out += "],\"hl_db\":[";
  for (std::size_t i = 0; i < hl_db_.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(hl_db_[i]);
  }
  out += "],\"ohc_fraction\":" + format_number(ohc_fraction_) + "}";
  return out;
}

std::uint32_t Audiogram::digest() const {
  const std::string canonical = to_json();
  return crc32(canonical.data(), canonical.size());
}

bool Audiogram::operator==(const Audiogram& other) const {
  return frequencies_hz_ == other.frequencies_hz_ && hl_db_ == other.hl_db_ &&
         ohc_fraction_ == other.ohc_fraction_;
}

}  // namespace loudcomp
