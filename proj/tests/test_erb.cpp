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

#include <cmath>

#include "doctest.h"
#include "loudcomp/erb.hpp"
#include "loudcomp/errors.hpp"

using namespace loudcomp;

TEST_SUITE("erb") {

// Expected values were computed independently from the closed-form
// definitions and frozen here before the implementation ran.
TEST_CASE("frozen values") {
  CHECK(erb_number(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(erb_number(1000.0) ==
        doctest::Approx(15.621449713970488).epsilon(1e-12));
  CHECK(erb_bandwidth(0.0) == doctest::Approx(24.7).epsilon(1e-12));
  CHECK(erb_bandwidth(1000.0) == doctest::Approx(132.639).epsilon(1e-12));
  CHECK(erb_bandwidth(4000.0) / erb_bandwidth(1000.0) ==
        doctest::Approx(3.441340782122905).epsilon(1e-12));
}

TEST_CASE("strictly increasing") {
  double prev = erb_number(1.0);
  for (double f = 2.0; f <= 16000.0; f *= 1.02) {
    const double cur = erb_number(f);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK(erb_number(2000.0) > erb_number(1000.0));
}

TEST_CASE("round trip through the inverse") {
  for (double f = 20.0; f <= 16000.0; f *= 1.1) {
    CHECK(erb_to_frequency(erb_number(f)) == doctest::Approx(f).epsilon(1e-9));
  }
  CHECK(erb_to_frequency(0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("negative frequency rejected") {
  CHECK_THROWS_AS(erb_number(-1.0), ValidationError);
  CHECK_THROWS_AS(erb_bandwidth(-0.5), ValidationError);
}

}  // TEST_SUITE
