// Copyright 2026 The uavqa Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "test_support.hpp"
#include "uavqa/dsp.hpp"
#include "uavqa/error.hpp"

using namespace uavqa;
using uavqa::testing::Random;

TEST_SUITE("dsp") {

TEST_CASE("rfft agrees with a direct DFT for odd, even and prime lengths") {
  Random rng(1);
  for (std::size_t n : {1, 2, 7, 64, 100, 257, 1102}) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    const auto fast = dsp::rfft(x);
    const auto slow = oracle::dft(x);
    REQUIRE(fast.size() == n / 2 + 1);
    double worst = 0;
    for (std::size_t k = 0; k < fast.size(); ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]));
    CHECK(worst < 1e-9 * std::sqrt(static_cast<double>(n)));
  }
  CHECK(dsp::rfft(std::vector<double>{}).empty());
}

TEST_CASE("magnitude and power spectra are |X| and |X|^2") {
  Random rng(2);
  std::vector<double> x(50);
  for (double& v : x) v = rng.uniform(-1, 1);
  const auto slow = oracle::dft(x);
  const auto mag = dsp::magnitude_spectrum(x);
  const auto pw = dsp::power_spectrum(x);
  for (std::size_t k = 0; k < slow.size(); ++k) {
    CHECK(mag[k] == doctest::Approx(std::abs(slow[k])).epsilon(1e-10));
    CHECK(pw[k] == doctest::Approx(std::norm(slow[k])).epsilon(1e-10));
  }
}

TEST_CASE("hann window is periodic") {
  const auto w = dsp::hann(8);
  const auto ref = oracle::periodic_hann(8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(w[i] == doctest::Approx(ref[i]));
  CHECK(w[0] == 0.0);
  CHECK(w[4] == doctest::Approx(1.0));
}

TEST_CASE("frame layout counts whole frames only") {
  CHECK(dsp::frame_layout(128000, 800, 400).count == 319);
  CHECK(dsp::frame_layout(1000, 100, 100).count == 10);
  CHECK(dsp::frame_layout(1099, 100, 100).count == 10);
  CHECK(dsp::frame_layout(100, 100, 7).count == 1);
  CHECK_THROWS_AS(dsp::frame_layout(99, 100, 10), Error);
  CHECK_THROWS_AS(dsp::frame_layout(99, 0, 10), Error);
}

TEST_CASE("population statistics") {
  const std::vector<double> x = {2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(dsp::mean(x) == 5.0);
  CHECK(dsp::population_std(x) == 2.0);
}

TEST_CASE("gaussian blur preserves constants and mass, and zero sigma is identity") {
  Random rng(4);
  const auto flat = testing::constant_gray(20, 15, 77.0);
  for (double v : dsp::gaussian_blur(flat, 1.7).data) CHECK(v == doctest::Approx(77.0));
  const auto img = testing::noise_gray(20, 15, rng, 100, 30);
  CHECK(dsp::gaussian_blur(img, 0.0).data == img.data);
  const auto k = dsp::gaussian_kernel(5, 1.3);
  double s = 0;
  for (double v : k) s += v;
  CHECK(s == doctest::Approx(1.0));
  CHECK(k[5] > k[4]);
  CHECK(k[4] == doctest::Approx(k[6]));
}

TEST_CASE("gaussian blur lowers the variance of noise") {
  Random rng(6);
  const auto img = testing::noise_gray(64, 64, rng, 128, 20);
  const double before = dsp::population_std(img.data);
  const double after = dsp::population_std(dsp::gaussian_blur(img, 2.0).data);
  CHECK(after < 0.3 * before);
}

}  // TEST_SUITE
