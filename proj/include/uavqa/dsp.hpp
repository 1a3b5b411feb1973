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

// Shared numeric helpers: moments, windows, short-time framing, real FFT
// and separable image filters.

#ifndef UAVQA_DSP_HPP_
#define UAVQA_DSP_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "uavqa/media.hpp"

namespace uavqa::dsp {

double mean(std::span<const double> x);
// Population (divide by n) standard deviation.
double population_std(std::span<const double> x);

// Periodic Hann window of length n.
std::vector<double> hann(std::size_t n);

struct FrameLayout {
  std::size_t length = 0;
  std::size_t hop = 0;
  std::size_t count = 0;

  std::size_t offset(std::size_t j) const { return j * hop; }
};

// floor((n - length) / hop) + 1 full frames; a trailing partial frame is
// dropped. Throws if length > n or length/hop are zero.
FrameLayout frame_layout(std::size_t n_samples, std::size_t length, std::size_t hop);

// One-sided DFT (n/2 + 1 bins) of a real sequence.
std::vector<std::complex<double>> rfft(std::span<const double> x);
std::vector<double> magnitude_spectrum(std::span<const double> x);
std::vector<double> power_spectrum(std::span<const double> x);

// Separable Gaussian blur with a kernel truncated at ceil(3 sigma) and
// replicated borders. sigma <= 0 returns the input.
GrayFrame gaussian_blur(const GrayFrame& in, double sigma);

// Normalized 1-D Gaussian kernel of the given radius.
std::vector<double> gaussian_kernel(int radius, double sigma);

}  // namespace uavqa::dsp

#endif  // UAVQA_DSP_HPP_
