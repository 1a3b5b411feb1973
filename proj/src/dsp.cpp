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

#include "uavqa/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "uavqa/error.hpp"

namespace uavqa::dsp {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_std(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size()));
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

FrameLayout frame_layout(std::size_t n_samples, std::size_t length, std::size_t hop) {
  if (length == 0 || hop == 0) {
    Fail(ErrorCode::kInvalidArgument, "frame length and hop must be positive");
  }
  if (length > n_samples) {
    Fail(ErrorCode::kInvalidArgument,
         "analysis window (" + std::to_string(length) +
             " samples) is longer than the signal (" + std::to_string(n_samples) + ")");
  }
  return {length, hop, (n_samples - length) / hop + 1};
}

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// FFTW planning is not thread safe; execution with the new-array interface
// is. Plans are cached per length and live for the process.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(n / 2 + 1));
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(),
                                          FFTW_ESTIMATE);
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  fftw_plan plan = plan_cache().get(n);
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(n / 2 + 1));
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(plan, in.get(), out.get());
  std::vector<std::complex<double>> spec(n / 2 + 1);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    spec[k] = {out.get()[k][0], out.get()[k][1]};
  }
  return spec;
}

std::vector<double> magnitude_spectrum(std::span<const double> x) {
  auto spec = rfft(x);
  std::vector<double> mag(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) mag[k] = std::abs(spec[k]);
  return mag;
}

std::vector<double> power_spectrum(std::span<const double> x) {
  auto spec = rfft(x);
  std::vector<double> pw(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) pw[k] = std::norm(spec[k]);
  return pw;
}

std::vector<double> gaussian_kernel(int radius, double sigma) {
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

GrayFrame gaussian_blur(const GrayFrame& in, double sigma) {
  if (sigma <= 0.0) return in;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const auto k = gaussian_kernel(radius, sigma);
  const int w = in.width, h = in.height;
  GrayFrame tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        s += k[i + radius] * in.at(std::clamp(x + i, 0, w - 1), y);
      }
      tmp.at(x, y) = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        s += k[i + radius] * tmp.at(x, std::clamp(y + i, 0, h - 1));
      }
      out.at(x, y) = s;
    }
  }
  return out;
}

}  // namespace uavqa::dsp
