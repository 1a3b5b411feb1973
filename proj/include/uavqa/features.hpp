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

// Quality-aware features.
//
// Video: BRISQUE natural-scene statistics. Each frame is turned into MSCN
// coefficients; a GGD is fit to the coefficients and an AGGD to each of the
// four neighbour products, at full and half scale:
//
//   per scale: [ggd_alpha, ggd_sigma^2,
//               (aggd_alpha, mean_offset, sigma_left^2, sigma_right^2) x {H, V, D1, D2}]
//
// giving 18 values per scale and 36 in total. Sampled frames are mean-pooled.
//
// Audio: 13 MFCCs per 25 ms frame, averaged within each aligned segment;
// across segments the mean and population std of those averages form the
// 26-dim audio block.
//
// The regressor input is [w, h, f_v, f_a], or [w, h, f_v] without audio.

#ifndef UAVQA_FEATURES_HPP_
#define UAVQA_FEATURES_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavqa/media.hpp"

namespace uavqa {

inline constexpr std::size_t kBrisqueDims = 36;
inline constexpr std::size_t kMfccCoeffs = 13;
inline constexpr std::size_t kMelFilters = 26;
inline constexpr std::size_t kAudioFeatureDims = 2 * kMfccCoeffs;

struct GgdParams {
  double alpha = 0.0;
  double sigma = 0.0;
};

struct AggdParams {
  double alpha = 0.0;
  double sigma_left = 0.0;
  double sigma_right = 0.0;
  double mean_offset = 0.0;
};

// Local Gaussian-weighted normalization (7x7, sigma 7/6, C = 1).
GrayFrame mscn(const GrayFrame& frame);

GgdParams ggd_fit(std::span<const double> samples);
AggdParams aggd_fit(std::span<const double> samples);

// Shape functions inverted by the fits, exposed for tests.
double ggd_ratio(double alpha);   // Gamma(1/a)Gamma(3/a)/Gamma(2/a)^2
double aggd_ratio(double alpha);  // Gamma(2/a)^2/(Gamma(1/a)Gamma(3/a))

// 2x2 box average then 2x decimation.
GrayFrame half_scale(const GrayFrame& frame);

std::array<double, kBrisqueDims> brisque_frame(const GrayFrame& frame);
std::vector<double> video_features(const FrameSequence& seq, int stride = 10);

struct MfccResult {
  std::vector<std::array<double, kMfccCoeffs>> frames;
  bool too_short = false;
};
MfccResult mfcc(std::span<const double> samples, double sample_rate);

struct AudioFeatures {
  std::vector<double> values;  // kAudioFeatureDims: means then stds
  std::size_t skipped_segments = 0;
};
AudioFeatures audio_features(std::span<const AudioSegment> segments, double sample_rate);

struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;
  bool has_audio = false;
};

FeatureVector assemble(int width, int height, std::span<const double> fv,
                       std::optional<std::span<const double>> fa);

std::vector<std::string> feature_names(bool with_audio);

// Feature cache: one row per sequence, columns `id` then the assembled
// vector names.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;

  bool has_audio() const;
  std::size_t dims() const { return names.size(); }
  // Index of `id` or npos.
  std::size_t find(const std::string& id) const;
};

void write_feature_table(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_feature_table(const std::filesystem::path& path);

}  // namespace uavqa

#endif  // UAVQA_FEATURES_HPP_
