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

#ifndef UAVQA_PIPELINE_HPP_
#define UAVQA_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uavqa/attributes.hpp"
#include "uavqa/evaluation.hpp"
#include "uavqa/features.hpp"
#include "uavqa/media.hpp"

namespace uavqa {

struct ExtractOptions {
  int stride = 10;
  bool audio_features = true;
  unsigned threads = 0;
};

// [w, h, f_v, f_a] for one decoded clip.
FeatureVector extract_clip(const FrameSequence& video, const AudioSignal& audio,
                           const ExtractOptions& options);

// Decodes and extracts every manifest entry; rows follow manifest order.
FeatureTable extract_features(const Manifest& manifest, const ExtractOptions& options);

struct AttributeRow {
  std::string id;
  AttributeVector attributes;
};

std::vector<AttributeRow> manifest_attributes(const Manifest& manifest, int stride,
                                              unsigned threads = 0);
void write_attributes_csv(const std::filesystem::path& path, const std::vector<AttributeRow>& rows);
void write_histogram_csv(const std::filesystem::path& path, const std::vector<HistogramBin>& bins);

// One histogram file per attribute next to `out_csv`, named
// <stem>_hist_<attribute>.csv. Returns the paths written.
std::vector<std::filesystem::path> write_attribute_histograms(
    const std::filesystem::path& out_csv, const std::vector<AttributeRow>& rows, std::size_t bins);

// Synthetic graded benchmark: every content x blur level x noise level
// clip, with a pseudo-MOS that falls monotonically with the combined
// degradation plus small Gaussian noise.
struct SynthOptions {
  int contents = 4;
  int blur_levels = 5;
  int noise_levels = 5;
  double seconds = 4.0;
  int width = 128;
  int height = 96;
  int frame_rate = 10;
  int sample_rate = 16000;
  double mos_noise = 2.0;
  std::uint64_t seed = 1;
};

// Writes <id>.y4m, <id>.wav and manifest.csv into `dir` (created if
// needed) and returns the manifest with resolved paths.
Manifest synthesize_benchmark(const std::filesystem::path& dir, const SynthOptions& options);

}  // namespace uavqa

#endif  // UAVQA_PIPELINE_HPP_
