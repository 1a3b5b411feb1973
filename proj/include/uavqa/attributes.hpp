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

// Content-diversity attributes of an audio/video pair.
//
// Video (per sampled frame, then averaged): contrast, colorfulness, CPBD
// sharpness, spatial information and temporal information.
// Audio (short-time, 50 ms Hann windows at 25 ms hop by default): energy
// fluctuation, zero-crossing rate, maximum spectral centroid and the spread
// of normalized spectral entropy.

#ifndef UAVQA_ATTRIBUTES_HPP_
#define UAVQA_ATTRIBUTES_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uavqa/media.hpp"

namespace uavqa {

struct VideoAttributes {
  double contrast = 0.0;
  double colorfulness = 0.0;
  double cpbd = 0.0;
  double si = 0.0;
  double ti = 0.0;
  // At least one sampled frame had no detectable edges (scored 1.0).
  bool cpbd_no_edges = false;
  // Only one frame was sampled, so TI is defined as 0.
  bool ti_single_frame = false;
};

struct AudioAttributes {
  double sef = 0.0;
  double zcr = 0.0;
  double sc = 0.0;  // Hz
  double se = 0.0;
};

struct AttributeVector {
  VideoAttributes video;
  AudioAttributes audio;

  static constexpr std::array<const char*, 9> kNames = {
      "contrast", "colorfulness", "cpbd", "si", "ti", "sef", "zcr", "sc", "se"};
  std::array<double, 9> values() const;
};

struct GradientField {
  int width = 0;  // source width - 2
  int height = 0;
  std::vector<double> gmag;
  std::vector<double> gdir;  // radians in (-pi, pi]
};

double contrast(const GrayFrame& frame);
double colorfulness(const RgbFrame& frame);

struct CpbdResult {
  double value = 1.0;
  bool no_edges = false;
};
CpbdResult cpbd(const GrayFrame& frame);

// 3x3 Sobel over interior pixels.
GradientField sobel_gradients(const GrayFrame& frame);
double spatial_information(const GrayFrame& frame);
double temporal_information(const GrayFrame& prev, const GrayFrame& cur);

struct AudioFraming {
  double window_s = 0.050;
  double hop_s = 0.025;
};

// Hann-windowed analysis frames.
std::vector<std::vector<double>> frame_audio(const AudioSignal& signal, double window_s,
                                             double hop_s);

double sef(const AudioSignal& signal, const AudioFraming& framing = {});
double zcr(const AudioSignal& signal, const AudioFraming& framing = {});
double spectral_centroid(const AudioSignal& signal, const AudioFraming& framing = {});
double spectral_entropy(const AudioSignal& signal, const AudioFraming& framing = {});

// Per-frame building blocks. `frame` is already windowed for the spectral
// ones.
double zero_crossing_rate(std::span<const double> frame);
double frame_spectral_centroid(std::span<const double> frame, double sample_rate);
double frame_spectral_entropy(std::span<const double> frame);

VideoAttributes video_attributes(const FrameSequence& seq, int stride = 10);
AudioAttributes audio_attributes(const AudioSignal& audio, const AudioFraming& framing = {});
AttributeVector compute_attributes(const FrameSequence& seq, const AudioSignal& audio,
                                   int stride = 10, const AudioFraming& framing = {});

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
};

// Equal-width bins over [min, max]; the last bin is closed on the right.
std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins);

}  // namespace uavqa

#endif  // UAVQA_ATTRIBUTES_HPP_
