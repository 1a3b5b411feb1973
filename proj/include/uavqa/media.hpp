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

// Decoded media: planar RGB frames from YUV4MPEG2 and mono PCM audio from
// RIFF/WAVE, plus the frame sampling and audio segmentation that aligns the
// two streams.

#ifndef UAVQA_MEDIA_HPP_
#define UAVQA_MEDIA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace uavqa {

// 8-bit planar RGB.
struct RgbFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> r, g, b;

  RgbFrame() = default;
  RgbFrame(int w, int h)
      : width(w), height(h),
        r(static_cast<std::size_t>(w) * h), g(r.size()), b(r.size()) {}

  std::size_t pixel_count() const { return r.size(); }
};

// Floating-point single-channel plane on the 0-255 scale. Also used for
// derived fields (MSCN coefficients, gradients) that share the layout.
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  GrayFrame() = default;
  GrayFrame(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  bool empty() const { return data.empty(); }
};

struct FrameSequence {
  std::vector<RgbFrame> frames;
  int width = 0;
  int height = 0;
  double frame_rate = 0.0;
  std::vector<double> timestamps;  // seconds, one per frame

  std::size_t size() const { return frames.size(); }
};

struct AudioSignal {
  std::vector<double> samples;  // mono, |s| <= 1
  double sample_rate = 0.0;
  // Set when the decoded signal was all zeros and peak normalization was
  // skipped.
  bool silent = false;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// A contiguous slice of an AudioSignal. `samples` views the parent signal,
// which must outlive the segment.
struct AudioSegment {
  double start = 0.0;  // seconds
  double end = 0.0;
  std::size_t first_sample = 0;
  std::span<const double> samples;
};

enum class ChromaFormat { k420, k444 };

FrameSequence load_y4m(const std::filesystem::path& path);
FrameSequence parse_y4m(std::span<const std::uint8_t> bytes);
void write_y4m(const std::filesystem::path& path, const FrameSequence& seq,
               ChromaFormat chroma = ChromaFormat::k444);

AudioSignal load_wav(const std::filesystem::path& path);
AudioSignal parse_wav(std::span<const std::uint8_t> bytes);

// Writes interleaved samples as 16-bit PCM (values clamped to [-1, 1]).
void write_wav_pcm16(const std::filesystem::path& path,
                     std::span<const double> interleaved, int channels,
                     int sample_rate);
void write_wav_float32(const std::filesystem::path& path,
                       std::span<const double> interleaved, int channels,
                       int sample_rate);

// Frames at indices 0, stride, 2*stride, ...
FrameSequence sample_frames(const FrameSequence& seq, int stride);

// One segment per sampled frame, bounded by midpoints between consecutive
// sampled timestamps; the first starts at 0 and the last ends at the audio
// duration.
std::vector<AudioSegment> segment_audio(const AudioSignal& audio,
                                        const FrameSequence& sampled);

// BT.601 luma, unquantized.
GrayFrame to_grayscale(const RgbFrame& frame);

// BT.601 full-range conversions for a single pixel, exposed for tests and
// the writer.
void yuv_to_rgb(int y, int u, int v, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b);
void rgb_to_yuv(int r, int g, int b, std::uint8_t& y, std::uint8_t& u, std::uint8_t& v);

}  // namespace uavqa

#endif  // UAVQA_MEDIA_HPP_
