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

#include "uavqa/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uavqa/dsp.hpp"
#include "uavqa/error.hpp"

namespace uavqa {

namespace {

// CPBD constants.
constexpr int kCpbdBlock = 64;
constexpr double kEdgeBlockFraction = 0.002;
constexpr double kBeta = 3.6;
constexpr double kBlurThreshold = 0.63;
constexpr double kLowContrastLimit = 50.0;
constexpr double kJnbLowContrast = 5.0;
constexpr double kJnbHighContrast = 3.0;

double clamped(const GrayFrame& f, int x, int y) {
  return f.at(std::clamp(x, 0, f.width - 1), std::clamp(y, 0, f.height - 1));
}

void sobel_at(const GrayFrame& f, int x, int y, double& gx, double& gy) {
  const double a = clamped(f, x - 1, y - 1), b = clamped(f, x, y - 1), c = clamped(f, x + 1, y - 1);
  const double d = clamped(f, x - 1, y), e = clamped(f, x + 1, y);
  const double g = clamped(f, x - 1, y + 1), h = clamped(f, x, y + 1), i = clamped(f, x + 1, y + 1);
  gx = (c + 2 * e + i) - (a + 2 * d + g);
  gy = (g + 2 * h + i) - (a + 2 * b + c);
}

// Edge width along the row through (x, y): distance between the local
// extrema on either side of the edge pixel, following the gradient sign.
int edge_width(const GrayFrame& f, int x, int y, bool rising) {
  int r = x, l = x;
  if (rising) {
    while (r + 1 < f.width && f.at(r + 1, y) > f.at(r, y)) ++r;
    while (l - 1 >= 0 && f.at(l - 1, y) < f.at(l, y)) --l;
  } else {
    while (r + 1 < f.width && f.at(r + 1, y) < f.at(r, y)) ++r;
    while (l - 1 >= 0 && f.at(l - 1, y) > f.at(l, y)) --l;
  }
  return r - l;
}

dsp::FrameLayout audio_layout(const AudioSignal& s, const AudioFraming& framing) {
  if (framing.window_s <= 0 || framing.hop_s <= 0) {
    Fail(ErrorCode::kInvalidArgument, "audio window and hop must be positive");
  }
  const auto win = static_cast<std::size_t>(std::llround(framing.window_s * s.sample_rate));
  const auto hop = static_cast<std::size_t>(std::llround(framing.hop_s * s.sample_rate));
  return dsp::frame_layout(s.samples.size(), win, hop);
}

template <typename Fn>
std::vector<double> per_windowed_frame(const AudioSignal& s, const AudioFraming& framing, Fn fn) {
  const auto layout = audio_layout(s, framing);
  const auto window = dsp::hann(layout.length);
  std::vector<double> buf(layout.length), out(layout.count);
  for (std::size_t j = 0; j < layout.count; ++j) {
    const double* src = s.samples.data() + layout.offset(j);
    for (std::size_t i = 0; i < layout.length; ++i) buf[i] = src[i] * window[i];
    out[j] = fn(std::span<const double>(buf));
  }
  return out;
}

}  // namespace

std::array<double, 9> AttributeVector::values() const {
  return {video.contrast, video.colorfulness, video.cpbd, video.si, video.ti,
          audio.sef,      audio.zcr,          audio.sc,   audio.se};
}

double contrast(const GrayFrame& frame) {
  if (frame.empty()) Fail(ErrorCode::kInvalidArgument, "contrast of an empty frame");
  return dsp::population_std(frame.data);
}

double colorfulness(const RgbFrame& frame) {
  const std::size_t n = frame.pixel_count();
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "colorfulness of an empty frame");
  std::vector<double> rg(n), yb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = frame.r[i], g = frame.g[i], b = frame.b[i];
    rg[i] = r - g;
    yb[i] = 0.5 * (r + g) - b;
  }
  const double s_rg = dsp::population_std(rg), s_yb = dsp::population_std(yb);
  const double m_rg = dsp::mean(rg), m_yb = dsp::mean(yb);
  return std::sqrt(s_rg * s_rg + s_yb * s_yb) + std::sqrt(m_rg * m_rg + m_yb * m_yb);
}

CpbdResult cpbd(const GrayFrame& frame) {
  const int w = frame.width, h = frame.height;
  if (frame.empty()) Fail(ErrorCode::kInvalidArgument, "cpbd of an empty frame");

  std::vector<double> gx(frame.data.size()), gy(gx.size()), mag2(gx.size());
  double mean_mag2 = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      sobel_at(frame, x, y, gx[i], gy[i]);
      mag2[i] = gx[i] * gx[i] + gy[i] * gy[i];
      mean_mag2 += mag2[i];
    }
  }
  mean_mag2 /= static_cast<double>(mag2.size());
  const double cutoff = 4.0 * mean_mag2;
  if (cutoff <= 0.0) return {1.0, true};

  // Vertical-ish edges thinned to a single pixel along the row, which is
  // also the direction the width is measured in.
  std::vector<char> edge(mag2.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (mag2[i] <= cutoff || std::abs(gx[i]) < std::abs(gy[i])) continue;
      const double left = x > 0 ? mag2[i - 1] : 0.0;
      const double right = x + 1 < w ? mag2[i + 1] : 0.0;
      if (mag2[i] > left && mag2[i] >= right) edge[i] = 1;
    }
  }

  std::size_t measured = 0, sharp = 0;
  for (int by = 0; by < h; by += kCpbdBlock) {
    for (int bx = 0; bx < w; bx += kCpbdBlock) {
      const int ex = std::min(bx + kCpbdBlock, w), ey = std::min(by + kCpbdBlock, h);
      const double block_pixels = static_cast<double>(ex - bx) * (ey - by);
      std::size_t edges = 0;
      double lo = frame.at(bx, by), hi = lo;
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) {
          edges += edge[static_cast<std::size_t>(y) * w + x];
          lo = std::min(lo, frame.at(x, y));
          hi = std::max(hi, frame.at(x, y));
        }
      }
      if (static_cast<double>(edges) <= kEdgeBlockFraction * block_pixels) continue;
      const double jnb = (hi - lo) <= kLowContrastLimit ? kJnbLowContrast : kJnbHighContrast;
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          if (!edge[i]) continue;
          const int width = edge_width(frame, x, y, gx[i] > 0);
          if (width <= 0) continue;
          const double p_blur = 1.0 - std::exp(-std::pow(width / jnb, kBeta));
          ++measured;
          if (p_blur <= kBlurThreshold) ++sharp;
        }
      }
    }
  }
  if (measured == 0) return {1.0, true};
  return {static_cast<double>(sharp) / static_cast<double>(measured), false};
}

GradientField sobel_gradients(const GrayFrame& frame) {
  if (frame.width < 3 || frame.height < 3) {
    Fail(ErrorCode::kInvalidArgument, "Sobel gradients need a frame of at least 3x3");
  }
  GradientField g;
  g.width = frame.width - 2;
  g.height = frame.height - 2;
  g.gmag.reserve(static_cast<std::size_t>(g.width) * g.height);
  g.gdir.reserve(g.gmag.capacity());
  for (int y = 1; y + 1 < frame.height; ++y) {
    for (int x = 1; x + 1 < frame.width; ++x) {
      double gx, gy;
      sobel_at(frame, x, y, gx, gy);
      g.gmag.push_back(std::hypot(gx, gy));
      double dir = std::atan2(gy, gx);
      if (dir <= -std::numbers::pi) dir = std::numbers::pi;
      g.gdir.push_back(dir);
    }
  }
  return g;
}

double spatial_information(const GrayFrame& frame) {
  const auto g = sobel_gradients(frame);
  // Direction spread is taken on raw radians, not circular statistics.
  return 0.5 * (dsp::population_std(g.gmag) + dsp::population_std(g.gdir));
}

double temporal_information(const GrayFrame& prev, const GrayFrame& cur) {
  if (prev.width != cur.width || prev.height != cur.height) {
    Fail(ErrorCode::kDimensionMismatch, "temporal information needs equal frame sizes");
  }
  std::vector<double> diff(cur.data.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = cur.data[i] - prev.data[i];
  return dsp::population_std(diff);
}

std::vector<std::vector<double>> frame_audio(const AudioSignal& signal, double window_s,
                                             double hop_s) {
  const auto layout = audio_layout(signal, {window_s, hop_s});
  const auto window = dsp::hann(layout.length);
  std::vector<std::vector<double>> frames(layout.count, std::vector<double>(layout.length));
  for (std::size_t j = 0; j < layout.count; ++j) {
    const double* src = signal.samples.data() + layout.offset(j);
    for (std::size_t i = 0; i < layout.length; ++i) frames[j][i] = src[i] * window[i];
  }
  return frames;
}

double sef(const AudioSignal& signal, const AudioFraming& framing) {
  constexpr double kEps = 1e-12;
  const auto layout = audio_layout(signal, framing);
  if (layout.count < 2) Fail(ErrorCode::kInvalidArgument, "SEF needs at least two frames");
  std::vector<double> energy(layout.count);
  for (std::size_t j = 0; j < layout.count; ++j) {
    const double* src = signal.samples.data() + layout.offset(j);
    double e = 0.0;
    for (std::size_t i = 0; i < layout.length; ++i) e += src[i] * src[i];
    energy[j] = e / static_cast<double>(layout.length);
  }
  double fluct = 0.0;
  for (std::size_t j = 1; j < energy.size(); ++j) fluct += std::abs(energy[j] - energy[j - 1]);
  fluct /= static_cast<double>(energy.size() - 1);
  return fluct / (dsp::mean(energy) + kEps);
}

double zero_crossing_rate(std::span<const double> frame) {
  if (frame.size() < 2) Fail(ErrorCode::kInvalidArgument, "ZCR needs at least two samples");
  std::size_t changes = 0;
  for (std::size_t i = 1; i < frame.size(); ++i) {
    if ((frame[i] >= 0.0) != (frame[i - 1] >= 0.0)) ++changes;
  }
  return static_cast<double>(changes) / static_cast<double>(frame.size() - 1);
}

double zcr(const AudioSignal& signal, const AudioFraming& framing) {
  const auto layout = audio_layout(signal, framing);
  double acc = 0.0;
  for (std::size_t j = 0; j < layout.count; ++j) {
    acc += zero_crossing_rate(
        std::span<const double>(signal.samples).subspan(layout.offset(j), layout.length));
  }
  return acc / static_cast<double>(layout.count);
}

double frame_spectral_centroid(std::span<const double> frame, double sample_rate) {
  const auto mag = dsp::magnitude_spectrum(frame);
  const double bin_hz = sample_rate / static_cast<double>(frame.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    num += k * bin_hz * mag[k];
    den += mag[k];
  }
  return den > 0.0 ? num / den : 0.0;
}

double frame_spectral_entropy(std::span<const double> frame) {
  const auto pw = dsp::power_spectrum(frame);
  double total = 0.0;
  for (double v : pw) total += v;
  if (total <= 0.0 || pw.size() < 2) return 0.0;
  double h = 0.0;
  for (double v : pw) {
    if (v <= 0.0) continue;
    const double p = v / total;
    h -= p * std::log2(p);
  }
  return h / std::log2(static_cast<double>(pw.size()));
}

double spectral_centroid(const AudioSignal& signal, const AudioFraming& framing) {
  const auto sc = per_windowed_frame(signal, framing, [&](std::span<const double> f) {
    return frame_spectral_centroid(f, signal.sample_rate);
  });
  return *std::max_element(sc.begin(), sc.end());
}

double spectral_entropy(const AudioSignal& signal, const AudioFraming& framing) {
  const auto h = per_windowed_frame(signal, framing, frame_spectral_entropy);
  return dsp::population_std(h);
}

VideoAttributes video_attributes(const FrameSequence& seq, int stride) {
  const auto sampled = sample_frames(seq, stride);
  if (sampled.frames.empty()) Fail(ErrorCode::kInvalidArgument, "no frames to analyse");
  VideoAttributes v;
  GrayFrame prev;
  double ti_sum = 0.0;
  for (std::size_t i = 0; i < sampled.frames.size(); ++i) {
    const auto& rgb = sampled.frames[i];
    GrayFrame gray = to_grayscale(rgb);
    v.contrast += contrast(gray);
    v.colorfulness += colorfulness(rgb);
    const auto c = cpbd(gray);
    v.cpbd += c.value;
    v.cpbd_no_edges = v.cpbd_no_edges || c.no_edges;
    v.si += spatial_information(gray);
    if (i > 0) ti_sum += temporal_information(prev, gray);
    prev = std::move(gray);
  }
  const double n = static_cast<double>(sampled.frames.size());
  v.contrast /= n;
  v.colorfulness /= n;
  v.cpbd /= n;
  v.si /= n;
  if (sampled.frames.size() > 1) {
    v.ti = ti_sum / (n - 1);
  } else {
    v.ti_single_frame = true;
  }
  return v;
}

AudioAttributes audio_attributes(const AudioSignal& audio, const AudioFraming& framing) {
  return {sef(audio, framing), zcr(audio, framing), spectral_centroid(audio, framing),
          spectral_entropy(audio, framing)};
}

AttributeVector compute_attributes(const FrameSequence& seq, const AudioSignal& audio, int stride,
                                   const AudioFraming& framing) {
  return {video_attributes(seq, stride), audio_attributes(audio, framing)};
}

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins) {
  if (bins == 0) Fail(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "histogram of no values");
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out[k].left = lo + width * static_cast<double>(k);
    out[k].right = k + 1 == bins ? hi : lo + width * static_cast<double>(k + 1);
  }
  for (double v : values) {
    auto k = static_cast<std::size_t>((v - lo) / width);
    out[std::min(k, bins - 1)].count++;
  }
  return out;
}

}  // namespace uavqa
