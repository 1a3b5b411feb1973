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

#include "uavqa/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "csv.hpp"
#include "uavqa/dsp.hpp"
#include "uavqa/error.hpp"

namespace uavqa {

namespace {

constexpr int kMscnRadius = 3;
constexpr double kMscnSigma = 7.0 / 6.0;
constexpr double kMscnStabilizer = 1.0;

constexpr double kAlphaMin = 0.2;
constexpr double kAlphaMax = 10.0;
constexpr double kAlphaStep = 0.001;

constexpr double kMfccWindowS = 0.025;
constexpr double kMfccHopS = 0.010;
constexpr double kLogFloor = 1e-10;

// Tabulated shape function on the alpha grid, inverted by bracketing and
// linear interpolation. `fn` must be monotone on the grid.
class ShapeTable {
 public:
  explicit ShapeTable(double (*fn)(double)) {
    const auto n = static_cast<std::size_t>(std::llround((kAlphaMax - kAlphaMin) / kAlphaStep)) + 1;
    alpha_.resize(n);
    value_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      alpha_[i] = kAlphaMin + kAlphaStep * static_cast<double>(i);
      value_[i] = fn(alpha_[i]);
    }
    increasing_ = value_.back() > value_.front();
  }

  double invert(double target) const {
    const std::size_t n = value_.size();
    auto before = [&](double a, double b) { return increasing_ ? a < b : a > b; };
    if (!before(value_.front(), target)) return alpha_.front();
    if (!before(target, value_.back())) return alpha_.back();
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (before(value_[mid], target)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t = (target - value_[lo]) / (value_[hi] - value_[lo]);
    return alpha_[lo] + t * (alpha_[hi] - alpha_[lo]);
  }

 private:
  std::vector<double> alpha_, value_;
  bool increasing_ = true;
};

const ShapeTable& ggd_table() {
  static const ShapeTable table(ggd_ratio);
  return table;
}

const ShapeTable& aggd_table() {
  static const ShapeTable table(aggd_ratio);
  return table;
}

// Sum of squares taken in sorted order so the result depends only on the
// multiset of values.
double sorted_sum_of_squares(std::vector<double>& sq) {
  std::sort(sq.begin(), sq.end());
  double s = 0.0;
  for (double v : sq) s += v;
  return s;
}

double clamped(const GrayFrame& f, int x, int y) {
  return f.at(std::clamp(x, 0, f.width - 1), std::clamp(y, 0, f.height - 1));
}

void append_scale_features(const GrayFrame& frame, double*& out) {
  const GrayFrame m = mscn(frame);
  const auto g = ggd_fit(m.data);
  *out++ = g.alpha;
  *out++ = g.sigma * g.sigma;

  const int w = m.width, h = m.height;
  // (dx0, dy0) * (dx1, dy1) neighbour products: H, V, D1, D2.
  constexpr int kShifts[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 1, 1}, {1, 0, 0, 1}};
  std::vector<double> prod;
  prod.reserve(static_cast<std::size_t>(w) * h);
  for (const auto& s : kShifts) {
    prod.clear();
    const int span_x = std::max(s[0], s[2]), span_y = std::max(s[1], s[3]);
    for (int y = 0; y + span_y < h; ++y) {
      for (int x = 0; x + span_x < w; ++x) {
        prod.push_back(m.at(x + s[0], y + s[1]) * m.at(x + s[2], y + s[3]));
      }
    }
    const auto a = aggd_fit(prod);
    *out++ = a.alpha;
    *out++ = a.mean_offset;
    *out++ = a.sigma_left * a.sigma_left;
    *out++ = a.sigma_right * a.sigma_right;
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// kMelFilters x bins triangular weights spanning 0..fs/2.
std::vector<std::vector<double>> mel_filterbank(std::size_t frame_len, double fs) {
  const std::size_t bins = frame_len / 2 + 1;
  const double mel_hi = hz_to_mel(fs / 2.0);
  std::vector<double> edges(kMelFilters + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_hi * static_cast<double>(i) / static_cast<double>(kMelFilters + 1));
  }
  std::vector<std::vector<double>> bank(kMelFilters, std::vector<double>(bins, 0.0));
  for (std::size_t m = 0; m < kMelFilters; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * fs / static_cast<double>(frame_len);
      if (f > lo && f < mid) {
        bank[m][k] = (f - lo) / (mid - lo);
      } else if (f >= mid && f < hi) {
        bank[m][k] = (hi - f) / (hi - mid);
      }
    }
  }
  return bank;
}

// Orthonormal DCT-II, first kMfccCoeffs outputs.
std::array<double, kMfccCoeffs> dct2(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  std::array<double, kMfccCoeffs> c{};
  for (std::size_t k = 0; k < kMfccCoeffs; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) *
                           (static_cast<double>(i) + 0.5) / n);
    }
    c[k] = s * std::sqrt((k == 0 ? 1.0 : 2.0) / n);
  }
  return c;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) Fail(ErrorCode::kInvalidArgument, std::string("non-finite value in ") + what);
  }
}

}  // namespace

double ggd_ratio(double alpha) {
  return std::tgamma(1.0 / alpha) * std::tgamma(3.0 / alpha) /
         (std::tgamma(2.0 / alpha) * std::tgamma(2.0 / alpha));
}

double aggd_ratio(double alpha) { return 1.0 / ggd_ratio(alpha); }

GrayFrame mscn(const GrayFrame& frame) {
  if (frame.width < 7 || frame.height < 7) {
    Fail(ErrorCode::kInvalidArgument, "MSCN needs a frame of at least 7x7");
  }
  const auto k1 = dsp::gaussian_kernel(kMscnRadius, kMscnSigma);
  const int w = frame.width, h = frame.height;
  GrayFrame out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double mu = 0.0;
      for (int dy = -kMscnRadius; dy <= kMscnRadius; ++dy) {
        for (int dx = -kMscnRadius; dx <= kMscnRadius; ++dx) {
          mu += k1[dy + kMscnRadius] * k1[dx + kMscnRadius] * clamped(frame, x + dx, y + dy);
        }
      }
      // Weighted spread around the local mean, computed directly rather
      // than as E[I^2] - mu^2 so a constant offset cancels exactly.
      double var = 0.0;
      for (int dy = -kMscnRadius; dy <= kMscnRadius; ++dy) {
        for (int dx = -kMscnRadius; dx <= kMscnRadius; ++dx) {
          const double d = clamped(frame, x + dx, y + dy) - mu;
          var += k1[dy + kMscnRadius] * k1[dx + kMscnRadius] * d * d;
        }
      }
      out.at(x, y) = (frame.at(x, y) - mu) / (std::sqrt(var) + kMscnStabilizer);
    }
  }
  return out;
}

GgdParams ggd_fit(std::span<const double> samples) {
  if (samples.empty()) Fail(ErrorCode::kDegenerate, "GGD fit of no samples");
  double sq = 0.0, ab = 0.0;
  for (double v : samples) {
    sq += v * v;
    ab += std::abs(v);
  }
  const double n = static_cast<double>(samples.size());
  if (ab == 0.0) Fail(ErrorCode::kDegenerate, "GGD fit of all-zero samples");
  const double sigma_sq = sq / n, mean_abs = ab / n;
  const double rho = sigma_sq / (mean_abs * mean_abs);
  return {ggd_table().invert(rho), std::sqrt(sigma_sq)};
}

AggdParams aggd_fit(std::span<const double> samples) {
  if (samples.size() < 16) Fail(ErrorCode::kInvalidArgument, "AGGD fit needs at least 16 samples");
  std::vector<double> left_sq, right_sq;
  double abs_sum = 0.0, sq_sum = 0.0;
  for (double v : samples) {
    if (v < 0) left_sq.push_back(v * v);
    if (v > 0) right_sq.push_back(v * v);
    abs_sum += std::abs(v);
    sq_sum += v * v;
  }
  if (left_sq.empty() && right_sq.empty()) {
    Fail(ErrorCode::kDegenerate, "AGGD fit of all-zero samples");
  }
  const double n_left = static_cast<double>(left_sq.size());
  const double n_right = static_cast<double>(right_sq.size());
  AggdParams p;
  p.sigma_left = left_sq.empty() ? 0.0 : std::sqrt(sorted_sum_of_squares(left_sq) / n_left);
  p.sigma_right = right_sq.empty() ? 0.0 : std::sqrt(sorted_sum_of_squares(right_sq) / n_right);

  // The skew correction is symmetric in gamma <-> 1/gamma, so use the ratio
  // that is <= 1; an empty side is its limit 0.
  const double big = std::max(p.sigma_left, p.sigma_right);
  const double gamma = std::min(p.sigma_left, p.sigma_right) / big;
  const double n = static_cast<double>(samples.size());
  const double mean_abs = abs_sum / n;
  const double r_hat = mean_abs * mean_abs / (sq_sum / n);
  const double g2 = gamma * gamma;
  const double r_norm = r_hat * (g2 * gamma + 1.0) * (gamma + 1.0) / ((g2 + 1.0) * (g2 + 1.0));
  p.alpha = aggd_table().invert(r_norm);

  const double g1 = std::tgamma(1.0 / p.alpha), g3 = std::tgamma(3.0 / p.alpha);
  const double g2a = std::tgamma(2.0 / p.alpha);
  p.mean_offset = (p.sigma_right - p.sigma_left) * std::sqrt(g1 / g3) * g2a / g1;
  return p;
}

GrayFrame half_scale(const GrayFrame& frame) {
  GrayFrame out(frame.width / 2, frame.height / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      out.at(x, y) = 0.25 * (frame.at(2 * x, 2 * y) + frame.at(2 * x + 1, 2 * y) +
                             frame.at(2 * x, 2 * y + 1) + frame.at(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

std::array<double, kBrisqueDims> brisque_frame(const GrayFrame& frame) {
  if (frame.width < 14 || frame.height < 14) {
    Fail(ErrorCode::kInvalidArgument, "BRISQUE needs a frame of at least 14x14");
  }
  std::array<double, kBrisqueDims> f{};
  double* out = f.data();
  append_scale_features(frame, out);
  append_scale_features(half_scale(frame), out);
  return f;
}

std::vector<double> video_features(const FrameSequence& seq, int stride) {
  const auto sampled = sample_frames(seq, stride);
  if (sampled.frames.empty()) Fail(ErrorCode::kInvalidArgument, "no frames to extract features from");
  std::vector<double> fv(kBrisqueDims, 0.0);
  for (const auto& frame : sampled.frames) {
    const auto f = brisque_frame(to_grayscale(frame));
    for (std::size_t i = 0; i < kBrisqueDims; ++i) fv[i] += f[i];
  }
  for (double& v : fv) v /= static_cast<double>(sampled.frames.size());
  return fv;
}

MfccResult mfcc(std::span<const double> samples, double sample_rate) {
  if (sample_rate <= 0) Fail(ErrorCode::kInvalidArgument, "sample rate must be positive");
  const auto len = static_cast<std::size_t>(std::llround(kMfccWindowS * sample_rate));
  const auto hop = static_cast<std::size_t>(std::llround(kMfccHopS * sample_rate));
  MfccResult res;
  if (len < 2 || samples.size() < len) {
    res.too_short = true;
    return res;
  }
  const auto layout = dsp::frame_layout(samples.size(), len, hop);
  const auto window = dsp::hann(len);
  const auto bank = mel_filterbank(len, sample_rate);
  std::vector<double> buf(len), logmel(kMelFilters);
  res.frames.reserve(layout.count);
  for (std::size_t j = 0; j < layout.count; ++j) {
    const double* src = samples.data() + layout.offset(j);
    for (std::size_t i = 0; i < len; ++i) buf[i] = src[i] * window[i];
    const auto pw = dsp::power_spectrum(buf);
    for (std::size_t m = 0; m < kMelFilters; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < pw.size(); ++k) e += bank[m][k] * pw[k];
      logmel[m] = std::log(e + kLogFloor);
    }
    res.frames.push_back(dct2(logmel));
  }
  return res;
}

AudioFeatures audio_features(std::span<const AudioSegment> segments, double sample_rate) {
  std::vector<std::array<double, kMfccCoeffs>> seg_means;
  AudioFeatures out;
  for (const auto& seg : segments) {
    const auto m = mfcc(seg.samples, sample_rate);
    if (m.too_short || m.frames.empty()) {
      ++out.skipped_segments;
      continue;
    }
    std::array<double, kMfccCoeffs> avg{};
    for (const auto& fr : m.frames) {
      for (std::size_t k = 0; k < kMfccCoeffs; ++k) avg[k] += fr[k];
    }
    for (double& v : avg) v /= static_cast<double>(m.frames.size());
    seg_means.push_back(avg);
  }
  if (seg_means.empty()) Fail(ErrorCode::kDegenerate, "no audio segment long enough for MFCC analysis");

  out.values.assign(kAudioFeatureDims, 0.0);
  std::vector<double> column(seg_means.size());
  for (std::size_t k = 0; k < kMfccCoeffs; ++k) {
    for (std::size_t s = 0; s < seg_means.size(); ++s) column[s] = seg_means[s][k];
    out.values[k] = dsp::mean(column);
    out.values[kMfccCoeffs + k] = dsp::population_std(column);
  }
  return out;
}

std::vector<std::string> feature_names(bool with_audio) {
  std::vector<std::string> names{"w", "h"};
  for (std::size_t i = 0; i < kBrisqueDims; ++i) names.push_back("fv_" + std::to_string(i));
  if (with_audio) {
    for (std::size_t i = 0; i < kMfccCoeffs; ++i) names.push_back("fa_mean_" + std::to_string(i));
    for (std::size_t i = 0; i < kMfccCoeffs; ++i) names.push_back("fa_std_" + std::to_string(i));
  }
  return names;
}

FeatureVector assemble(int width, int height, std::span<const double> fv,
                       std::optional<std::span<const double>> fa) {
  if (width < 1 || height < 1) Fail(ErrorCode::kInvalidArgument, "resolution must be positive");
  require_finite(fv, "video features");
  FeatureVector out;
  out.names = {"w", "h"};
  out.values = {static_cast<double>(width), static_cast<double>(height)};
  for (std::size_t i = 0; i < fv.size(); ++i) {
    out.names.push_back("fv_" + std::to_string(i));
    out.values.push_back(fv[i]);
  }
  if (fa) {
    require_finite(*fa, "audio features");
    if (fa->size() % 2 != 0) {
      Fail(ErrorCode::kInvalidArgument, "audio block must hold equal mean and std halves");
    }
    const std::size_t half = fa->size() / 2;
    for (std::size_t i = 0; i < half; ++i) out.names.push_back("fa_mean_" + std::to_string(i));
    for (std::size_t i = 0; i < half; ++i) out.names.push_back("fa_std_" + std::to_string(i));
    out.values.insert(out.values.end(), fa->begin(), fa->end());
    out.has_audio = true;
  }
  return out;
}

bool FeatureTable::has_audio() const {
  return std::any_of(names.begin(), names.end(),
                     [](const std::string& n) { return n.rfind("fa_", 0) == 0; });
}

std::size_t FeatureTable::find(const std::string& id) const {
  const auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(it - ids.begin());
}

void write_feature_table(const std::filesystem::path& path, const FeatureTable& table) {
  std::vector<csv::Row> rows;
  csv::Row header{"id"};
  header.insert(header.end(), table.names.begin(), table.names.end());
  rows.push_back(std::move(header));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.names.size()) {
      Fail(ErrorCode::kDimensionMismatch, "feature row width does not match header");
    }
    csv::Row row{table.ids[r]};
    for (double v : table.rows[r]) row.push_back(csv::format_double(v));
    rows.push_back(std::move(row));
  }
  csv::write(path, rows);
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  const auto rows = csv::read(path);
  if (rows.empty() || rows[0].empty() || rows[0][0] != "id") {
    Fail(ErrorCode::kParse, path.string() + ": feature file must start with an 'id' column");
  }
  FeatureTable t;
  t.names.assign(rows[0].begin() + 1, rows[0].end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      Fail(ErrorCode::kParse, path.string() + ": row " + std::to_string(r) + " has " +
                                  std::to_string(rows[r].size()) + " fields, expected " +
                                  std::to_string(rows[0].size()));
    }
    t.ids.push_back(rows[r][0]);
    std::vector<double> v;
    v.reserve(t.names.size());
    for (std::size_t c = 1; c < rows[r].size(); ++c) v.push_back(csv::parse_double(rows[r][c]));
    t.rows.push_back(std::move(v));
  }
  return t;
}

}  // namespace uavqa
