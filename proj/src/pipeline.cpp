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

#include "uavqa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>

#include "csv.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "uavqa/dsp.hpp"
#include "uavqa/error.hpp"

namespace uavqa {

namespace {

// Runs fn for each index in parallel and rethrows the first failure (in
// index order) prefixed with the entry id.
template <typename Fn>
void for_each_entry(const Manifest& manifest, unsigned threads, Fn fn) {
  std::vector<std::optional<Error>> errors(manifest.size());
  parallel_for(manifest.size(), threads, [&](std::size_t i) {
    try {
      fn(i);
    } catch (const Error& e) {
      errors[i].emplace(e.code(), manifest.entries[i].id + ": " + e.what());
    } catch (const std::exception& e) {
      errors[i].emplace(ErrorCode::kInvalidArgument, manifest.entries[i].id + ": " + e.what());
    }
  });
  for (auto& e : errors) {
    if (e) throw *e;
  }
}

double normal(rng::CounterStream& s) {
  const double u1 = 1.0 - s.uniform();  // (0, 1]
  const double u2 = s.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Piecewise-constant rectangles, a grating and pixel-level texture.
std::vector<GrayFrame> synth_texture(int content, int w, int h, std::uint64_t seed) {
  rng::CounterStream s(rng::at(seed, 1000 + content));
  std::vector<GrayFrame> ch(3, GrayFrame(w, h));
  for (int c = 0; c < 3; ++c) {
    const double bg = 40 + 150 * s.uniform();
    std::fill(ch[c].data.begin(), ch[c].data.end(), bg);
  }
  for (int r = 0; r < 24; ++r) {
    const int x0 = static_cast<int>(s.below(w)), y0 = static_cast<int>(s.below(h));
    const int rw = 6 + static_cast<int>(s.below(w / 3)), rh = 6 + static_cast<int>(s.below(h / 3));
    double color[3];
    for (double& v : color) v = 20 + 215 * s.uniform();
    for (int y = y0; y < std::min(h, y0 + rh); ++y) {
      for (int x = x0; x < std::min(w, x0 + rw); ++x) {
        for (int c = 0; c < 3; ++c) ch[c].at(x, y) = color[c];
      }
    }
  }
  const double fx = 0.05 + 0.04 * content, fy = 0.03 * (content % 2 ? 1 : -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double grating = 18.0 * std::sin(2 * std::numbers::pi * (fx * x + fy * y));
      const double grain = 16.0 * (s.uniform() - 0.5);
      for (int c = 0; c < 3; ++c) ch[c].at(x, y) += grating + grain;
    }
  }
  return ch;
}

}  // namespace

FeatureVector extract_clip(const FrameSequence& video, const AudioSignal& audio,
                           const ExtractOptions& options) {
  const auto fv = video_features(video, options.stride);
  if (!options.audio_features) return assemble(video.width, video.height, fv, std::nullopt);
  const auto sampled = sample_frames(video, options.stride);
  const auto segments = segment_audio(audio, sampled);
  const auto fa = audio_features(segments, audio.sample_rate);
  return assemble(video.width, video.height, fv, std::span<const double>(fa.values));
}

FeatureTable extract_features(const Manifest& manifest, const ExtractOptions& options) {
  FeatureTable table;
  table.names = feature_names(options.audio_features);
  table.rows.resize(manifest.size());
  for (const auto& e : manifest.entries) table.ids.push_back(e.id);
  for_each_entry(manifest, options.threads, [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    const auto video = load_y4m(e.video);
    AudioSignal audio;
    if (options.audio_features) audio = load_wav(e.audio);
    table.rows[i] = extract_clip(video, audio, options).values;
  });
  return table;
}

std::vector<AttributeRow> manifest_attributes(const Manifest& manifest, int stride, unsigned threads) {
  std::vector<AttributeRow> rows(manifest.size());
  for_each_entry(manifest, threads, [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    rows[i].id = e.id;
    rows[i].attributes = compute_attributes(load_y4m(e.video), load_wav(e.audio), stride);
  });
  return rows;
}

void write_attributes_csv(const std::filesystem::path& path, const std::vector<AttributeRow>& rows) {
  csv::Row header{"id"};
  for (const char* n : AttributeVector::kNames) header.emplace_back(n);
  std::vector<csv::Row> out{header};
  for (const auto& r : rows) {
    csv::Row row{r.id};
    for (double v : r.attributes.values()) row.push_back(csv::format_double(v));
    out.push_back(std::move(row));
  }
  csv::write(path, out);
}

void write_histogram_csv(const std::filesystem::path& path, const std::vector<HistogramBin>& bins) {
  std::vector<csv::Row> out{{"bin_left", "bin_right", "count"}};
  for (const auto& b : bins) {
    out.push_back({csv::format_double(b.left), csv::format_double(b.right), std::to_string(b.count)});
  }
  csv::write(path, out);
}

std::vector<std::filesystem::path> write_attribute_histograms(
    const std::filesystem::path& out_csv, const std::vector<AttributeRow>& rows, std::size_t bins) {
  std::vector<std::filesystem::path> written;
  const auto stem = out_csv.stem().string();
  for (std::size_t k = 0; k < AttributeVector::kNames.size(); ++k) {
    std::vector<double> values;
    for (const auto& r : rows) values.push_back(r.attributes.values()[k]);
    auto path = out_csv.parent_path() / (stem + "_hist_" + AttributeVector::kNames[k] + ".csv");
    write_histogram_csv(path, histogram(values, bins));
    written.push_back(std::move(path));
  }
  return written;
}

Manifest synthesize_benchmark(const std::filesystem::path& dir, const SynthOptions& o) {
  if (o.contents < 1 || o.blur_levels < 1 || o.noise_levels < 1 || o.seconds <= 0 ||
      o.width < 16 || o.height < 16 || o.frame_rate < 1 || o.sample_rate < 8000) {
    Fail(ErrorCode::kInvalidArgument, "invalid synthetic benchmark options");
  }
  std::filesystem::create_directories(dir);
  const int n_frames = static_cast<int>(std::lround(o.seconds * o.frame_rate));
  const auto n_samples = static_cast<std::size_t>(std::llround(o.seconds * o.sample_rate));
  constexpr double kBlurStep = 0.6;
  constexpr double kNoiseFloor = 0.003;
  constexpr double kSensorNoise = 1.5;
  constexpr double kNoiseStd[] = {0.0, 0.01, 0.03, 0.08, 0.2, 0.35, 0.5};
  constexpr double kMosTop = 85.0;
  const double mos_step = 60.0 / std::max(1, o.blur_levels - 1 + o.noise_levels - 1);

  Manifest m;
  rng::CounterStream mos_noise(rng::at(o.seed, 7));
  for (int c = 0; c < o.contents; ++c) {
    const auto texture = synth_texture(c, o.width + n_frames, o.height, o.seed);
    // Harmonic tone with a syllable-rate envelope.
    std::vector<double> clean(n_samples);
    const double f0 = 180.0 + 90.0 * c, env_hz = 2.5 + 0.5 * c;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double t = static_cast<double>(i) / o.sample_rate;
      double v = 0.0;
      for (int hno = 1; hno <= 6; ++hno) v += std::sin(2 * std::numbers::pi * f0 * hno * t) / hno;
      clean[i] = 0.25 * v * (0.55 + 0.45 * std::sin(2 * std::numbers::pi * env_hz * t));
    }
    for (int b = 0; b < o.blur_levels; ++b) {
      FrameSequence seq;
      seq.width = o.width;
      seq.height = o.height;
      seq.frame_rate = o.frame_rate;
      rng::CounterStream sensor(rng::at(o.seed, 50000 + static_cast<std::uint64_t>(c * 100 + b)));
      for (int f = 0; f < n_frames; ++f) {
        RgbFrame frame(o.width, o.height);
        std::vector<std::uint8_t>* planes[3] = {&frame.r, &frame.g, &frame.b};
        for (int ch = 0; ch < 3; ++ch) {
          GrayFrame crop(o.width, o.height);
          for (int y = 0; y < o.height; ++y) {
            for (int x = 0; x < o.width; ++x) crop.at(x, y) = texture[ch].at(x + f, y);
          }
          const GrayFrame blurred = dsp::gaussian_blur(crop, kBlurStep * (b + 1));
          for (std::size_t i = 0; i < blurred.data.size(); ++i) {
            const double v = blurred.data[i] + kSensorNoise * normal(sensor);
            (*planes[ch])[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
          }
        }
        seq.timestamps.push_back(static_cast<double>(f) / o.frame_rate);
        seq.frames.push_back(std::move(frame));
      }
      for (int a = 0; a < o.noise_levels; ++a) {
        const std::string id = "c" + std::to_string(c) + "_b" + std::to_string(b) + "_n" + std::to_string(a);
        const double noise_std = kNoiseStd[std::min<std::size_t>(a, std::size(kNoiseStd) - 1)];
        rng::CounterStream noise(rng::at(o.seed, 100000 + static_cast<std::uint64_t>(c * 100 + a)));
        std::vector<double> audio(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) audio[i] = clean[i] + std::hypot(kNoiseFloor, noise_std) * normal(noise);
        double peak = 0.0;
        for (double v : audio) peak = std::max(peak, std::abs(v));
        if (peak > 1.0) {
          for (double& v : audio) v /= peak;
        }
        write_y4m(dir / (id + ".y4m"), seq);
        write_wav_pcm16(dir / (id + ".wav"), audio, 1, o.sample_rate);

        ManifestEntry e;
        e.id = id;
        e.video = (dir / (id + ".y4m")).string();
        e.audio = (dir / (id + ".wav")).string();
        e.group = id;
        e.mos = std::clamp(kMosTop - mos_step * (b + a) + o.mos_noise * normal(mos_noise), 0.0, 100.0);
        m.entries.push_back(std::move(e));
      }
    }
  }
  m.kind = infer_kind(m.entries);

  // The manifest on disk uses paths relative to its own directory.
  Manifest on_disk = m;
  for (auto& e : on_disk.entries) {
    e.video = e.id + ".y4m";
    e.audio = e.id + ".wav";
  }
  write_manifest(dir / "manifest.csv", on_disk);
  return m;
}

}  // namespace uavqa
