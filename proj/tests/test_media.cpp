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
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "uavqa/error.hpp"
#include "uavqa/media.hpp"

using namespace uavqa;
using uavqa::testing::Random;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

// Y4M stream with every frame filled from the given planes.
std::vector<std::uint8_t> y4m(const std::string& header, int frames, const std::vector<std::uint8_t>& payload) {
  auto out = bytes_of(header + "\n");
  for (int f = 0; f < frames; ++f) {
    const auto tag = bytes_of("FRAME\n");
    out.insert(out.end(), tag.begin(), tag.end());
    out.insert(out.end(), payload.begin(), payload.end());
  }
  return out;
}

void le(std::vector<std::uint8_t>& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Hand-assembled RIFF/WAVE with an extra chunk ahead of "data".
std::vector<std::uint8_t> wav(std::uint16_t format, int channels, int rate, int bits,
                              const std::vector<std::uint8_t>& data, bool junk_chunk = false) {
  std::vector<std::uint8_t> out;
  auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  const std::uint32_t junk = junk_chunk ? 8 + 6 : 0;
  tag("RIFF");
  le(out, 36 + junk + static_cast<std::uint32_t>(data.size()), 4);
  tag("WAVE");
  tag("fmt ");
  le(out, 16, 4);
  le(out, format, 2);
  le(out, channels, 2);
  le(out, rate, 4);
  le(out, rate * channels * bits / 8, 4);
  le(out, channels * bits / 8, 2);
  le(out, bits, 2);
  if (junk_chunk) {
    tag("LIST");
    le(out, 6, 4);
    for (int i = 0; i < 6; ++i) out.push_back('x');
  }
  tag("data");
  le(out, static_cast<std::uint32_t>(data.size()), 4);
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

std::vector<std::uint8_t> pcm16(const std::vector<int>& v) {
  std::vector<std::uint8_t> out;
  for (int s : v) le(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(s)), 2);
  return out;
}

int expect_error(auto fn) {
  try {
    fn();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return 0;
}

std::uint8_t hand_clamp(double v) {
  return static_cast<std::uint8_t>(std::lround(std::min(255.0, std::max(0.0, v))));
}

}  // namespace

TEST_SUITE("media") {

TEST_CASE("y4m header echo for an 8-frame 960x720 clip") {
  const std::vector<std::uint8_t> payload(960 * 720 * 3 / 2, 128);
  const auto seq = parse_y4m(y4m("YUV4MPEG2 W960 H720 F30:1 Ip A1:1 C420jpeg", 8, payload));
  CHECK(seq.size() == 8);
  CHECK(seq.width == 960);
  CHECK(seq.height == 720);
  CHECK(seq.frame_rate == doctest::Approx(30.0));
  REQUIRE(seq.timestamps.size() == 8);
  for (std::size_t i = 1; i < 8; ++i) CHECK(seq.timestamps[i] > seq.timestamps[i - 1]);
  CHECK(seq.timestamps[7] == doctest::Approx(7.0 / 30.0));
}

TEST_CASE("y4m with no frames is rejected") {
  CHECK(expect_error([] { parse_y4m(bytes_of("YUV4MPEG2 W4 H4 F25:1 C444\n")); }) ==
        static_cast<int>(ErrorCode::kParse));
}

TEST_CASE("neutral yuv decodes to mid gray") {
  const std::vector<std::uint8_t> payload(4 * 4 * 3, 128);
  const auto seq = parse_y4m(y4m("YUV4MPEG2 W4 H4 F25:1 C444", 1, payload));
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(std::abs(seq.frames[0].r[i] - 128) <= 1);
    CHECK(std::abs(seq.frames[0].g[i] - 128) <= 1);
    CHECK(std::abs(seq.frames[0].b[i] - 128) <= 1);
  }
}

TEST_CASE("444 pixels match a hand inversion of full-range BT.601") {
  Random rng(11);
  const int w = 5, h = 3, n = w * h;
  std::vector<std::uint8_t> payload(3 * n);
  for (auto& v : payload) v = static_cast<std::uint8_t>(rng.below(256));
  const auto seq = parse_y4m(y4m("YUV4MPEG2 W5 H3 F24:1 C444", 1, payload));
  for (int i = 0; i < n; ++i) {
    const double y = payload[i], cb = payload[n + i] - 128.0, cr = payload[2 * n + i] - 128.0;
    CHECK(std::abs(seq.frames[0].r[i] - hand_clamp(y + 1.402 * cr)) <= 1);
    CHECK(std::abs(seq.frames[0].g[i] - hand_clamp(y - 0.344136 * cb - 0.714136 * cr)) <= 1);
    CHECK(std::abs(seq.frames[0].b[i] - hand_clamp(y + 1.772 * cb)) <= 1);
  }
}

TEST_CASE("420 chroma is shared by each 2x2 luma block") {
  // 4x2 luma, 2x1 chroma: left block blue-ish, right block red-ish.
  std::vector<std::uint8_t> payload = {100, 100, 100, 100, 100, 100, 100, 100,
                                       200, 128,   // U
                                       128, 200};  // V
  const auto seq = parse_y4m(y4m("YUV4MPEG2 W4 H2 F25:1 C420mpeg2", 1, payload));
  const auto& f = seq.frames[0];
  for (int i : {0, 1, 4, 5}) CHECK(f.b[i] > f.r[i]);
  for (int i : {2, 3, 6, 7}) CHECK(f.r[i] > f.b[i]);
}

TEST_CASE("y4m error paths") {
  const auto parse = static_cast<int>(ErrorCode::kParse);
  CHECK(expect_error([] { parse_y4m(bytes_of("YUV4MPEG2 W4 H4 F25:1 C422\nFRAME\n")); }) == parse);
  CHECK(expect_error([] { parse_y4m(bytes_of("YUV4MPEG2 H4 F25:1\nFRAME\n")); }) == parse);
  CHECK(expect_error([] { parse_y4m(bytes_of("NOTY4M W4 H4 F25:1\n")); }) == parse);
  const std::vector<std::uint8_t> short_payload(4 * 4 * 3 - 1, 0);
  CHECK(expect_error([&] { parse_y4m(y4m("YUV4MPEG2 W4 H4 F25:1 C444", 1, short_payload)); }) == parse);
}

TEST_CASE("y4m write then load round trip at 444 is lossless within one code") {
  Random rng(3);
  std::vector<RgbFrame> frames;
  for (int i = 0; i < 3; ++i) frames.push_back(testing::random_rgb(6, 4, rng));
  const auto seq = testing::make_sequence(frames, 12.5);
  const auto dir = testing::scratch_dir("y4m_roundtrip");
  write_y4m(dir / "a.y4m", seq);
  const auto back = load_y4m(dir / "a.y4m");
  CHECK(back.size() == 3);
  CHECK(back.frame_rate == doctest::Approx(12.5));
  int worst = 0;
  for (std::size_t f = 0; f < 3; ++f) {
    for (std::size_t i = 0; i < 24; ++i) {
      worst = std::max({worst, std::abs(back.frames[f].r[i] - seq.frames[f].r[i]),
                        std::abs(back.frames[f].g[i] - seq.frames[f].g[i]),
                        std::abs(back.frames[f].b[i] - seq.frames[f].b[i])});
    }
  }
  // Quantizing YUV costs at most a couple of codes per channel.
  CHECK(worst <= 3);
}

TEST_CASE("constant 16384 pcm normalizes to all ones") {
  const auto sig = parse_wav(wav(1, 1, 8000, 16, pcm16(std::vector<int>(100, 16384))));
  CHECK_FALSE(sig.silent);
  CHECK(sig.samples.size() == 100);
  for (double v : sig.samples) CHECK(v == 1.0);
}

TEST_CASE("stereo channels that cancel give silence with the flag raised") {
  std::vector<int> inter;
  for (int i = 0; i < 50; ++i) {
    const int a = (i * 377) % 20000 - 10000;
    inter.push_back(a);
    inter.push_back(-a);
  }
  const auto sig = parse_wav(wav(1, 2, 8000, 16, pcm16(inter)));
  CHECK(sig.silent);
  CHECK(sig.samples.size() == 50);
  for (double v : sig.samples) CHECK(v == 0.0);
}

TEST_CASE("8 s at 44100 Hz has 352800 samples") {
  const auto sig = parse_wav(wav(1, 1, 44100, 16, pcm16(std::vector<int>(352800, 7))));
  CHECK(sig.samples.size() == 352800);
  CHECK(sig.duration() == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("float32 stereo is downmixed by mean then peak normalized") {
  std::vector<std::uint8_t> data;
  const float vals[] = {0.5f, 0.1f, -0.2f, -0.2f, 0.0f, 0.1f};  // frames: .3, -.2, .05
  for (float f : vals) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    le(data, u, 4);
  }
  const auto sig = parse_wav(wav(3, 2, 16000, 32, data, true));
  REQUIRE(sig.samples.size() == 3);
  const double m0 = (0.5f + 0.1f) / 2.0, m1 = -0.2f, m2 = 0.1f / 2.0;
  CHECK(sig.samples[0] == doctest::Approx(1.0));
  CHECK(sig.samples[1] == doctest::Approx(m1 / m0));
  CHECK(sig.samples[2] == doctest::Approx(m2 / m0));
}

TEST_CASE("wav error paths") {
  const auto parse = static_cast<int>(ErrorCode::kParse);
  CHECK(expect_error([] { parse_wav(wav(1, 1, 8000, 16, {})); }) == parse);
  CHECK(expect_error([] { parse_wav(wav(2, 1, 8000, 4, {1, 2, 3, 4})); }) == parse);  // ADPCM
  CHECK(expect_error([] { parse_wav(wav(1, 1, 8000, 8, {1, 2, 3, 4})); }) == parse);  // 8-bit
  CHECK(expect_error([] { parse_wav(bytes_of("RIFX....WAVE")); }) == parse);
}

TEST_CASE("wav writers round trip through the reader") {
  const auto dir = testing::scratch_dir("wav_roundtrip");
  const std::vector<double> x = {0.25, -0.5, 0.125, 0.0};
  write_wav_float32(dir / "f.wav", x, 1, 22050);
  const auto f = load_wav(dir / "f.wav");
  CHECK(f.sample_rate == 22050);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(f.samples[i] == doctest::Approx(x[i] / 0.5));
  write_wav_pcm16(dir / "p.wav", x, 2, 8000);
  const auto p = load_wav(dir / "p.wav");
  // Frames (0.25, -0.5) and (0.125, 0) downmix to -0.125 and 0.0625.
  REQUIRE(p.samples.size() == 2);
  CHECK(p.samples[0] == doctest::Approx(-1.0));
  CHECK(p.samples[1] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("sample_frames keeps every stride-th frame") {
  std::vector<RgbFrame> frames;
  for (int i = 0; i < 240; ++i) frames.push_back(testing::solid_rgb(2, 2, static_cast<std::uint8_t>(i), 0, 0));
  const auto seq = testing::make_sequence(frames, 24);
  const auto s10 = sample_frames(seq, 10);
  CHECK(s10.size() == 24);
  for (std::size_t k = 0; k < s10.size(); ++k) {
    CHECK(s10.frames[k].r[0] == 10 * k);
    CHECK(s10.timestamps[k] == seq.timestamps[10 * k]);
  }
  const auto s1 = sample_frames(seq, 1);
  CHECK(s1.size() == 240);
  CHECK(s1.timestamps == seq.timestamps);

  std::vector<RgbFrame> seven(frames.begin(), frames.begin() + 7);
  const auto one = sample_frames(testing::make_sequence(seven, 24), 10);
  CHECK(one.size() == 1);
  CHECK(one.frames[0].r[0] == 0);
  CHECK_THROWS_AS(sample_frames(seq, 0), Error);
}

TEST_CASE("property: sample_frames yields ceil(len / stride) frames") {
  Random rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int len = 1 + static_cast<int>(rng.below(50));
    const int stride = 1 + static_cast<int>(rng.below(60));
    std::vector<RgbFrame> frames(len, RgbFrame(1, 1));
    const auto s = sample_frames(testing::make_sequence(frames, 10), stride);
    CHECK(s.size() == static_cast<std::size_t>((len + stride - 1) / stride));
  }
}

TEST_CASE("segments span midpoints between sampled timestamps") {
  AudioSignal a;
  a.sample_rate = 16000;
  a.samples.assign(8 * 16000, 0.1);
  std::vector<RgbFrame> frames(8, RgbFrame(1, 1));
  const auto sampled = testing::make_sequence(frames, 1.0);  // t = 0..7
  const auto segs = segment_audio(a, sampled);
  REQUIRE(segs.size() == 8);
  const double bounds[] = {0, 0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 8.0};
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(segs[k].start == doctest::Approx(bounds[k]));
    CHECK(segs[k].end == doctest::Approx(bounds[k + 1]));
    CHECK(segs[k].samples.size() ==
          static_cast<std::size_t>(std::llround((bounds[k + 1] - bounds[k]) * 16000)));
  }
}

TEST_CASE("single sampled frame gets all the audio") {
  AudioSignal a;
  a.sample_rate = 8000;
  a.samples.assign(12345, 0.0);
  const auto segs = segment_audio(a, testing::make_sequence({RgbFrame(1, 1)}, 25));
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].samples.size() == 12345);
  CHECK(segs[0].start == 0.0);
  CHECK(segs[0].end == doctest::Approx(a.duration()));
}

TEST_CASE("segment_audio errors") {
  AudioSignal a;
  a.sample_rate = 8000;
  a.samples.assign(800, 0.0);  // 0.1 s
  FrameSequence empty;
  CHECK_THROWS_AS(segment_audio(a, empty), Error);
  std::vector<RgbFrame> frames(5, RgbFrame(1, 1));
  CHECK_THROWS_AS(segment_audio(a, testing::make_sequence(frames, 10)), Error);  // last t = 0.4
}

TEST_CASE("property: segments are ordered, disjoint and tile the signal") {
  Random rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const double fs = 8000 + 1000 * static_cast<double>(rng.below(40));
    const int n_frames = 1 + static_cast<int>(rng.below(80));
    const double fps = 5 + static_cast<double>(rng.below(56));
    const int stride = 1 + static_cast<int>(rng.below(12));
    AudioSignal a;
    a.sample_rate = fs;
    const double dur = (n_frames - 1) / fps + rng.uniform(0.0, 0.5);
    a.samples.assign(static_cast<std::size_t>(std::ceil(dur * fs)) + 1, 0.0);
    std::vector<RgbFrame> frames(n_frames, RgbFrame(1, 1));
    const auto sampled = sample_frames(testing::make_sequence(frames, fps), stride);
    const auto segs = segment_audio(a, sampled);
    REQUIRE(segs.size() == sampled.size());
    std::size_t next = 0;
    for (const auto& s : segs) {
      CHECK(s.first_sample == next);
      CHECK(s.samples.data() == a.samples.data() + next);
      CHECK(s.end >= s.start);
      next += s.samples.size();
    }
    CHECK(next == a.samples.size());
    CHECK(segs.front().start == 0.0);
    CHECK(segs.back().end == doctest::Approx(a.duration()));
  }
}

TEST_CASE("grayscale uses BT.601 luma weights without quantization") {
  CHECK(to_grayscale(testing::solid_rgb(1, 1, 255, 255, 255)).data[0] == doctest::Approx(255.0));
  CHECK(to_grayscale(testing::solid_rgb(1, 1, 255, 0, 0)).data[0] == doctest::Approx(76.245));
  for (int x = 0; x < 256; ++x) {
    const auto v = static_cast<std::uint8_t>(x);
    CHECK(to_grayscale(testing::solid_rgb(1, 1, v, v, v)).data[0] == doctest::Approx(x));
  }
}

TEST_CASE("property: grayscale stays within [0, 255]") {
  Random rng(8);
  const auto g = to_grayscale(testing::random_rgb(64, 64, rng));
  for (double v : g.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 255.0 + 1e-9);
  }
}

TEST_CASE("property: non-silent wav peaks at exactly one") {
  Random rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> v(1 + rng.below(500));
    for (int& s : v) s = static_cast<int>(rng.below(65536)) - 32768;
    if (std::all_of(v.begin(), v.end(), [](int s) { return s == 0; })) v[0] = 1;
    const auto sig = parse_wav(wav(1, 1, 8000, 16, pcm16(v)));
    double peak = 0;
    for (double s : sig.samples) peak = std::max(peak, std::abs(s));
    CHECK(peak == 1.0);
  }
}

}  // TEST_SUITE
