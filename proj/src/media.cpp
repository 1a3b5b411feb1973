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

#include "uavqa/media.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "uavqa/error.hpp"

namespace uavqa {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "short write to " + path.string());
}

std::uint8_t clamp_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// ---------------------------------------------------------------- Y4M

struct Y4mHeader {
  int width = 0;
  int height = 0;
  double frame_rate = 0.0;
  ChromaFormat chroma = ChromaFormat::k420;
};

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    Fail(ErrorCode::kParse, std::string("malformed Y4M header: bad ") + what);
  }
  return v;
}

Y4mHeader parse_y4m_header(std::string_view line) {
  constexpr std::string_view kMagic = "YUV4MPEG2";
  if (line.substr(0, kMagic.size()) != kMagic) {
    Fail(ErrorCode::kParse, "malformed Y4M header: missing YUV4MPEG2 signature");
  }
  Y4mHeader h;
  bool have_rate = false;
  std::size_t pos = kMagic.size();
  while (pos < line.size()) {
    if (line[pos] == ' ') {
      ++pos;
      continue;
    }
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    std::string_view tok = line.substr(pos, end - pos);
    pos = end;
    const char tag = tok[0];
    std::string_view val = tok.substr(1);
    switch (tag) {
      case 'W': h.width = parse_int(val, "width"); break;
      case 'H': h.height = parse_int(val, "height"); break;
      case 'F': {
        auto colon = val.find(':');
        if (colon == std::string_view::npos) {
          Fail(ErrorCode::kParse, "malformed Y4M header: bad frame rate");
        }
        const int num = parse_int(val.substr(0, colon), "frame rate");
        const int den = parse_int(val.substr(colon + 1), "frame rate");
        if (num <= 0 || den <= 0) {
          Fail(ErrorCode::kParse, "malformed Y4M header: non-positive frame rate");
        }
        h.frame_rate = static_cast<double>(num) / den;
        have_rate = true;
        break;
      }
      case 'C': {
        if (val == "420" || val == "420jpeg" || val == "420paldv" || val == "420mpeg2") {
          h.chroma = ChromaFormat::k420;
        } else if (val == "444") {
          h.chroma = ChromaFormat::k444;
        } else {
          Fail(ErrorCode::kParse, "unsupported chroma subsampling: C" + std::string(val));
        }
        break;
      }
      default: break;  // I, A, X are informational
    }
  }
  if (h.width <= 0 || h.height <= 0) {
    Fail(ErrorCode::kParse, "malformed Y4M header: missing or invalid W/H");
  }
  if (!have_rate) Fail(ErrorCode::kParse, "malformed Y4M header: missing F tag");
  return h;
}

// ---------------------------------------------------------------- WAV

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back(v >> 8);
}
void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::vector<std::uint8_t> wav_header(std::uint16_t format, int channels, int rate,
                                     int bits, std::size_t data_bytes) {
  std::vector<std::uint8_t> out;
  put_tag(out, "RIFF");
  put32(out, static_cast<std::uint32_t>(36 + data_bytes));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, format);
  put16(out, static_cast<std::uint16_t>(channels));
  put32(out, static_cast<std::uint32_t>(rate));
  put32(out, static_cast<std::uint32_t>(rate * channels * bits / 8));
  put16(out, static_cast<std::uint16_t>(channels * bits / 8));
  put16(out, static_cast<std::uint16_t>(bits));
  put_tag(out, "data");
  put32(out, static_cast<std::uint32_t>(data_bytes));
  return out;
}

}  // namespace

void yuv_to_rgb(int y, int u, int v, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
  const double cb = u - 128.0, cr = v - 128.0;
  r = clamp_u8(y + 1.402 * cr);
  g = clamp_u8(y - 0.344136 * cb - 0.714136 * cr);
  b = clamp_u8(y + 1.772 * cb);
}

void rgb_to_yuv(int r, int g, int b, std::uint8_t& y, std::uint8_t& u, std::uint8_t& v) {
  y = clamp_u8(0.299 * r + 0.587 * g + 0.114 * b);
  u = clamp_u8(128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b);
  v = clamp_u8(128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b);
}

FrameSequence parse_y4m(std::span<const std::uint8_t> bytes) {
  const auto* begin = bytes.data();
  const auto* end = begin + bytes.size();
  const auto* nl = std::find(begin, end, static_cast<std::uint8_t>('\n'));
  if (nl == end) Fail(ErrorCode::kParse, "malformed Y4M header: no terminating newline");
  const Y4mHeader hdr = parse_y4m_header(
      std::string_view(reinterpret_cast<const char*>(begin), static_cast<std::size_t>(nl - begin)));

  const std::size_t w = hdr.width, h = hdr.height;
  const std::size_t cw = hdr.chroma == ChromaFormat::k420 ? (w + 1) / 2 : w;
  const std::size_t ch = hdr.chroma == ChromaFormat::k420 ? (h + 1) / 2 : h;
  const std::size_t luma = w * h, chroma = cw * ch;

  FrameSequence seq;
  seq.width = hdr.width;
  seq.height = hdr.height;
  seq.frame_rate = hdr.frame_rate;

  const auto* p = nl + 1;
  while (p < end) {
    constexpr std::string_view kFrame = "FRAME";
    if (static_cast<std::size_t>(end - p) < kFrame.size() ||
        std::memcmp(p, kFrame.data(), kFrame.size()) != 0) {
      Fail(ErrorCode::kParse, "malformed Y4M stream: expected FRAME marker at frame " +
                                  std::to_string(seq.frames.size()));
    }
    const auto* fnl = std::find(p, end, static_cast<std::uint8_t>('\n'));
    if (fnl == end) Fail(ErrorCode::kParse, "truncated Y4M frame header");
    p = fnl + 1;
    if (static_cast<std::size_t>(end - p) < luma + 2 * chroma) {
      Fail(ErrorCode::kParse, "truncated Y4M frame payload at frame " +
                                  std::to_string(seq.frames.size()));
    }
    const std::uint8_t* py = p;
    const std::uint8_t* pu = p + luma;
    const std::uint8_t* pv = pu + chroma;
    RgbFrame f(hdr.width, hdr.height);
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t cy = hdr.chroma == ChromaFormat::k420 ? y / 2 : y;
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t cx = hdr.chroma == ChromaFormat::k420 ? x / 2 : x;
        const std::size_t i = y * w + x;
        yuv_to_rgb(py[i], pu[cy * cw + cx], pv[cy * cw + cx], f.r[i], f.g[i], f.b[i]);
      }
    }
    p += luma + 2 * chroma;
    seq.timestamps.push_back(static_cast<double>(seq.frames.size()) / hdr.frame_rate);
    seq.frames.push_back(std::move(f));
  }
  if (seq.frames.empty()) Fail(ErrorCode::kParse, "Y4M stream has no frames");
  return seq;
}

FrameSequence load_y4m(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_y4m(bytes);
}

void write_y4m(const std::filesystem::path& path, const FrameSequence& seq, ChromaFormat chroma) {
  if (seq.frames.empty()) Fail(ErrorCode::kInvalidArgument, "cannot write an empty sequence");
  // Smallest of a few common denominators that represents the rate exactly;
  // otherwise a millisecond-resolution rational.
  long num = std::lround(seq.frame_rate * 1000.0);
  long den = 1000;
  for (long d : {1L, 2L, 4L, 5L, 8L, 10L, 100L, 1001L}) {
    const double scaled = seq.frame_rate * static_cast<double>(d);
    if (std::abs(scaled - std::round(scaled)) < 1e-6) {
      num = std::lround(scaled);
      den = d;
      break;
    }
  }
  std::string header = "YUV4MPEG2 W" + std::to_string(seq.width) + " H" +
                       std::to_string(seq.height) + " F" + std::to_string(num) + ":" +
                       std::to_string(den) + " Ip A1:1 " +
                       (chroma == ChromaFormat::k420 ? "C420jpeg" : "C444") + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::size_t w = seq.width, h = seq.height;
  const std::size_t cw = chroma == ChromaFormat::k420 ? (w + 1) / 2 : w;
  const std::size_t ch = chroma == ChromaFormat::k420 ? (h + 1) / 2 : h;
  for (const auto& f : seq.frames) {
    static constexpr std::string_view kFrame = "FRAME\n";
    out.insert(out.end(), kFrame.begin(), kFrame.end());
    std::vector<std::uint8_t> Y(w * h), U(w * h), V(w * h);
    for (std::size_t i = 0; i < w * h; ++i) rgb_to_yuv(f.r[i], f.g[i], f.b[i], Y[i], U[i], V[i]);
    out.insert(out.end(), Y.begin(), Y.end());
    if (chroma == ChromaFormat::k444) {
      out.insert(out.end(), U.begin(), U.end());
      out.insert(out.end(), V.begin(), V.end());
      continue;
    }
    // 4:2:0 by averaging each 2x2 block (clipped at the border).
    for (const auto* plane : {&U, &V}) {
      for (std::size_t cy = 0; cy < ch; ++cy) {
        for (std::size_t cx = 0; cx < cw; ++cx) {
          int sum = 0, n = 0;
          for (std::size_t dy = 0; dy < 2; ++dy) {
            for (std::size_t dx = 0; dx < 2; ++dx) {
              const std::size_t x = 2 * cx + dx, y = 2 * cy + dy;
              if (x < w && y < h) {
                sum += (*plane)[y * w + x];
                ++n;
              }
            }
          }
          out.push_back(static_cast<std::uint8_t>((sum + n / 2) / n));
        }
      }
    }
  }
  write_file(path, out);
}

AudioSignal parse_wav(std::span<const std::uint8_t> bytes) {
  const std::uint8_t* d = bytes.data();
  const std::size_t n = bytes.size();
  if (n < 12 || std::memcmp(d, "RIFF", 4) != 0 || std::memcmp(d + 8, "WAVE", 4) != 0) {
    Fail(ErrorCode::kParse, "not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false, have_data = false;
  std::size_t data_off = 0, data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const std::uint8_t* chunk = d + pos;
    const std::size_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > n) Fail(ErrorCode::kParse, "truncated fmt chunk");
      format = le16(d + body);
      channels = le16(d + body + 2);
      rate = le32(d + body + 4);
      block_align = le16(d + body + 12);
      bits = le16(d + body + 14);
      if (format == kFormatExtensible) {
        if (size < 40 || body + 40 > n) Fail(ErrorCode::kParse, "truncated extensible fmt chunk");
        // The sub-format GUID starts with the legacy format tag.
        format = le16(d + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data_off = body;
      data_len = std::min(size, n - body);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) Fail(ErrorCode::kParse, "WAV file has no fmt chunk");
  if (!have_data) Fail(ErrorCode::kParse, "WAV file has no data chunk");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    Fail(ErrorCode::kParse, "unsupported WAV codec (format " + std::to_string(format) + ", " +
                                std::to_string(bits) + " bits); need 16-bit PCM or 32-bit float");
  }
  if (channels < 1 || channels > 2) {
    Fail(ErrorCode::kParse, "unsupported channel count " + std::to_string(channels));
  }
  if (rate == 0) Fail(ErrorCode::kParse, "WAV sample rate is zero");
  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * bits / 8;
  if (block_align != 0 && block_align != frame_bytes) {
    Fail(ErrorCode::kParse, "inconsistent WAV block alignment");
  }
  const std::size_t frames = data_len / frame_bytes;
  if (frames == 0) Fail(ErrorCode::kParse, "WAV data chunk is empty");

  AudioSignal sig;
  sig.sample_rate = rate;
  sig.samples.resize(frames);
  const std::uint8_t* p = d + data_off;
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const std::uint8_t* s = p + i * frame_bytes + c * (bits / 8);
      if (pcm16) {
        acc += static_cast<std::int16_t>(le16(s)) / 32768.0;
      } else {
        const std::uint32_t u = le32(s);
        float f;
        std::memcpy(&f, &u, sizeof f);
        acc += static_cast<double>(f);
      }
    }
    sig.samples[i] = acc / channels;
  }

  double peak = 0.0;
  for (double v : sig.samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0 || !std::isfinite(peak)) {
    if (!std::isfinite(peak)) Fail(ErrorCode::kParse, "WAV contains non-finite samples");
    sig.silent = true;
  } else {
    for (double& v : sig.samples) v /= peak;
  }
  return sig;
}

AudioSignal load_wav(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_wav(bytes);
}

void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> interleaved,
                     int channels, int sample_rate) {
  auto out = wav_header(kFormatPcm, channels, sample_rate, 16, interleaved.size() * 2);
  for (double v : interleaved) {
    const long q = std::lround(std::clamp(v, -1.0, 1.0) * 32767.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  write_file(path, out);
}

void write_wav_float32(const std::filesystem::path& path, std::span<const double> interleaved,
                       int channels, int sample_rate) {
  auto out = wav_header(kFormatFloat, channels, sample_rate, 32, interleaved.size() * 4);
  for (double v : interleaved) {
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof u);
    put32(out, u);
  }
  write_file(path, out);
}

FrameSequence sample_frames(const FrameSequence& seq, int stride) {
  if (stride < 1) Fail(ErrorCode::kInvalidArgument, "stride must be >= 1");
  FrameSequence out;
  out.width = seq.width;
  out.height = seq.height;
  out.frame_rate = seq.frame_rate;
  for (std::size_t i = 0; i < seq.frames.size(); i += static_cast<std::size_t>(stride)) {
    out.frames.push_back(seq.frames[i]);
    out.timestamps.push_back(seq.timestamps[i]);
  }
  return out;
}

std::vector<AudioSegment> segment_audio(const AudioSignal& audio, const FrameSequence& sampled) {
  const auto& ts = sampled.timestamps;
  if (ts.empty()) Fail(ErrorCode::kInvalidArgument, "no sampled frames to align audio to");
  const double duration = audio.duration();
  if (ts.back() > duration) {
    Fail(ErrorCode::kInvalidArgument, "audio (" + std::to_string(duration) +
                                          " s) ends before the last sampled frame");
  }
  const std::size_t total = audio.samples.size();
  std::vector<double> bounds{0.0};
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) bounds.push_back(0.5 * (ts[k] + ts[k + 1]));
  bounds.push_back(duration);

  std::vector<AudioSegment> segs;
  segs.reserve(ts.size());
  std::size_t first = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::size_t last = k + 1 == ts.size()
                           ? total
                           : std::min<std::size_t>(
                                 total, static_cast<std::size_t>(std::llround(bounds[k + 1] *
                                                                               audio.sample_rate)));
    last = std::max(last, first);
    AudioSegment s;
    s.start = bounds[k];
    s.end = bounds[k + 1];
    s.first_sample = first;
    s.samples = std::span<const double>(audio.samples).subspan(first, last - first);
    segs.push_back(s);
    first = last;
  }
  return segs;
}

GrayFrame to_grayscale(const RgbFrame& frame) {
  GrayFrame g(frame.width, frame.height);
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    g.data[i] = 0.299 * frame.r[i] + 0.587 * frame.g[i] + 0.114 * frame.b[i];
  }
  return g;
}

}  // namespace uavqa
