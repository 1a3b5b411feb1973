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
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "csv.hpp"
#include "test_support.hpp"
#include "uavqa/error.hpp"
#include "uavqa/pipeline.hpp"

using namespace uavqa;

namespace {

SynthOptions tiny() {
  SynthOptions o;
  o.contents = 2;
  o.blur_levels = 2;
  o.noise_levels = 2;
  o.seconds = 1.5;
  o.width = 64;
  o.height = 48;
  o.seed = 4;
  return o;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("synthetic benchmark layout") {
  const auto dir = uavqa::testing::scratch_dir("synth_layout");
  const auto m = synthesize_benchmark(dir, tiny());
  REQUIRE(m.size() == 8);
  CHECK(m.kind == DatabaseKind::kInTheWild);
  for (const auto& e : m.entries) {
    CHECK(std::filesystem::exists(e.video));
    CHECK(std::filesystem::exists(e.audio));
    CHECK(e.mos >= 0.0);
    CHECK(e.mos <= 100.0);
    const auto v = load_y4m(e.video);
    CHECK(v.width == 64);
    CHECK(v.height == 48);
    CHECK(v.frames.size() == 15);
    const auto a = load_wav(e.audio);
    CHECK(a.sample_rate == 16000);
    CHECK(a.samples.size() == 24000);
  }
  // The manifest on disk is relative and resolves back to the same files.
  const auto rows = csv::read(dir / "manifest.csv");
  CHECK(rows[1][1] == m.entries[0].id + ".y4m");
  const auto back = read_manifest(dir / "manifest.csv");
  CHECK(back.entries[3].video == m.entries[3].video);
  CHECK(back.entries[3].mos == doctest::Approx(m.entries[3].mos).epsilon(1e-15));
}

TEST_CASE("pseudo-MOS falls with degradation when noise-free") {
  auto o = tiny();
  o.contents = 1;
  o.blur_levels = 3;
  o.noise_levels = 3;
  o.seconds = 0.5;
  o.mos_noise = 0.0;
  const auto m = synthesize_benchmark(uavqa::testing::scratch_dir("synth_mos"), o);
  // ids are c0_b{b}_n{a}; MOS depends only on b + a.
  for (const auto& e : m.entries) {
    const int b = e.id[4] - '0', a = e.id[7] - '0';
    CHECK(e.mos == doctest::Approx(85.0 - 15.0 * (a + b)));
  }
}

TEST_CASE("synthesis is deterministic in its seed") {
  auto o = tiny();
  o.contents = 1;
  o.blur_levels = 1;
  o.seconds = 0.5;
  const auto a = synthesize_benchmark(uavqa::testing::scratch_dir("synth_a"), o);
  const auto b = synthesize_benchmark(uavqa::testing::scratch_dir("synth_b"), o);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries[i].mos == b.entries[i].mos);
    CHECK(load_y4m(a.entries[i].video).frames[2].g == load_y4m(b.entries[i].video).frames[2].g);
    CHECK(load_wav(a.entries[i].audio).samples == load_wav(b.entries[i].audio).samples);
  }
  o.seed = 5;
  const auto c = synthesize_benchmark(uavqa::testing::scratch_dir("synth_c"), o);
  CHECK(load_wav(c.entries[0].audio).samples != load_wav(a.entries[0].audio).samples);
}

TEST_CASE("synthesis rejects bad options") {
  auto o = tiny();
  o.width = 8;
  CHECK_THROWS_AS(synthesize_benchmark(uavqa::testing::scratch_dir("synth_bad"), o), Error);
  o = tiny();
  o.contents = 0;
  CHECK_THROWS_AS(synthesize_benchmark(uavqa::testing::scratch_dir("synth_bad"), o), Error);
}

TEST_CASE("extraction shapes and thread independence") {
  const auto dir = uavqa::testing::scratch_dir("extract");
  const auto m = synthesize_benchmark(dir, tiny());
  ExtractOptions with;
  with.threads = 1;
  const auto a = extract_features(m, with);
  CHECK(a.dims() == 64);
  CHECK(a.has_audio());
  CHECK(a.rows.size() == m.size());
  CHECK(a.ids[5] == m.entries[5].id);
  for (const auto& row : a.rows) {
    CHECK(row[0] == 64.0);
    CHECK(row[1] == 48.0);
    for (double v : row) CHECK(std::isfinite(v));
  }
  with.threads = 3;
  const auto par = extract_features(m, with);
  CHECK(par.rows == a.rows);

  ExtractOptions without;
  without.audio_features = false;
  const auto b = extract_features(m, without);
  CHECK(b.dims() == 38);
  CHECK_FALSE(b.has_audio());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(std::equal(b.rows[i].begin(), b.rows[i].end(), a.rows[i].begin()));
  }

  write_feature_table(dir / "f.csv", a);
  const auto back = read_feature_table(dir / "f.csv");
  CHECK(back.rows == a.rows);
  CHECK(back.names == a.names);
}

TEST_CASE("extraction without audio ignores the audio column") {
  const auto dir = uavqa::testing::scratch_dir("extract_noaudio");
  auto m = synthesize_benchmark(dir, tiny());
  for (auto& e : m.entries) e.audio = (dir / "missing.wav").string();
  ExtractOptions o;
  o.audio_features = false;
  CHECK(extract_features(m, o).dims() == 38);
  o.audio_features = true;
  try {
    extract_features(m, o);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
    CHECK(std::string(e.what()).find(m.entries[0].id) == 0);
  }
}

TEST_CASE("attribute rows and histograms") {
  const auto dir = uavqa::testing::scratch_dir("attrs");
  const auto m = synthesize_benchmark(dir, tiny());
  const auto rows = manifest_attributes(m, 10, 2);
  REQUIRE(rows.size() == m.size());
  for (const auto& r : rows) {
    for (double v : r.attributes.values()) CHECK(std::isfinite(v));
  }
  write_attributes_csv(dir / "attrs.csv", rows);
  const auto table = csv::read(dir / "attrs.csv");
  CHECK(table.size() == m.size() + 1);
  CHECK(table[0].size() == AttributeVector::kNames.size() + 1);
  CHECK(table[2][0] == m.entries[1].id);

  const auto hists = write_attribute_histograms(dir / "attrs.csv", rows, 4);
  CHECK(hists.size() == AttributeVector::kNames.size());
  for (const auto& p : hists) {
    const auto h = csv::read(p);
    REQUIRE(h.size() == 5);
    long total = 0;
    for (std::size_t i = 1; i < h.size(); ++i) total += std::stol(h[i][2]);
    CHECK(total == static_cast<long>(m.size()));
  }
  CHECK(std::filesystem::exists(dir / "attrs_hist_cpbd.csv"));
}

}  // TEST_SUITE
