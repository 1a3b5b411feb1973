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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_support.hpp"
#include "uavqa/error.hpp"
#include "uavqa/evaluation.hpp"

using namespace uavqa;
using uavqa::testing::Random;

namespace {

std::vector<double> random_vector(Random& rng, std::size_t n, bool ties) {
  std::vector<double> v(n);
  for (double& x : v) x = ties ? static_cast<double>(rng.below(7)) : rng.normal();
  return v;
}

Manifest singleton_manifest(std::size_t n) {
  Manifest m;
  for (std::size_t i = 0; i < n; ++i) {
    ManifestEntry e;
    e.id = "v" + std::to_string(i);
    e.group = e.id;
    e.mos = 0.0;
    m.entries.push_back(e);
  }
  m.kind = infer_kind(m.entries);
  return m;
}

// n items in groups of `per_group`.
Manifest grouped_manifest(std::size_t groups, std::size_t per_group) {
  Manifest m;
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t k = 0; k < per_group; ++k) {
      ManifestEntry e;
      e.id = "g" + std::to_string(g) + "_" + std::to_string(k);
      e.group = "g" + std::to_string(g);
      m.entries.push_back(e);
    }
  }
  m.kind = infer_kind(m.entries);
  return m;
}

// Items with MOS drawn uniformly and a one-column feature table holding
// either the MOS itself or unrelated noise.
struct Dataset {
  Manifest manifest;
  FeatureTable features;
};

Dataset scalar_dataset(std::size_t n, std::uint64_t seed, bool leak) {
  Random rng(seed);
  Dataset d;
  d.manifest = singleton_manifest(n);
  d.features.names = {"x"};
  for (auto& e : d.manifest.entries) {
    e.mos = 100.0 * rng.uniform();
    d.features.ids.push_back(e.id);
    d.features.rows.push_back({leak ? e.mos : rng.normal()});
  }
  return d;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("metric examples") {
  const std::vector<double> a{1, 2, 3}, b{3, 1, 2};
  CHECK(srcc(a, b) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(srcc(a, a) == doctest::Approx(1.0));
  const std::vector<double> p{1, 2, 3, 4}, q{1, 2, 3, 10};
  // Deviations (-1.5, -0.5, 0.5, 1.5) and (-3, -2, -1, 6): 14 / sqrt(5 * 50).
  CHECK(plcc(p, q) == doctest::Approx(14.0 / std::sqrt(250.0)).epsilon(1e-15));
  std::vector<double> affine, neg;
  for (double v : p) {
    affine.push_back(2 * v + 1);
    neg.push_back(-v);
  }
  CHECK(plcc(p, affine) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(plcc(p, neg) == doctest::Approx(-1.0).epsilon(1e-15));
  const std::vector<double> r{1, 2}, s{2, 4};
  CHECK(rmse(r, s) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
  CHECK(rmse(r, r) == 0.0);
  CHECK(rmse(r, s) == rmse(s, r));
}

TEST_CASE("metrics match definition oracles on random pairs") {
  Random rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool ties = trial % 2 == 1;
    const auto a = random_vector(rng, 100, ties);
    const auto b = random_vector(rng, 100, ties);
    worst = std::max(worst, std::abs(srcc(a, b) - oracle::spearman(a, b)));
    worst = std::max(worst, std::abs(plcc(a, b) - oracle::pearson(a, b)));
    worst = std::max(worst, std::abs(rmse(a, b) - oracle::rmse(a, b)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("midranks average tied positions") {
  const std::vector<double> v{5, 1, 5, 3, 5};
  const auto r = midranks(v);
  CHECK(r == std::vector<double>{4, 1, 4, 2, 4});
  CHECK(r == oracle::ranks(v));
}

TEST_CASE("srcc is invariant to increasing transforms") {
  Random rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_vector(rng, 50, t % 2);
    const auto b = random_vector(rng, 50, t % 2);
    std::vector<double> fb;
    for (double v : b) fb.push_back(std::exp(v) + v * v * v);
    CHECK(srcc(a, fb) == doctest::Approx(srcc(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("metric bounds") {
  Random rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_vector(rng, 20, t % 3 == 0);
    const auto b = random_vector(rng, 20, t % 3 == 0);
    const double s = srcc(a, b), p = plcc(a, b);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    CHECK(p >= -1.0);
    CHECK(p <= 1.0);
    CHECK(rmse(a, b) >= 0.0);
  }
}

TEST_CASE("metric errors") {
  const std::vector<double> c{2, 2, 2}, v{1, 2, 3}, shorter{1, 2};
  CHECK_THROWS_AS(srcc(c, v), Error);
  CHECK_THROWS_AS(plcc(v, c), Error);
  CHECK_THROWS_AS(plcc(shorter, shorter), Error);
  CHECK_THROWS_AS(rmse(v, shorter), Error);
  try {
    rmse(v, shorter);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
  try {
    plcc(v, c);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerate);
  }
}

TEST_CASE("in-the-wild split sizes") {
  const auto m = singleton_manifest(520);
  CHECK(m.kind == DatabaseKind::kInTheWild);
  const auto s = content_split(m, 0.8, 7);
  CHECK(s.train.size() == 416);
  CHECK(s.test.size() == 104);
}

TEST_CASE("split partitions ids and keeps groups together") {
  const auto m = grouped_manifest(13, 4);
  CHECK(m.kind == DatabaseKind::kReferenceGrouped);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = content_split(m, 0.8, seed);
    std::set<std::string> train(s.train.begin(), s.train.end()), test(s.test.begin(), s.test.end());
    CHECK(train.size() + test.size() == m.size());
    std::set<std::string> train_groups, test_groups;
    for (const auto& e : m.entries) {
      const bool in_train = train.count(e.id) > 0;
      CHECK(in_train != (test.count(e.id) > 0));
      (in_train ? train_groups : test_groups).insert(e.group);
    }
    for (const auto& g : train_groups) CHECK(test_groups.count(g) == 0);
    CHECK(static_cast<double>(s.train.size()) / m.size() >= 0.8);
    CHECK_FALSE(s.test.empty());
  }
}

TEST_CASE("split determinism and seed sensitivity") {
  const auto m = singleton_manifest(60);
  const auto a = content_split(m, 0.8, 99);
  const auto b = content_split(m, 0.8, 99);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  std::set<std::vector<std::string>> distinct;
  for (std::uint64_t seed = 0; seed < 100; ++seed) distinct.insert(content_split(m, 0.8, seed).test);
  CHECK(distinct.size() == 100);
}

TEST_CASE("split errors") {
  auto one_group = grouped_manifest(1, 5);
  CHECK_THROWS_AS(content_split(one_group, 0.8, 1), Error);
  const auto m = singleton_manifest(10);
  CHECK_THROWS_AS(content_split(m, 0.0, 1), Error);
  CHECK_THROWS_AS(content_split(m, 1.0, 1), Error);
}

TEST_CASE("derived seeds differ per repeat and do not depend on order") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 1000; ++r) seen.insert(derive_seed(5, r));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(5, 17) == derive_seed(5, 17));
  CHECK(derive_seed(5, 17) != derive_seed(6, 17));
}

TEST_CASE("protocol with the target as its own feature") {
  const auto d = scalar_dataset(100, 3, /*leak=*/true);
  ProtocolOptions o;
  o.repeats = 20;
  o.master_seed = 11;
  const auto rep = run_protocol(d.manifest, d.features, o);
  CHECK(rep.successes == 20);
  CHECK_FALSE(rep.partial);
  CHECK(rep.srcc.mean >= 0.99);
  for (const auto& r : rep.repeats) {
    CHECK(r.n_train == 80);
    CHECK(r.n_test == 20);
  }
}

TEST_CASE("protocol on pure noise stays near zero correlation") {
  const auto d = scalar_dataset(200, 8, /*leak=*/false);
  ProtocolOptions o;
  o.repeats = 100;
  o.master_seed = 2;
  o.grid = Grid{{1.0, 10.0}, {0.25, 1.0}, {1.0}};
  const auto rep = run_protocol(d.manifest, d.features, o);
  REQUIRE(rep.successes == 100);
  double mean_abs = 0.0;
  for (const auto& r : rep.repeats) mean_abs += std::abs(r.srcc) / 100.0;
  CHECK(mean_abs <= 0.25);
  CHECK(std::abs(rep.srcc.mean) <= 0.25);
}

TEST_CASE("protocol determinism and report round trip") {
  const auto d = scalar_dataset(40, 5, /*leak=*/false);
  ProtocolOptions o;
  o.repeats = 6;
  o.master_seed = 77;
  o.grid = Grid{{1.0, 10.0}, {0.5}, {0.1, 1.0}};
  const auto a = run_protocol(d.manifest, d.features, o);
  o.threads = 1;
  const auto b = run_protocol(d.manifest, d.features, o);
  const auto ja = report_to_json(a);
  CHECK(ja == report_to_json(b));
  const auto back = report_from_json(ja);
  CHECK(report_to_json(back) == ja);
  for (std::size_t r = 0; r < a.repeats.size(); ++r) {
    CHECK(back.repeats[r].srcc == a.repeats[r].srcc);
    CHECK(back.repeats[r].seed == derive_seed(77, r));
    CHECK(back.repeats[r].hyperparams.c == a.repeats[r].hyperparams.c);
  }
}

TEST_CASE("aggregate is recomputable from repeat rows") {
  EvalReport rep;
  const double s[] = {0.5, 0.9, 0.7, 0.1};
  for (std::size_t i = 0; i < 4; ++i) {
    RepeatResult r;
    r.index = i;
    r.ok = i != 3;
    r.srcc = s[i];
    r.plcc = s[i] / 2;
    r.rmse = 10 * s[i];
    rep.repeats.push_back(r);
  }
  aggregate(rep);
  CHECK(rep.repeat_count == 4);
  CHECK(rep.successes == 3);
  CHECK(rep.partial);
  CHECK(rep.srcc.mean == doctest::Approx(0.7));
  CHECK(rep.srcc.median == doctest::Approx(0.7));
  CHECK(rep.rmse.mean == doctest::Approx(7.0));

  const auto from_json = report_from_json(report_to_json(rep));
  EvalReport again = from_json;
  aggregate(again);
  CHECK(report_to_json(again) == report_to_json(from_json));
}

TEST_CASE("failed repeats are recorded and flagged") {
  // Every split leaves one test item, which srcc rejects.
  const auto d = scalar_dataset(5, 1, /*leak=*/true);
  ProtocolOptions o;
  o.repeats = 3;
  o.grid = Grid{{1.0}, {1.0}, {0.1}};
  const auto rep = run_protocol(d.manifest, d.features, o);
  CHECK(rep.successes == 0);
  CHECK(rep.partial);
  for (const auto& r : rep.repeats) {
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.error.empty());
  }
}

TEST_CASE("protocol input errors") {
  auto d = scalar_dataset(20, 1, true);
  ProtocolOptions o;
  o.repeats = 0;
  CHECK_THROWS_AS(run_protocol(d.manifest, d.features, o), Error);
  o.repeats = 1;
  d.features.ids.pop_back();
  d.features.rows.pop_back();
  CHECK_THROWS_AS(run_protocol(d.manifest, d.features, o), Error);
  d = scalar_dataset(20, 1, true);
  d.manifest.entries[0].mos = std::nan("");
  CHECK_THROWS_AS(run_protocol(d.manifest, d.features, o), Error);
  CHECK_THROWS_AS(report_from_json("{\"format\": \"other\"}"), Error);
  CHECK_THROWS_AS(report_from_json("not json"), Error);
}

TEST_CASE("manifest io") {
  const auto dir = uavqa::testing::scratch_dir("manifest_io");
  {
    std::ofstream f(dir / "m.csv");
    f << "id,video,audio,group,mos\n"
      << "a,clips/a.y4m,clips/a.wav,,50\n"
      << "b,/abs/b.y4m,/abs/b.wav,ref1,\n"
      << "c,c.y4m,c.wav,ref1,12.5\n";
  }
  const auto m = read_manifest(dir / "m.csv");
  REQUIRE(m.size() == 3);
  CHECK(m.entries[0].group == "a");
  CHECK(m.entries[0].video == (dir / "clips/a.y4m").string());
  CHECK(m.entries[1].video == "/abs/b.y4m");
  CHECK(std::isnan(m.entries[1].mos));
  CHECK(m.entries[2].mos == 12.5);
  CHECK(m.kind == DatabaseKind::kReferenceGrouped);
  CHECK_THROWS_AS(m.require_mos(), Error);

  write_manifest(dir / "out.csv", m);
  const auto back = read_manifest(dir / "out.csv");
  CHECK(back.entries[0].video == m.entries[0].video);
  CHECK(back.entries[2].group == "ref1");
  CHECK(std::isnan(back.entries[1].mos));

  {
    std::ofstream f(dir / "dup.csv");
    f << "id,video,audio,group,mos\na,x,y,,1\na,x,y,,2\n";
  }
  CHECK_THROWS_AS(read_manifest(dir / "dup.csv"), Error);
  {
    std::ofstream f(dir / "cols.csv");
    f << "id,video,audio,mos\na,x,y,1\n";
  }
  CHECK_THROWS_AS(read_manifest(dir / "cols.csv"), Error);
  CHECK_THROWS_AS(read_manifest(dir / "missing.csv"), Error);
}

}  // TEST_SUITE
