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

// Agreement metrics and the repeated content-separated train/test protocol.

#ifndef UAVQA_EVALUATION_HPP_
#define UAVQA_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uavqa/features.hpp"
#include "uavqa/regressor.hpp"

namespace uavqa {

// Spearman correlation: Pearson correlation of mid-ranks.
double srcc(std::span<const double> a, std::span<const double> b);
double plcc(std::span<const double> a, std::span<const double> b);
double rmse(std::span<const double> a, std::span<const double> b);

// Average ranks (1-based), ties sharing the mean of their positions.
std::vector<double> midranks(std::span<const double> v);

enum class DatabaseKind { kInTheWild, kReferenceGrouped };

struct ManifestEntry {
  std::string id;
  std::string video;  // resolved against the manifest directory
  std::string audio;
  std::string group;
  double mos = 0.0;  // NaN when the column is blank
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  DatabaseKind kind = DatabaseKind::kInTheWild;

  std::size_t size() const { return entries.size(); }
  // Throws unless every entry carries a finite MOS.
  void require_mos() const;
};

// Columns `id,video,audio,group,mos`. A blank group defaults to the id.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
DatabaseKind infer_kind(const std::vector<ManifestEntry>& entries);

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

// Shuffles content groups with a seed-keyed counter RNG and fills the
// training side with whole groups until it holds at least `ratio` of the
// items.
Split content_split(const Manifest& manifest, double ratio, std::uint64_t seed);

// Per-repeat seed; independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t repeat);

struct RepeatResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double srcc = 0.0;
  double plcc = 0.0;
  double rmse = 0.0;
  Hyperparams hyperparams;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

struct MetricSummary {
  double mean = 0.0;
  double median = 0.0;
};

struct EvalReport {
  std::uint64_t master_seed = 0;
  double ratio = 0.8;
  std::size_t repeat_count = 0;
  std::size_t successes = 0;
  bool partial = false;  // some repeats failed
  std::vector<RepeatResult> repeats;
  MetricSummary srcc, plcc, rmse;
};

struct ProtocolOptions {
  std::size_t repeats = 100;
  double ratio = 0.8;
  std::uint64_t master_seed = 0;
  Grid grid = Grid::defaults();
  TrainOptions train;
  unsigned threads = 0;  // 0: hardware concurrency
};

EvalReport run_protocol(const Manifest& manifest, const FeatureTable& features,
                        const ProtocolOptions& options);

// Recomputes the aggregate block from the per-repeat rows.
void aggregate(EvalReport& report);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view json);

}  // namespace uavqa

#endif  // UAVQA_EVALUATION_HPP_
