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

// Subjective score processing: per-subject z-scores rescaled to [0, 100],
// BT.500 observer screening and MOS.

#ifndef UAVQA_SUBJECTIVE_HPP_
#define UAVQA_SUBJECTIVE_HPP_

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace uavqa {

// Subjects x sequences; NaN marks a missing rating.
struct ScoreMatrix {
  std::vector<std::string> subjects;
  std::vector<std::string> sequences;
  std::vector<double> scores;  // row-major by subject
  double lower = 0.0;
  double upper = 100.0;

  std::size_t n_subjects() const { return subjects.size(); }
  std::size_t n_sequences() const { return sequences.size(); }
  double& at(std::size_t s, std::size_t q) { return scores[s * sequences.size() + q]; }
  double at(std::size_t s, std::size_t q) const { return scores[s * sequences.size() + q]; }
  bool missing(std::size_t s, std::size_t q) const { return std::isnan(at(s, q)); }
};

struct NormalizedScores {
  ScoreMatrix scores;  // on [0, 100]
  std::size_t clipped = 0;
};

// z = (r - mean_s) / std_s per subject (population std), mapped to
// 100 (z + 3) / 6 and clipped to [0, 100].
NormalizedScores zscore_normalize(const ScoreMatrix& raw);

// BT.500 observer screening; true marks a rejected subject.
std::vector<bool> screen_subjects(const ScoreMatrix& scores);

struct MosTable {
  std::vector<std::string> ids;
  std::vector<double> mos;
  std::vector<std::size_t> counts;
  std::vector<std::string> rejected_subjects;
};

MosTable compute_mos(const ScoreMatrix& normalized, const std::vector<bool>& rejected);

// Header row: a label cell then sequence ids; each following row: subject
// id then scores, blank for missing.
ScoreMatrix read_score_csv(const std::filesystem::path& path, double lower = 0.0,
                           double upper = 100.0);
void write_mos_csv(const std::filesystem::path& path, const MosTable& table);
void write_rejected_subjects(const std::filesystem::path& path, const MosTable& table);

}  // namespace uavqa

#endif  // UAVQA_SUBJECTIVE_HPP_
