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

#include "uavqa/subjective.hpp"

#include <algorithm>
#include <fstream>

#include "csv.hpp"
#include "uavqa/error.hpp"

namespace uavqa {

namespace {

constexpr double kRejectFraction = 0.05;
constexpr double kRejectBalance = 0.3;

}  // namespace

NormalizedScores zscore_normalize(const ScoreMatrix& raw) {
  NormalizedScores out{raw, 0};
  out.scores.lower = 0.0;
  out.scores.upper = 100.0;
  for (std::size_t s = 0; s < raw.n_subjects(); ++s) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t q = 0; q < raw.n_sequences(); ++q) {
      if (raw.missing(s, q)) continue;
      sum += raw.at(s, q);
      ++n;
    }
    double var = 0.0;
    const double mean = n ? sum / static_cast<double>(n) : 0.0;
    for (std::size_t q = 0; q < raw.n_sequences(); ++q) {
      if (!raw.missing(s, q)) var += (raw.at(s, q) - mean) * (raw.at(s, q) - mean);
    }
    const double sd = n ? std::sqrt(var / static_cast<double>(n)) : 0.0;
    if (!(sd > 0.0)) {
      Fail(ErrorCode::kDegenerate, "subject '" + raw.subjects[s] + "' has zero score variance");
    }
    for (std::size_t q = 0; q < raw.n_sequences(); ++q) {
      if (raw.missing(s, q)) continue;
      const double z = (raw.at(s, q) - mean) / sd;
      const double v = 100.0 * (z + 3.0) / 6.0;
      const double c = std::clamp(v, 0.0, 100.0);
      if (c != v) ++out.clipped;
      out.scores.at(s, q) = c;
    }
  }
  return out;
}

std::vector<bool> screen_subjects(const ScoreMatrix& scores) {
  const std::size_t ns = scores.n_subjects(), nq = scores.n_sequences();
  if (ns < 3) Fail(ErrorCode::kInvalidArgument, "screening needs at least three subjects");
  std::vector<std::size_t> p(ns, 0), q_count(ns, 0), rated(ns, 0);
  std::vector<double> col;
  for (std::size_t q = 0; q < nq; ++q) {
    col.clear();
    for (std::size_t s = 0; s < ns; ++s) {
      if (!scores.missing(s, q)) {
        col.push_back(scores.at(s, q));
        ++rated[s];
      }
    }
    if (col.size() < 2) continue;
    const double n = static_cast<double>(col.size());
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : col) {
      const double d = (v - mean) * (v - mean);
      m2 += d;
      m4 += d * d;
    }
    if (m2 == 0.0) continue;
    const double sd = std::sqrt(m2 / (n - 1.0));
    const double kurtosis = (m4 / n) / ((m2 / n) * (m2 / n));
    const double k = (kurtosis >= 2.0 && kurtosis <= 4.0) ? 2.0 : std::sqrt(20.0);
    for (std::size_t s = 0; s < ns; ++s) {
      if (scores.missing(s, q)) continue;
      const double v = scores.at(s, q);
      if (v >= mean + k * sd) ++p[s];
      if (v <= mean - k * sd) ++q_count[s];
    }
  }
  std::vector<bool> rejected(ns, false);
  for (std::size_t s = 0; s < ns; ++s) {
    const double pq = static_cast<double>(p[s] + q_count[s]);
    if (rated[s] == 0 || pq == 0.0) continue;
    const double diff = std::abs(static_cast<double>(p[s]) - static_cast<double>(q_count[s]));
    rejected[s] = pq / static_cast<double>(rated[s]) > kRejectFraction && diff / pq < kRejectBalance;
  }
  return rejected;
}

MosTable compute_mos(const ScoreMatrix& normalized, const std::vector<bool>& rejected) {
  if (rejected.size() != normalized.n_subjects()) {
    Fail(ErrorCode::kDimensionMismatch, "rejection mask does not match subject count");
  }
  MosTable t;
  for (std::size_t s = 0; s < rejected.size(); ++s) {
    if (rejected[s]) t.rejected_subjects.push_back(normalized.subjects[s]);
  }
  for (std::size_t q = 0; q < normalized.n_sequences(); ++q) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t s = 0; s < normalized.n_subjects(); ++s) {
      if (rejected[s] || normalized.missing(s, q)) continue;
      sum += normalized.at(s, q);
      ++n;
    }
    if (n == 0) {
      Fail(ErrorCode::kDegenerate, "sequence '" + normalized.sequences[q] + "' has no retained scores");
    }
    t.ids.push_back(normalized.sequences[q]);
    t.mos.push_back(sum / static_cast<double>(n));
    t.counts.push_back(n);
  }
  return t;
}

ScoreMatrix read_score_csv(const std::filesystem::path& path, double lower, double upper) {
  const auto rows = csv::read(path);
  if (rows.size() < 2 || rows[0].size() < 2) {
    Fail(ErrorCode::kParse, path.string() + ": need a header row and at least one subject row");
  }
  ScoreMatrix m;
  m.lower = lower;
  m.upper = upper;
  m.sequences.assign(rows[0].begin() + 1, rows[0].end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      Fail(ErrorCode::kParse, path.string() + ": subject row " + std::to_string(r) +
                                  " has the wrong number of fields");
    }
    m.subjects.push_back(rows[r][0]);
    for (std::size_t c = 1; c < rows[r].size(); ++c) {
      const double v = csv::parse_double(rows[r][c], /*allow_blank=*/true);
      if (!std::isnan(v) && (v < lower || v > upper)) {
        Fail(ErrorCode::kParse, path.string() + ": score " + rows[r][c] + " of subject '" +
                                    rows[r][0] + "' is outside [" + csv::format_double(lower) +
                                    ", " + csv::format_double(upper) + "]");
      }
      m.scores.push_back(v);
    }
  }
  return m;
}

void write_mos_csv(const std::filesystem::path& path, const MosTable& table) {
  std::vector<csv::Row> rows{{"id", "mos", "n"}};
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    rows.push_back({table.ids[i], csv::format_double(table.mos[i]), std::to_string(table.counts[i])});
  }
  csv::write(path, rows);
}

void write_rejected_subjects(const std::filesystem::path& path, const MosTable& table) {
  std::vector<csv::Row> rows{{"rejected_subject"}};
  for (const auto& s : table.rejected_subjects) rows.push_back({s});
  csv::write(path, rows);
}

}  // namespace uavqa
