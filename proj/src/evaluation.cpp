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

#include "uavqa/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "csv.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "uavqa/error.hpp"

namespace uavqa {

namespace {

constexpr const char* kReportFormat = "uavqa.eval_report";
constexpr int kReportVersion = 1;

void check_pair(std::span<const double> a, std::span<const double> b, std::size_t min_len,
                const char* what) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kDimensionMismatch, std::string(what) + ": inputs differ in length");
  }
  if (a.size() < min_len) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(what) + ": need at least " + std::to_string(min_len) + " values");
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> midranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    i = j + 1;
  }
  return rank;
}

double plcc(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, 3, "plcc");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) {
    Fail(ErrorCode::kDegenerate, "correlation is undefined for a constant input");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double srcc(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, 3, "srcc");
  const auto ra = midranks(a), rb = midranks(b);
  return plcc(ra, rb);
}

double rmse(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, 1, "rmse");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

void Manifest::require_mos() const {
  for (const auto& e : entries) {
    if (!std::isfinite(e.mos)) Fail(ErrorCode::kInvalidArgument, "manifest entry '" + e.id + "' has no MOS");
  }
}

DatabaseKind infer_kind(const std::vector<ManifestEntry>& entries) {
  const bool wild = std::all_of(entries.begin(), entries.end(),
                                [](const ManifestEntry& e) { return e.group == e.id; });
  return wild ? DatabaseKind::kInTheWild : DatabaseKind::kReferenceGrouped;
}

Manifest read_manifest(const std::filesystem::path& path) {
  const auto rows = csv::read(path);
  if (rows.empty()) Fail(ErrorCode::kParse, path.string() + ": empty manifest");
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < rows[0].size(); ++c) col[rows[0][c]] = c;
  for (const char* name : {"id", "video", "audio", "group", "mos"}) {
    if (!col.count(name)) {
      Fail(ErrorCode::kParse, path.string() + ": manifest is missing column '" + name + "'");
    }
  }
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    if (p.empty()) return p;
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (base / fp).string();
  };
  Manifest m;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) {
      Fail(ErrorCode::kParse, path.string() + ": row " + std::to_string(r) + " has the wrong number of fields");
    }
    ManifestEntry e;
    e.id = row[col["id"]];
    if (e.id.empty()) Fail(ErrorCode::kParse, path.string() + ": empty id on row " + std::to_string(r));
    if (!seen.insert(e.id).second) Fail(ErrorCode::kParse, path.string() + ": duplicate id '" + e.id + "'");
    e.video = resolve(row[col["video"]]);
    e.audio = resolve(row[col["audio"]]);
    e.group = row[col["group"]].empty() ? e.id : row[col["group"]];
    e.mos = csv::parse_double(row[col["mos"]], /*allow_blank=*/true);
    m.entries.push_back(std::move(e));
  }
  m.kind = infer_kind(m.entries);
  return m;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::vector<csv::Row> rows{{"id", "video", "audio", "group", "mos"}};
  for (const auto& e : manifest.entries) {
    rows.push_back({e.id, e.video, e.audio, e.group,
                    std::isfinite(e.mos) ? csv::format_double(e.mos) : std::string()});
  }
  csv::write(path, rows);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t repeat) {
  return rng::at(master_seed, repeat);
}

Split content_split(const Manifest& manifest, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) Fail(ErrorCode::kInvalidArgument, "split ratio must lie in (0, 1)");
  std::map<std::string, std::size_t> group_size;
  for (const auto& e : manifest.entries) group_size[e.group]++;
  if (group_size.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "need at least two content groups to split");
  }
  std::vector<std::string> groups;
  for (const auto& [g, n] : group_size) groups.push_back(g);
  rng::CounterStream stream(seed);
  stream.shuffle(groups);

  const double total = static_cast<double>(manifest.size());
  std::set<std::string> train_groups;
  std::size_t in_train = 0;
  for (const auto& g : groups) {
    if (static_cast<double>(in_train) / total >= ratio) break;
    train_groups.insert(g);
    in_train += group_size[g];
  }
  if (in_train == manifest.size()) {
    Fail(ErrorCode::kInvalidArgument, "content groups are too coarse: the split leaves no test items");
  }
  Split s;
  for (const auto& e : manifest.entries) {
    (train_groups.count(e.group) ? s.train : s.test).push_back(e.id);
  }
  return s;
}

void aggregate(EvalReport& report) {
  std::vector<double> s, p, r;
  for (const auto& rep : report.repeats) {
    if (!rep.ok) continue;
    s.push_back(rep.srcc);
    p.push_back(rep.plcc);
    r.push_back(rep.rmse);
  }
  report.repeat_count = report.repeats.size();
  report.successes = s.size();
  report.partial = report.successes != report.repeat_count;
  report.srcc = {mean_of(s), median(s)};
  report.plcc = {mean_of(p), median(p)};
  report.rmse = {mean_of(r), median(r)};
}

EvalReport run_protocol(const Manifest& manifest, const FeatureTable& features,
                        const ProtocolOptions& options) {
  if (options.repeats == 0) Fail(ErrorCode::kInvalidArgument, "need at least one repeat");
  manifest.require_mos();
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < features.ids.size(); ++i) row_of[features.ids[i]] = i;
  std::unordered_map<std::string, double> mos_of;
  for (const auto& e : manifest.entries) {
    if (!row_of.count(e.id)) Fail(ErrorCode::kInvalidArgument, "no features for manifest id '" + e.id + "'");
    mos_of[e.id] = e.mos;
  }

  EvalReport report;
  report.master_seed = options.master_seed;
  report.ratio = options.ratio;
  report.repeats.resize(options.repeats);

  parallel_for(options.repeats, options.threads, [&](std::size_t r) {
    RepeatResult& out = report.repeats[r];
    out.index = r;
    out.seed = derive_seed(options.master_seed, r);
    try {
      const Split split = content_split(manifest, options.ratio, out.seed);
      auto gather = [&](const std::vector<std::string>& ids, Matrix& x, std::vector<double>& y) {
        for (const auto& id : ids) {
          x.push_back(features.rows[row_of.at(id)]);
          y.push_back(mos_of.at(id));
        }
      };
      Matrix x_train, x_test;
      std::vector<double> y_train, y_test;
      gather(split.train, x_train, y_train);
      gather(split.test, x_test, y_test);
      out.n_train = y_train.size();
      out.n_test = y_test.size();

      const GridResult fit = grid_search(x_train, y_train, options.grid, options.train);
      out.hyperparams = fit.best;
      const auto pred = predict(fit.model, x_test);
      out.srcc = srcc(pred, y_test);
      out.plcc = plcc(pred, y_test);
      out.rmse = rmse(pred, y_test);
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
      out.srcc = out.plcc = out.rmse = 0.0;
    }
  });
  aggregate(report);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["format"] = kReportFormat;
  j["version"] = kReportVersion;
  j["master_seed"] = report.master_seed;
  j["ratio"] = report.ratio;
  j["repeat_count"] = report.repeat_count;
  j["successes"] = report.successes;
  j["partial"] = report.partial;
  auto& reps = j["repeats"] = nlohmann::json::array();
  for (const auto& r : report.repeats) {
    reps.push_back({{"index", r.index},
                    {"seed", r.seed},
                    {"ok", r.ok},
                    {"error", r.error},
                    {"srcc", r.srcc},
                    {"plcc", r.plcc},
                    {"rmse", r.rmse},
                    {"hyperparams",
                     {{"C", r.hyperparams.c}, {"epsilon", r.hyperparams.epsilon}, {"gamma", r.hyperparams.gamma}}},
                    {"n_train", r.n_train},
                    {"n_test", r.n_test}});
  }
  auto summary = [](const MetricSummary& m) { return nlohmann::json{{"mean", m.mean}, {"median", m.median}}; };
  j["aggregate"] = {{"srcc", summary(report.srcc)}, {"plcc", summary(report.plcc)}, {"rmse", summary(report.rmse)}};
  return j.dump(1);
}

EvalReport report_from_json(std::string_view text) {
  EvalReport rep;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kReportFormat) Fail(ErrorCode::kParse, "not an evaluation report");
    if (j.at("version").get<int>() != kReportVersion) Fail(ErrorCode::kParse, "unsupported report version");
    rep.master_seed = j.at("master_seed").get<std::uint64_t>();
    rep.ratio = j.at("ratio").get<double>();
    rep.repeat_count = j.at("repeat_count").get<std::size_t>();
    rep.successes = j.at("successes").get<std::size_t>();
    rep.partial = j.at("partial").get<bool>();
    for (const auto& r : j.at("repeats")) {
      RepeatResult x;
      x.index = r.at("index").get<std::size_t>();
      x.seed = r.at("seed").get<std::uint64_t>();
      x.ok = r.at("ok").get<bool>();
      x.error = r.at("error").get<std::string>();
      x.srcc = r.at("srcc").get<double>();
      x.plcc = r.at("plcc").get<double>();
      x.rmse = r.at("rmse").get<double>();
      const auto& h = r.at("hyperparams");
      x.hyperparams = {h.at("C").get<double>(), h.at("epsilon").get<double>(), h.at("gamma").get<double>()};
      x.n_train = r.at("n_train").get<std::size_t>();
      x.n_test = r.at("n_test").get<std::size_t>();
      rep.repeats.push_back(std::move(x));
    }
    const auto& a = j.at("aggregate");
    auto summary = [](const nlohmann::json& m) {
      return MetricSummary{m.at("mean").get<double>(), m.at("median").get<double>()};
    };
    rep.srcc = summary(a.at("srcc"));
    rep.plcc = summary(a.at("plcc"));
    rep.rmse = summary(a.at("rmse"));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed report JSON: ") + e.what());
  }
  return rep;
}

}  // namespace uavqa
