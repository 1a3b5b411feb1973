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

#include "uavqa/regressor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "json.hpp"
#include "rng.hpp"
#include "uavqa/dsp.hpp"
#include "uavqa/error.hpp"

namespace uavqa {

namespace {

constexpr double kTau = 1e-12;
constexpr int kModelVersion = 1;
constexpr const char* kModelFormat = "uavqa.svr_model";

void check_matrix(const Matrix& x, std::size_t min_rows) {
  if (x.size() < min_rows) {
    Fail(ErrorCode::kInvalidArgument,
         "need at least " + std::to_string(min_rows) + " rows, got " + std::to_string(x.size()));
  }
  const std::size_t d = x.front().size();
  if (d == 0) Fail(ErrorCode::kInvalidArgument, "feature rows are empty");
  for (const auto& row : x) {
    if (row.size() != d) Fail(ErrorCode::kDimensionMismatch, "ragged feature matrix");
    for (double v : row) {
      if (!std::isfinite(v)) Fail(ErrorCode::kInvalidArgument, "non-finite feature value");
    }
  }
}

double objective(std::span<const double> beta, std::span<const double> grad,
                 std::span<const double> p) {
  // f = 1/2 b'Qb + p'b = 1/2 sum b (G + p); reported as the maximization
  // value -f.
  double f = 0.0;
  for (std::size_t t = 0; t < beta.size(); ++t) f += beta[t] * (grad[t] + p[t]);
  return -0.5 * f;
}

}  // namespace

std::vector<double> Scaler::apply(std::span<const double> x) const {
  if (x.size() != mean.size()) {
    Fail(ErrorCode::kDimensionMismatch, "expected " + std::to_string(mean.size()) +
                                            " features, got " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    out[k] = degenerate[k] ? x[k] : (x[k] - mean[k]) / std[k];
  }
  return out;
}

Scaler standardize_fit(const Matrix& x) {
  check_matrix(x, 2);
  const std::size_t d = x.front().size();
  Scaler s;
  s.mean.resize(d);
  s.std.resize(d);
  s.degenerate.resize(d);
  std::vector<double> col(x.size());
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < x.size(); ++i) col[i] = x[i][k];
    s.mean[k] = dsp::mean(col);
    s.std[k] = dsp::population_std(col);
    // Constant columns can leave rounding-level spread behind.
    s.degenerate[k] = s.std[k] <= 1e-12 * std::max(1.0, std::abs(s.mean[k]));
    if (s.degenerate[k]) s.std[k] = 1.0;
  }
  return s;
}

Matrix standardize_apply(const Scaler& scaler, const Matrix& x) {
  Matrix out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(scaler.apply(row));
  return out;
}

double rbf(std::span<const double> x, std::span<const double> y, double gamma) {
  if (x.size() != y.size()) Fail(ErrorCode::kDimensionMismatch, "rbf of vectors of unequal length");
  double d2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
  return std::exp(-gamma * d2);
}

DualSolution solve_svr_dual(std::span<const double> gram, std::span<const double> y,
                            const Hyperparams& hp, const TrainOptions& options) {
  const std::size_t n = y.size();
  if (n < 2) Fail(ErrorCode::kInvalidArgument, "SVR needs at least two samples");
  if (gram.size() != n * n) Fail(ErrorCode::kDimensionMismatch, "Gram matrix is not n x n");
  if (!(hp.c > 0) || !(hp.epsilon >= 0) || !(hp.gamma > 0)) {
    Fail(ErrorCode::kInvalidArgument, "need C > 0, epsilon >= 0, gamma > 0");
  }
  for (double v : y) {
    if (!std::isfinite(v)) Fail(ErrorCode::kInvalidArgument, "non-finite target");
  }

  const std::size_t m = 2 * n;
  const double c = hp.c;
  auto sign = [n](std::size_t t) { return t < n ? 1.0 : -1.0; };
  auto kern = [&](std::size_t s, std::size_t t) { return gram[(s % n) * n + (t % n)]; };
  auto q = [&](std::size_t s, std::size_t t) { return sign(s) * sign(t) * kern(s, t); };

  std::vector<double> beta(m, 0.0), p(m), grad(m);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = hp.epsilon - y[i];
    p[i + n] = hp.epsilon + y[i];
  }
  grad = p;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  rng::CounterStream stream(options.seed);
  stream.shuffle(order);

  auto in_up = [&](std::size_t t) { return sign(t) > 0 ? beta[t] < c : beta[t] > 0; };
  auto in_low = [&](std::size_t t) { return sign(t) > 0 ? beta[t] > 0 : beta[t] < c; };

  DualSolution sol;
  TrainReport& rep = sol.report;
  for (;;) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = m, j = m;
    for (std::size_t t : order) {
      const double v = -sign(t) * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    rep.max_violation = (i == m || j == m) ? 0.0 : g_max - g_min;
    if (rep.max_violation <= options.tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= options.max_iter) break;

    const double old_i = beta[i], old_j = beta[j];
    const double qii = q(i, i), qjj = q(j, j), qij = q(i, j);
    if (sign(i) != sign(j)) {
      double quad = qii + qjj + 2 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = beta[i] - beta[j];
      beta[i] += delta;
      beta[j] += delta;
      if (diff > 0) {
        if (beta[j] < 0) {
          beta[j] = 0;
          beta[i] = diff;
        }
      } else if (beta[i] < 0) {
        beta[i] = 0;
        beta[j] = -diff;
      }
      if (diff > 0) {
        if (beta[i] > c) {
          beta[i] = c;
          beta[j] = c - diff;
        }
      } else if (beta[j] > c) {
        beta[j] = c;
        beta[i] = c + diff;
      }
    } else {
      double quad = qii + qjj - 2 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = beta[i] + beta[j];
      beta[i] -= delta;
      beta[j] += delta;
      if (sum > c) {
        if (beta[i] > c) {
          beta[i] = c;
          beta[j] = sum - c;
        }
      } else if (beta[j] < 0) {
        beta[j] = 0;
        beta[i] = sum;
      }
      if (sum > c) {
        if (beta[j] > c) {
          beta[j] = c;
          beta[i] = sum - c;
        }
      } else if (beta[i] < 0) {
        beta[i] = 0;
        beta[j] = sum;
      }
    }

    const double di = beta[i] - old_i, dj = beta[j] - old_j;
    for (std::size_t t = 0; t < m; ++t) grad[t] += q(t, i) * di + q(t, j) * dj;
    ++rep.iterations;
    if (options.trace_objective && rep.iterations % 100 == 0) {
      rep.objective_trace.push_back(objective(beta, grad, p));
    }
  }
  rep.dual_objective = objective(beta, grad, p);

  // Offset from free variables, else the midpoint of the KKT bounds.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < m; ++t) {
    const double yg = sign(t) * grad[t];
    if (beta[t] >= c) {
      if (sign(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (beta[t] <= 0) {
      if (sign(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  sol.bias = -rho;
  sol.alpha.assign(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(n));
  sol.alpha_star.assign(beta.begin() + static_cast<std::ptrdiff_t>(n), beta.end());
  return sol;
}

TrainResult train(const Matrix& x, std::span<const double> y, const Hyperparams& hp,
                  const TrainOptions& options) {
  check_matrix(x, 2);
  if (x.size() != y.size()) Fail(ErrorCode::kDimensionMismatch, "features and targets differ in length");
  const std::size_t n = x.size();

  TrainResult out;
  out.model.scaler = standardize_fit(x);
  out.model.hyperparams = hp;
  const Matrix z = standardize_apply(out.model.scaler, x);

  std::vector<double> gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    gram[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      gram[i * n + j] = gram[j * n + i] = rbf(z[i], z[j], hp.gamma);
    }
  }
  DualSolution sol = solve_svr_dual(gram, y, hp, options);
  out.report = std::move(sol.report);
  out.model.bias = sol.bias;

  std::vector<double> coef(n);
  for (std::size_t i = 0; i < n; ++i) {
    coef[i] = sol.alpha[i] - sol.alpha_star[i];
    if (coef[i] != 0.0) {
      out.model.support_vectors.push_back(z[i]);
      out.model.dual_coeffs.push_back(coef[i]);
    }
  }

  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (coef[j] != 0.0) f += coef[j] * rbf(z[j], z[i], hp.gamma);
    }
    f += sol.bias;
    sq += (f - y[i]) * (f - y[i]);
  }
  out.report.train_rmse = std::sqrt(sq / static_cast<double>(n));
  return out;
}

double predict(const SvrModel& model, std::span<const double> x) {
  const auto z = model.scaler.apply(x);
  double f = 0.0;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    f += model.dual_coeffs[i] * rbf(model.support_vectors[i], z, model.hyperparams.gamma);
  }
  return f + model.bias;
}

std::vector<double> predict(const SvrModel& model, const Matrix& x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict(model, row));
  return out;
}

Grid Grid::defaults() {
  return {{1.0, 10.0, 100.0, 1000.0},
          {std::ldexp(1.0, -8), std::ldexp(1.0, -6), std::ldexp(1.0, -4), std::ldexp(1.0, -2), 1.0},
          {0.1, 1.0}};
}

GridResult grid_search(const Matrix& x, std::span<const double> y, const Grid& grid,
                       const TrainOptions& options) {
  if (grid.size() == 0) Fail(ErrorCode::kInvalidArgument, "hyperparameter grid is empty");
  GridResult best;
  bool have = false;
  auto key = [](double rmse, const Hyperparams& h) {
    return std::make_tuple(rmse, h.c, h.gamma, h.epsilon);
  };
  for (double c : grid.c) {
    for (double g : grid.gamma) {
      for (double e : grid.epsilon) {
        const Hyperparams hp{c, e, g};
        auto r = train(x, y, hp, options);
        ++best.evaluated;
        if (!r.report.converged) {
          ++best.not_converged;
          continue;
        }
        if (!have || key(r.report.train_rmse, hp) < key(best.report.train_rmse, best.best)) {
          best.best = hp;
          best.model = std::move(r.model);
          best.report = std::move(r.report);
          have = true;
        }
      }
    }
  }
  if (!have) {
    Fail(ErrorCode::kNotConverged,
         "none of the " + std::to_string(grid.size()) + " grid points converged");
  }
  return best;
}

std::string serialize_model(const SvrModel& model) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["hyperparams"] = {{"C", model.hyperparams.c},
                      {"epsilon", model.hyperparams.epsilon},
                      {"gamma", model.hyperparams.gamma}};
  j["scaler"] = {{"mean", model.scaler.mean},
                 {"std", model.scaler.std},
                 {"degenerate", model.scaler.degenerate}};
  j["support_vectors"] = model.support_vectors;
  j["dual_coeffs"] = model.dual_coeffs;
  j["bias"] = model.bias;
  j["feature_names"] = model.feature_names;
  return j.dump(1);
}

SvrModel parse_model(std::string_view text) {
  SvrModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kModelFormat) {
      Fail(ErrorCode::kParse, "not an SVR model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      Fail(ErrorCode::kParse, "unsupported model version " + j.at("version").dump());
    }
    const auto& h = j.at("hyperparams");
    m.hyperparams = {h.at("C").get<double>(), h.at("epsilon").get<double>(),
                     h.at("gamma").get<double>()};
    const auto& s = j.at("scaler");
    m.scaler.mean = s.at("mean").get<std::vector<double>>();
    m.scaler.std = s.at("std").get<std::vector<double>>();
    m.scaler.degenerate = s.at("degenerate").get<std::vector<bool>>();
    m.support_vectors = j.at("support_vectors").get<Matrix>();
    m.dual_coeffs = j.at("dual_coeffs").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    if (j.contains("feature_names")) {
      m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed model JSON: ") + e.what());
  }
  const std::size_t d = m.scaler.mean.size();
  if (m.scaler.std.size() != d || m.scaler.degenerate.size() != d ||
      m.support_vectors.size() != m.dual_coeffs.size()) {
    Fail(ErrorCode::kParse, "inconsistent model dimensions");
  }
  for (const auto& sv : m.support_vectors) {
    if (sv.size() != d) Fail(ErrorCode::kParse, "support vector dimension mismatch");
  }
  return m;
}

}  // namespace uavqa
