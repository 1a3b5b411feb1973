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


// Random epsilon-SVR instances solved both by the library and by the
// projected-gradient oracle.

#ifndef UAVQA_TESTS_SVR_CASES_HPP_
#define UAVQA_TESTS_SVR_CASES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "test_support.hpp"
#include "uavqa/regressor.hpp"

namespace uavqa::testing {

struct SvrCase {
  Matrix x;       // raw training rows
  Matrix probes;  // raw rows not in the training set
  std::vector<double> y;
  Hyperparams hp;
};

// True when every eigenvalue of the symmetric matrix k exceeds `floor`:
// K - floor * I then has a Cholesky factorization.
inline bool eigenvalues_above(const std::vector<double>& k, std::size_t n, double floor) {
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = k[i * n + j] - (i == j ? floor : 0.0);
      for (std::size_t t = 0; t < j; ++t) s -= l[i * n + t] * l[j * n + t];
      if (i == j) {
        if (s <= 0.0) return false;
        l[i * n + i] = std::sqrt(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
  return true;
}

// n in [5, 20], d in [2, 5]. Whole instances are redrawn until the smallest
// eigenvalue of the standardized Gram matrix is at least 0.2, so 10^6 ascent
// steps of 1e-4 contract the error by about exp(-20). This favours larger d
// and smaller n over the raw draw.
inline SvrCase make_svr_case(std::uint64_t seed) {
  Random rng(seed);
  SvrCase c;
  std::size_t n = 0, d = 0;
  for (;;) {
    n = 5 + rng.below(16);
    d = 2 + rng.below(4);
    c.hp.c = rng.uniform(0.5, 5.0);
    c.hp.epsilon = rng.uniform(0.05, 0.3);
    c.hp.gamma = rng.uniform(0.5, 2.0);
    c.x.assign(n, std::vector<double>(d));
    for (auto& row : c.x)
      for (double& v : row) v = rng.uniform(-2.0, 2.0);
    std::vector<double> mean, sd;
    const auto z = oracle::zscore_columns(c.x, mean, sd);
    if (eigenvalues_above(oracle::rbf_gram(z, c.hp.gamma), n, 0.2)) break;
  }
  c.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : c.x[i]) s += v;
    c.y[i] = std::sin(s) + 0.05 * rng.normal();
  }
  c.probes.assign(5, std::vector<double>(d));
  for (auto& row : c.probes)
    for (double& v : row) v = rng.uniform(-2.0, 2.0);
  return c;
}

struct OracleGap {
  double objective = 0.0;   // |library - oracle|
  double prediction = 0.0;  // max over training rows and probes
  bool converged = false;
};

inline OracleGap compare_with_oracle(const SvrCase& c, std::size_t iterations = 1000000) {
  std::vector<double> mean, sd;
  const auto z = oracle::zscore_columns(c.x, mean, sd);
  const auto gram = oracle::rbf_gram(z, c.hp.gamma);
  const auto ref = oracle::svr_projected_gradient(gram, c.y, c.hp.c, c.hp.epsilon, iterations);

  TrainOptions opt;
  opt.tol = 1e-9;
  opt.max_iter = 10000000;
  const auto dual = solve_svr_dual(gram, c.y, c.hp, opt);
  const auto model = train(c.x, c.y, c.hp, opt);

  OracleGap gap;
  gap.converged = dual.report.converged && model.report.converged;
  gap.objective = std::abs(dual.report.dual_objective - ref.objective);

  auto oracle_predict = [&](const std::vector<double>& raw) {
    std::vector<double> q(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) q[k] = (raw[k] - mean[k]) / sd[k];
    double f = ref.bias;
    for (std::size_t i = 0; i < z.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) d2 += (z[i][k] - q[k]) * (z[i][k] - q[k]);
      f += ref.beta[i] * std::exp(-c.hp.gamma * d2);
    }
    return f;
  };
  for (const auto* set : {&c.x, &c.probes}) {
    for (const auto& row : *set) {
      gap.prediction = std::max(gap.prediction, std::abs(predict(model.model, row) - oracle_predict(row)));
    }
  }
  return gap;
}

}  // namespace uavqa::testing

#endif  // UAVQA_TESTS_SVR_CASES_HPP_
