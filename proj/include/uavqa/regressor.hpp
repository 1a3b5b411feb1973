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

// Epsilon-SVR with an RBF kernel on z-scored inputs.
//
// The dual is solved in the usual 2n-variable form
//
//   min_b  1/2 b'Qb + p'b   s.t.  z'b = 0,  0 <= b <= C
//
// with b = [alpha; alpha*], z = [+1..; -1..], p = [eps - y; eps + y] and
// Q = (z z') .* [K K; K K]. Each SMO step takes the maximal violating pair
// and solves the two-variable subproblem in closed form.

#ifndef UAVQA_REGRESSOR_HPP_
#define UAVQA_REGRESSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uavqa {

using Matrix = std::vector<std::vector<double>>;  // row-major samples

struct Scaler {
  std::vector<double> mean;
  std::vector<double> std;
  // Zero-variance columns; passed through unchanged.
  std::vector<bool> degenerate;

  std::size_t dims() const { return mean.size(); }
  std::vector<double> apply(std::span<const double> x) const;
};

Scaler standardize_fit(const Matrix& x);
Matrix standardize_apply(const Scaler& scaler, const Matrix& x);

double rbf(std::span<const double> x, std::span<const double> y, double gamma);

struct Hyperparams {
  double c = 1.0;
  double epsilon = 0.1;
  double gamma = 1.0;
};

struct TrainOptions {
  std::uint64_t seed = 0;  // only orders ties in working-set selection
  double tol = 1e-3;
  std::size_t max_iter = 100000;
  // Record the dual objective every 100 updates.
  bool trace_objective = false;
};

struct TrainReport {
  std::size_t iterations = 0;
  double dual_objective = 0.0;  // maximization form
  double max_violation = 0.0;
  double train_rmse = 0.0;
  bool converged = false;
  std::vector<double> objective_trace;
};

struct SvrModel {
  Scaler scaler;
  Hyperparams hyperparams;
  Matrix support_vectors;  // standardized
  std::vector<double> dual_coeffs;  // alpha - alpha*
  double bias = 0.0;
  std::vector<std::string> feature_names;  // optional, checked by callers

  std::size_t dims() const { return scaler.dims(); }
};

// Raw dual solution on a precomputed Gram matrix (n x n, row-major).
struct DualSolution {
  std::vector<double> alpha;       // n
  std::vector<double> alpha_star;  // n
  double bias = 0.0;
  TrainReport report;  // train_rmse left at 0
};

DualSolution solve_svr_dual(std::span<const double> gram, std::span<const double> y,
                            const Hyperparams& hp, const TrainOptions& options);

struct TrainResult {
  SvrModel model;
  TrainReport report;
};

TrainResult train(const Matrix& x, std::span<const double> y, const Hyperparams& hp,
                  const TrainOptions& options = {});

double predict(const SvrModel& model, std::span<const double> x);
std::vector<double> predict(const SvrModel& model, const Matrix& x);

struct Grid {
  std::vector<double> c;
  std::vector<double> gamma;
  std::vector<double> epsilon;

  // C in {1, 10, 100, 1000}, gamma in {2^-8, 2^-6, ..., 2^0},
  // epsilon in {0.1, 1.0}.
  static Grid defaults();
  std::size_t size() const { return c.size() * gamma.size() * epsilon.size(); }
};

struct GridResult {
  Hyperparams best;
  SvrModel model;
  TrainReport report;
  std::size_t evaluated = 0;
  std::size_t not_converged = 0;
};

// Picks the converged grid point with the lowest training RMSE; ties go to
// smaller C, then smaller gamma, then smaller epsilon.
GridResult grid_search(const Matrix& x, std::span<const double> y, const Grid& grid,
                       const TrainOptions& options = {});

std::string serialize_model(const SvrModel& model);
SvrModel parse_model(std::string_view json);

}  // namespace uavqa

#endif  // UAVQA_REGRESSOR_HPP_
