// Copyright 2026 The einsdrop authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <vector>

#include "einsdrop/rng.hpp"
#include "einsdrop/types.hpp"

namespace einsdrop {

// Gradient search over restricted antenna projectors. The antenna monitors
// the leading k-dimensional block of the environment; inside that block it
// applies an arbitrary projector of rank floor(k/2), outside it acts as the
// identity. The monitored-block projector is parametrized as
// exp(G) P_ref exp(G)^dag with G anti-Hermitian (k^2 real parameters), which
// keeps every iterate exactly on the projector manifold.

/// Monitored-block size k plus the anti-Hermitian generator G.
class AntennaParam {
 public:
  AntennaParam(int k, ComplexMatrix generator);

  int k() const { return k_; }
  const ComplexMatrix& generator() const { return generator_; }

 private:
  int k_;
  ComplexMatrix generator_;
};

struct OptimizerOptions {
  int restarts = 5;          // random initial generators
  int max_iters = 2000;      // accepted ascent steps per start
  double step_size = 1.0;    // base step, halved while the objective drops
  double gain_tol = 1e-10;   // stop when 20 consecutive steps gain less
  int gain_window = 20;
  bool spectral_start = true;  // deterministic eigenvector-aligned start
  double init_scale = 1.0;     // scale of random initial generators
};

struct OptimizeResult {
  double best_pguess;
  AntennaParam best_param;
  int iterations;             // accepted steps of the winning start
  bool converged;             // winning start met the gain criterion
  std::vector<double> trace;  // objective after each accepted step
};

/// Real parameter vector of an anti-Hermitian matrix: k diagonal imaginary
/// parts, then (re, im) of each strictly-upper entry scanned row-major.
Eigen::VectorXd pack_generator(const ComplexMatrix& g);
ComplexMatrix unpack_generator(const Eigen::VectorXd& theta, int k);

/// Antenna projector exp(G) P_ref exp(G)^dag  (+)  I on the unmonitored
/// block, with P_ref = diag(1 x floor(k/2), 0 x rest).
Projector constrained_projector(const AntennaParam& param, Index env_dim);

/// Guessing probability of the antenna p0 against the pair (u0, u1):
/// ( <0|u0^dag p0 u0|0> + <0|u1^dag (I - p0) u1|0> ) / 2. O(D^2).
double pguess_objective(const UnitaryOperator& u0, const UnitaryOperator& u1,
                        const Projector& p0);

/// Analytic gradient of the objective in the packed parameters of G
/// (eigendecomposition chain rule through exp).
Eigen::VectorXd objective_gradient(const UnitaryOperator& u0,
                                   const UnitaryOperator& u1,
                                   const AntennaParam& param);

/// Central finite differences in the packed parameters; validation twin of
/// objective_gradient.
Eigen::VectorXd finite_difference_gradient(const UnitaryOperator& u0,
                                           const UnitaryOperator& u1,
                                           const AntennaParam& param,
                                           double h = 1e-5);

/// Multi-start gradient ascent over the generator. Non-convergence after
/// max_iters is reported through the converged flag, never thrown.
OptimizeResult optimize_antenna(const UnitaryOperator& u0,
                                const UnitaryOperator& u1, int k,
                                RngStream rng,
                                const OptimizerOptions& opts = {});

struct SweepConfig {
  std::vector<Index> env_dims = {20, 50, 100, 200};
  std::vector<int> instances = {15, 8, 11, 4};  // Haar draws per dimension
  // Per-dimension monitored-block grids; empty means the default of 10
  // evenly spaced integers from 2 to D.
  std::vector<std::vector<int>> k_grid = {};
  int restarts = 5;
  int max_iters = 2000;
  double step_size = 1.0;
  std::uint64_t seed = 12345;
};

/// `count` evenly spaced integers from 2 to env_dim inclusive, deduplicated.
std::vector<int> default_k_grid(Index env_dim, int count = 10);

struct SweepRecord {
  Index env_dim;
  int k;
  int instance_id;
  std::uint64_t cell_seed;  // seed of the stream that drew this instance
  double optimized_pguess;
  double helstrom_ceiling;
  int iterations;
  bool converged;
};

struct SweepAggregate {
  Index env_dim;
  int k;
  double k_over_d;
  double mean_pguess;
  double std_pguess;  // sample standard deviation (0 for a single instance)
  int n;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<SweepAggregate> aggregates;
};

/// Full experiment: for every environment dimension draw `instances` Haar
/// pairs (u0, u1), optimize the antenna on every k of the grid, aggregate
/// mean and standard deviation per (D, k). Records are ordered by
/// (dimension, instance, k) and are bitwise-reproducible for a given seed
/// independently of the thread count.
SweepResult run_sweep(const SweepConfig& config, int threads = 1);

}  // namespace einsdrop
