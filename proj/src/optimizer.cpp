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
#include "einsdrop/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include <Eigen/Eigenvalues>

#include "einsdrop/linalg.hpp"
#include "einsdrop/scenario.hpp"

namespace einsdrop {

namespace {

// Objective data that does not change while the generator moves: the head
// (monitored) and tail (unmonitored) parts of u0|0> and u1|0>. The tail
// contributes a constant because the antenna acts as the identity there.
struct Workspace {
  int k = 0;
  int rank = 0;  // floor(k/2)
  ComplexVector u_hat;
  ComplexVector w_hat;
  double constant = 0.0;
};

Workspace make_workspace(const UnitaryOperator& u0, const UnitaryOperator& u1,
                         int k) {
  if (u0.dim() != u1.dim())
    throw std::invalid_argument("optimizer: u0 and u1 dimensions differ");
  const Index d = u0.dim();
  if (k < 2 || k > d)
    throw std::invalid_argument("optimizer: k = " + std::to_string(k) +
                                " outside [2, " + std::to_string(d) + "]");
  Workspace ws;
  ws.k = k;
  ws.rank = k / 2;
  const ComplexVector v0 = u0.matrix().col(0);
  const ComplexVector v1 = u1.matrix().col(0);
  ws.u_hat = v0.head(k);
  ws.w_hat = v1.head(k);
  ws.constant = 0.5 * (1.0 + v0.tail(d - k).squaredNorm() -
                       v1.tail(d - k).squaredNorm());
  return ws;
}

// Eigensystem of the Hermitian matrix -iG; exp(G) = W e^{i lambda} W^dag.
struct EigCache {
  Eigen::VectorXd lambda;
  ComplexMatrix w;
};

EigCache eig_of_generator(const ComplexMatrix& g) {
  ComplexMatrix h = Complex(0.0, -1.0) * g;
  h = ComplexMatrix(0.5 * (h + h.adjoint()));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("optimizer: eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexVector unit_phases(const Eigen::VectorXd& lambda, double sign) {
  ComplexVector phase(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i)
    phase(i) = std::polar(1.0, sign * lambda(i));
  return phase;
}

double objective_from_eig(const Workspace& ws, const EigCache& e) {
  // V^dag x = W e^{-i lambda} W^dag x, only the leading `rank` entries count.
  const ComplexVector phase = unit_phases(e.lambda, -1.0);
  const ComplexVector a = e.w * phase.cwiseProduct(e.w.adjoint() * ws.u_hat);
  const ComplexVector b = e.w * phase.cwiseProduct(e.w.adjoint() * ws.w_hat);
  return ws.constant + 0.5 * (a.head(ws.rank).squaredNorm() -
                              b.head(ws.rank).squaredNorm());
}

// d f = Re tr(L dG) with L = W ((W^dag A W) o Phi) W^dag, A the rank-2
// matrix P_ref V^dag (u u^dag - w w^dag), and Phi the divided-difference
// kernel of exp on the spectrum of -iG.
ComplexMatrix gradient_l_matrix(const Workspace& ws, const EigCache& e) {
  const int k = ws.k;
  const ComplexVector phase = unit_phases(e.lambda, -1.0);
  const ComplexVector a = e.w * phase.cwiseProduct(e.w.adjoint() * ws.u_hat);
  const ComplexVector b = e.w * phase.cwiseProduct(e.w.adjoint() * ws.w_hat);

  ComplexVector x1 = ComplexVector::Zero(k);
  x1.head(ws.rank) = a.head(ws.rank);
  ComplexVector x2 = ComplexVector::Zero(k);
  x2.head(ws.rank) = b.head(ws.rank);

  const ComplexVector wx1 = e.w.adjoint() * x1;
  const ComplexVector wx2 = e.w.adjoint() * x2;
  const ComplexVector wu = e.w.adjoint() * ws.u_hat;
  const ComplexVector ww = e.w.adjoint() * ws.w_hat;
  const ComplexMatrix a_tilde = wx1 * wu.adjoint() - wx2 * ww.adjoint();

  ComplexMatrix hadamard(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double mid = 0.5 * (e.lambda(i) + e.lambda(j));
      const double diff = 0.5 * (e.lambda(i) - e.lambda(j));
      const double sinc = (std::abs(diff) < 1e-8)
                              ? 1.0 - diff * diff / 6.0
                              : std::sin(diff) / diff;
      hadamard(i, j) = std::polar(sinc, mid) * a_tilde(i, j);
    }
  return e.w * hadamard * e.w.adjoint();
}

Eigen::VectorXd gradient_from_l(const ComplexMatrix& l) {
  const int k = static_cast<int>(l.rows());
  Eigen::VectorXd g(k * k);
  int idx = 0;
  for (int a = 0; a < k; ++a) g(idx++) = -l(a, a).imag();
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      g(idx++) = (l(q, p) - l(p, q)).real();
      g(idx++) = -(l(q, p) + l(p, q)).imag();
    }
  return g;
}

ComplexMatrix random_generator(int k, RngStream& rng, double init_scale) {
  const double sigma = init_scale * std::numbers::pi / (2.0 * std::sqrt(k));
  ComplexMatrix x(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) x(i, j) = sigma * rng.complex_gaussian();
  return ComplexMatrix(0.5 * (x - x.adjoint()));
}

// Deterministic start aligned with the top eigenvector of
// w w^dag - u u^dag: the best restricted antenna in closed form (up to the
// rounding of the matrix logarithm), so the ascent starts at least as well
// as blind guessing.
ComplexMatrix spectral_generator(const Workspace& ws) {
  const int k = ws.k;
  const ComplexMatrix s =
      ws.w_hat * ws.w_hat.adjoint() - ws.u_hat * ws.u_hat.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("optimizer: spectral start eigensolve failed");
  const ComplexMatrix v0 = es.eigenvectors();  // ascending eigenvalues

  // Principal logarithm through the Schur form (v0 is unitary, so the
  // triangular factor is numerically diagonal).
  Eigen::ComplexSchur<ComplexMatrix> schur(v0);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("optimizer: spectral start Schur failed");
  ComplexVector logdiag(k);
  for (int i = 0; i < k; ++i) {
    const Complex t = schur.matrixT()(i, i);
    logdiag(i) = Complex(0.0, std::arg(t));
  }
  const ComplexMatrix q = schur.matrixU();
  ComplexMatrix g = q * logdiag.asDiagonal() * q.adjoint();
  return ComplexMatrix(0.5 * (g - g.adjoint()));
}

struct AscentOutcome {
  double objective = 0.0;
  ComplexMatrix generator;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

AscentOutcome ascend(const Workspace& ws, ComplexMatrix g,
                     const OptimizerOptions& opts) {
  AscentOutcome out;
  EigCache eig = eig_of_generator(g);
  double f = objective_from_eig(ws, eig);
  out.trace.push_back(f);

  std::vector<double> gains;
  const int window = std::max(1, opts.gain_window);

  int iters = 0;
  bool converged = false;
  while (iters < opts.max_iters) {
    const Eigen::VectorXd grad =
        gradient_from_l(gradient_l_matrix(ws, eig));
    if (grad.lpNorm<Eigen::Infinity>() < 1e-13) {
      converged = true;
      break;
    }
    const ComplexMatrix direction =
        unpack_generator(grad, ws.k);

    double step = opts.step_size;
    bool accepted = false;
    ComplexMatrix g_next;
    EigCache eig_next;
    double f_next = f;
    for (int halving = 0; halving <= 60; ++halving) {
      g_next = g + step * direction;
      eig_next = eig_of_generator(g_next);
      f_next = objective_from_eig(ws, eig_next);
      if (f_next >= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No ascent along the gradient at the smallest step: stationary.
      converged = true;
      break;
    }

    gains.push_back(f_next - f);
    g = std::move(g_next);
    eig = std::move(eig_next);
    f = f_next;
    ++iters;
    out.trace.push_back(f);

    if (static_cast<int>(gains.size()) >= window) {
      double recent = 0.0;
      for (std::size_t i = gains.size() - window; i < gains.size(); ++i)
        recent += gains[i];
      if (recent < opts.gain_tol) {
        converged = true;
        break;
      }
    }
  }

  out.objective = f;
  out.generator = std::move(g);
  out.iterations = iters;
  out.converged = converged;
  return out;
}

}  // namespace

AntennaParam::AntennaParam(int k, ComplexMatrix generator)
    : k_(k), generator_(std::move(generator)) {
  if (k_ < 2)
    throw std::invalid_argument("AntennaParam: k must be >= 2");
  if (generator_.rows() != k_ || generator_.cols() != k_)
    throw std::invalid_argument("AntennaParam: generator must be k x k");
  if (!generator_.allFinite())
    throw std::invalid_argument("AntennaParam: generator has NaN/Inf");
  if (max_abs(generator_ + generator_.adjoint()) > tol::kSkew)
    throw std::invalid_argument("AntennaParam: generator is not anti-Hermitian");
}

Eigen::VectorXd pack_generator(const ComplexMatrix& g) {
  const int k = static_cast<int>(g.rows());
  Eigen::VectorXd theta(k * k);
  int idx = 0;
  for (int a = 0; a < k; ++a) theta(idx++) = g(a, a).imag();
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      theta(idx++) = g(p, q).real();
      theta(idx++) = g(p, q).imag();
    }
  return theta;
}

ComplexMatrix unpack_generator(const Eigen::VectorXd& theta, int k) {
  if (theta.size() != static_cast<Index>(k) * k)
    throw std::invalid_argument("unpack_generator: need k^2 parameters");
  ComplexMatrix g = ComplexMatrix::Zero(k, k);
  int idx = 0;
  for (int a = 0; a < k; ++a) g(a, a) = Complex(0.0, theta(idx++));
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      const double re = theta(idx++);
      const double im = theta(idx++);
      g(p, q) = Complex(re, im);
      g(q, p) = Complex(-re, im);
    }
  return g;
}

Projector constrained_projector(const AntennaParam& param, Index env_dim) {
  const int k = param.k();
  if (k > env_dim)
    throw std::invalid_argument("constrained_projector: k = " +
                                std::to_string(k) + " exceeds env_dim = " +
                                std::to_string(env_dim));
  const EigCache eig = eig_of_generator(param.generator());
  const ComplexVector phase = unit_phases(eig.lambda, 1.0);
  const ComplexMatrix v = eig.w * phase.asDiagonal() * eig.w.adjoint();
  const int r = k / 2;
  ComplexMatrix p = ComplexMatrix::Zero(env_dim, env_dim);
  p.topLeftCorner(k, k) = v.leftCols(r) * v.leftCols(r).adjoint();
  if (env_dim > k)
    p.bottomRightCorner(env_dim - k, env_dim - k) =
        ComplexMatrix::Identity(env_dim - k, env_dim - k);
  return Projector(std::move(p));
}

double pguess_objective(const UnitaryOperator& u0, const UnitaryOperator& u1,
                        const Projector& p0) {
  if (u0.dim() != u1.dim() || u0.dim() != p0.dim())
    throw std::invalid_argument("pguess_objective: dimension mismatch");
  const ComplexVector v0 = u0.matrix().col(0);
  const ComplexVector v1 = u1.matrix().col(0);
  return 0.5 * ((p0.matrix() * v0).squaredNorm() + 1.0 -
                (p0.matrix() * v1).squaredNorm());
}

Eigen::VectorXd objective_gradient(const UnitaryOperator& u0,
                                   const UnitaryOperator& u1,
                                   const AntennaParam& param) {
  const Workspace ws = make_workspace(u0, u1, param.k());
  const EigCache eig = eig_of_generator(param.generator());
  return gradient_from_l(gradient_l_matrix(ws, eig));
}

Eigen::VectorXd finite_difference_gradient(const UnitaryOperator& u0,
                                           const UnitaryOperator& u1,
                                           const AntennaParam& param,
                                           double h) {
  const Workspace ws = make_workspace(u0, u1, param.k());
  const Eigen::VectorXd theta0 = pack_generator(param.generator());
  Eigen::VectorXd grad(theta0.size());
  for (Index i = 0; i < theta0.size(); ++i) {
    Eigen::VectorXd theta = theta0;
    theta(i) = theta0(i) + h;
    const double fp =
        objective_from_eig(ws, eig_of_generator(unpack_generator(theta, ws.k)));
    theta(i) = theta0(i) - h;
    const double fm =
        objective_from_eig(ws, eig_of_generator(unpack_generator(theta, ws.k)));
    grad(i) = (fp - fm) / (2.0 * h);
  }
  return grad;
}

OptimizeResult optimize_antenna(const UnitaryOperator& u0,
                                const UnitaryOperator& u1, int k,
                                RngStream rng, const OptimizerOptions& opts) {
  if (opts.max_iters < 0 || opts.restarts < 0 || opts.step_size <= 0.0)
    throw std::invalid_argument("optimize_antenna: bad optimizer options");
  if (!opts.spectral_start && opts.restarts == 0)
    throw std::invalid_argument("optimize_antenna: no starts configured");
  const Workspace ws = make_workspace(u0, u1, k);

  bool have_best = false;
  AscentOutcome best;
  const int total_starts = opts.restarts + (opts.spectral_start ? 1 : 0);
  for (int start = 0; start < total_starts; ++start) {
    ComplexMatrix g0;
    if (opts.spectral_start && start == 0)
      g0 = spectral_generator(ws);
    else
      g0 = random_generator(k, rng, opts.init_scale);
    AscentOutcome outcome = ascend(ws, std::move(g0), opts);
    if (!have_best || outcome.objective > best.objective) {
      best = std::move(outcome);
      have_best = true;
    }
  }

  return OptimizeResult{best.objective, AntennaParam(k, best.generator),
                        best.iterations, best.converged,
                        std::move(best.trace)};
}

std::vector<int> default_k_grid(Index env_dim, int count) {
  if (env_dim < 2)
    throw std::invalid_argument("default_k_grid: env_dim must be >= 2");
  if (count < 1)
    throw std::invalid_argument("default_k_grid: count must be >= 1");
  std::vector<int> grid;
  if (count == 1) return {static_cast<int>(env_dim)};
  for (int j = 0; j < count; ++j) {
    const int k = static_cast<int>(std::lround(
        2.0 + j * (static_cast<double>(env_dim) - 2.0) / (count - 1)));
    if (grid.empty() || grid.back() != k) grid.push_back(k);
  }
  return grid;
}

SweepResult run_sweep(const SweepConfig& config, int threads) {
  const std::size_t n_dims = config.env_dims.size();
  if (n_dims == 0)
    throw std::invalid_argument("run_sweep: env_dims is empty");
  if (config.instances.size() != n_dims)
    throw std::invalid_argument(
        "run_sweep: instances must match env_dims in length");
  if (!config.k_grid.empty() && config.k_grid.size() != n_dims)
    throw std::invalid_argument(
        "run_sweep: k_grid must be empty or match env_dims in length");

  std::vector<std::vector<int>> grids(n_dims);
  for (std::size_t d = 0; d < n_dims; ++d) {
    const Index dim = config.env_dims[d];
    if (config.instances[d] < 1)
      throw std::invalid_argument("run_sweep: instances must be >= 1");
    grids[d] = config.k_grid.empty() || config.k_grid[d].empty()
                   ? default_k_grid(dim)
                   : config.k_grid[d];
    for (int k : grids[d])
      if (k < 2 || k > dim)
        throw std::invalid_argument("run_sweep: k = " + std::to_string(k) +
                                    " outside [2, " + std::to_string(dim) +
                                    "]");
  }

  // Fixed record layout: (dimension, instance, k), so concurrent cells write
  // disjoint, position-independent slots.
  std::vector<std::size_t> dim_base(n_dims, 0);
  std::size_t total = 0;
  for (std::size_t d = 0; d < n_dims; ++d) {
    dim_base[d] = total;
    total += static_cast<std::size_t>(config.instances[d]) * grids[d].size();
  }

  struct Cell {
    std::size_t d_idx;
    int instance;
  };
  std::vector<Cell> cells;
  for (std::size_t d = 0; d < n_dims; ++d)
    for (int i = 0; i < config.instances[d]; ++i) cells.push_back({d, i});

  SweepResult result;
  result.records.resize(total);

  const RngStream root(config.seed);
  OptimizerOptions opts;
  opts.restarts = config.restarts;
  opts.max_iters = config.max_iters;
  opts.step_size = config.step_size;

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      try {
        const Cell cell = cells[c];
        const Index dim = config.env_dims[cell.d_idx];
        const std::vector<int>& grid = grids[cell.d_idx];
        RngStream cell_rng =
            root.split(cell.d_idx).split(static_cast<std::uint64_t>(cell.instance));
        RngStream pair_rng = cell_rng.split(0);
        const UnitaryOperator u0 = haar_random_unitary(dim, pair_rng);
        const UnitaryOperator u1 = haar_random_unitary(dim, pair_rng);
        const double ceiling = helstrom_ceiling(collective_gamma(u0, u1));

        for (std::size_t kj = 0; kj < grid.size(); ++kj) {
          OptimizeResult opt = optimize_antenna(
              u0, u1, grid[kj], cell_rng.split(1 + kj), opts);
          if (opt.best_pguess < 0.5 - 1e-9 ||
              opt.best_pguess > ceiling + 1e-9)
            throw std::runtime_error(
                "run_sweep: optimized value " +
                std::to_string(opt.best_pguess) +
                " escapes [1/2, Helstrom ceiling]");
          const std::size_t slot = dim_base[cell.d_idx] +
                                   static_cast<std::size_t>(cell.instance) *
                                       grid.size() +
                                   kj;
          result.records[slot] =
              SweepRecord{dim,     grid[kj],          cell.instance,
                          cell_rng.seed(), opt.best_pguess, ceiling,
                          opt.iterations,  opt.converged};
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::max(
      1, std::min<int>(threads, static_cast<int>(cells.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (std::size_t d = 0; d < n_dims; ++d) {
    const std::vector<int>& grid = grids[d];
    const int n_inst = config.instances[d];
    for (std::size_t kj = 0; kj < grid.size(); ++kj) {
      double sum = 0.0;
      for (int i = 0; i < n_inst; ++i)
        sum += result
                   .records[dim_base[d] +
                            static_cast<std::size_t>(i) * grid.size() + kj]
                   .optimized_pguess;
      const double mean = sum / n_inst;
      double var = 0.0;
      for (int i = 0; i < n_inst; ++i) {
        const double x =
            result
                .records[dim_base[d] +
                         static_cast<std::size_t>(i) * grid.size() + kj]
                .optimized_pguess -
            mean;
        var += x * x;
      }
      const double stddev = n_inst > 1 ? std::sqrt(var / (n_inst - 1)) : 0.0;
      result.aggregates.push_back(SweepAggregate{
          config.env_dims[d], grid[kj],
          static_cast<double>(grid[kj]) / static_cast<double>(config.env_dims[d]),
          mean, stddev, n_inst});
    }
  }
  return result;
}

}  // namespace einsdrop
