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

#include <utility>

#include "einsdrop/types.hpp"

namespace einsdrop {

// Analytic model of an environment made of N qubits, each coupled to the
// apparatus through an imperfect CNOT with mixing angle theta. theta = 0 is
// a perfect copy, theta = pi/2 records nothing.

/// N and theta. theta is stored canonically in [0, pi/2]; every quantity of
/// the model depends on the angle only through |sin theta| and |cos theta|.
class ImperfectCnotModel {
 public:
  ImperfectCnotModel(double theta, int n_env);

  double theta() const { return theta_; }
  int n_env() const { return n_env_; }

 private:
  double theta_;
  int n_env_;
};

/// Eavesdropper resources against a model: the decoherence factor of the
/// chain, the intercepted-qubit budget mu evaluated at -ln(gamma), and the
/// resulting interception count n.
struct InterceptionModel {
  double gamma = 1.0;              // in (0, 1]
  double mu_at_minus_log_gamma = 0.0;
  int n_intercepted = 0;

  /// Throws unless gamma and n_intercepted are admissible for n_env qubits.
  void validate(int n_env) const;
};

/// Single-qubit environment response [[sin t, cos t], [cos t, -sin t]]
/// (Hermitian and unitary; its own inverse).
UnitaryOperator p_oslash(double theta);

/// Explicit environment pair (U0, U1) = (I, p_oslash^(x)N) of dimension 2^N.
/// Guarded to N <= 12; larger environments must use the closed forms.
std::pair<UnitaryOperator, UnitaryOperator> env_unitaries(
    const ImperfectCnotModel& model);

/// |sin theta|^N.
double gamma_closed_form(const ImperfectCnotModel& model);

/// N * ln|sin theta|, the quantity to carry once gamma underflows.
/// -inf when sin theta == 0. Evaluated in extended precision.
double log_gamma_closed_form(const ImperfectCnotModel& model);

/// Smallest N with |sin theta|^N <= gamma_target. Defined for
/// 0 < gamma_target < 1 and 0 < |sin theta| < 1.
int min_env_qubits(double gamma_target, double theta);

struct HelstromSingle {
  Projector projector;  // accept-0 outcome of the optimal measurement
  double success;       // (1 + |cos theta|) / 2
};

/// Optimal single-qubit discrimination of |0> versus p_oslash|0>.
HelstromSingle helstrom_single(double theta);

/// Success probability of the majority vote over n independent guesses each
/// correct with probability p: P[X >= floor(n/2) + 1] for X ~ Bin(n, p).
/// Exact ties (even n) count as failure. Log-space term summation.
double majority_pguess(int n, double p);

/// Kullback-Leibler divergence between Bernoulli(a) and Bernoulli(p),
/// a, p strictly inside (0, 1).
double kl_bernoulli(double a, double p);

/// Upper bound exp(-n KL(a||p)) on the binomial CDF F(a n; n, p), valid for
/// a < p.
double chernoff_tail_bound(double a, int n, double p);

/// 1 - exp(-mu_at) where mu_at = mu(-ln gamma); lower-bounds the majority
/// guessing probability independently of theta.
double pguess_lower_bound(double gamma, double mu_at);

struct TradeoffPoint {
  double pguess;
  double gamma;
  double slack;  // pguess + gamma - 1
};

/// Evaluates the guessing/decoherence trade-off with the whole environment
/// intercepted (n = N): slack must be >= 0 up to rounding.
TradeoffPoint tradeoff_check(double theta, int n_env);

}  // namespace einsdrop
