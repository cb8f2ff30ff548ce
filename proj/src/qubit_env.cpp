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
#include "einsdrop/qubit_env.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "einsdrop/linalg.hpp"

namespace einsdrop {

namespace {

constexpr double kPi = std::numbers::pi;

// Explicit 2^N tensor powers stop being sensible well before memory runs
// out; the closed forms cover everything above this.
constexpr int kMaxExplicitEnvQubits = 12;

double require_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(who) + ": p = " +
                                std::to_string(p) + " is not in [0, 1]");
  return p;
}

}  // namespace

ImperfectCnotModel::ImperfectCnotModel(double theta, int n_env)
    : n_env_(n_env) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("ImperfectCnotModel: theta must be finite");
  if (n_env < 1)
    throw std::invalid_argument("ImperfectCnotModel: n_env must be >= 1");
  // Fold into [0, pi/2]; the model depends only on |sin|, |cos|.
  double t = std::fmod(std::abs(theta), kPi);
  if (t > kPi / 2.0) t = kPi - t;
  theta_ = t;
}

void InterceptionModel::validate(int n_env) const {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("InterceptionModel: gamma must be in (0, 1]");
  if (mu_at_minus_log_gamma < 0.0)
    throw std::invalid_argument("InterceptionModel: mu must be nonnegative");
  if (n_intercepted < 0 || n_intercepted > n_env)
    throw std::invalid_argument(
        "InterceptionModel: intercepted count " +
        std::to_string(n_intercepted) + " exceeds environment size " +
        std::to_string(n_env));
}

UnitaryOperator p_oslash(double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  ComplexMatrix m(2, 2);
  m << s, c, c, -s;
  return UnitaryOperator(std::move(m));
}

std::pair<UnitaryOperator, UnitaryOperator> env_unitaries(
    const ImperfectCnotModel& model) {
  const int n = model.n_env();
  if (n > kMaxExplicitEnvQubits)
    throw std::domain_error(
        "env_unitaries: explicit matrices limited to N <= " +
        std::to_string(kMaxExplicitEnvQubits) + " qubits (got N = " +
        std::to_string(n) + "); use gamma_closed_form instead");
  const ComplexMatrix single = p_oslash(model.theta()).matrix();
  ComplexMatrix u1 = single;
  for (int s = 1; s < n; ++s) u1 = kron(u1, single);
  const Index d = u1.rows();
  return {UnitaryOperator(ComplexMatrix::Identity(d, d)),
          UnitaryOperator(std::move(u1))};
}

double log_gamma_closed_form(const ImperfectCnotModel& model) {
  // Extended precision keeps N * ln|sin theta| honest to ~1e-18 even for
  // the canonical angles, where double rounding alone costs ~2e-15.
  const long double s = fabsl(sinl(static_cast<long double>(model.theta())));
  if (s == 0.0L) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(static_cast<long double>(model.n_env()) * logl(s));
}

double gamma_closed_form(const ImperfectCnotModel& model) {
  const double lg = log_gamma_closed_form(model);
  return std::isinf(lg) ? 0.0 : std::exp(lg);
}

int min_env_qubits(double gamma_target, double theta) {
  if (!(gamma_target > 0.0 && gamma_target < 1.0))
    throw std::domain_error("min_env_qubits: gamma target must be in (0, 1)");
  const double s = std::abs(std::sin(theta));
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error(
        "min_env_qubits: undefined for theta with |sin theta| in {0, 1}");
  const double n = std::log(gamma_target) / std::log(s);
  return std::max(1, static_cast<int>(std::ceil(n - 1e-9)));
}

HelstromSingle helstrom_single(double theta) {
  const double half = 0.5 * theta;
  const double ch = std::cos(half);
  const double sh = std::sin(half);
  const double off = -0.5 * std::sin(theta);
  ComplexMatrix m(2, 2);
  m << ch * ch, off, off, sh * sh;
  return {Projector(std::move(m)), 0.5 * (1.0 + std::abs(std::cos(theta)))};
}

double majority_pguess(int n, double p) {
  if (n < 1)
    throw std::invalid_argument("majority_pguess: n must be >= 1");
  require_probability(p, "majority_pguess");
  const int threshold = n / 2 + 1;  // ties on even n count as failure
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(n + 1.0);
  const auto log_term = [&](int k) {
    return lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lp +
           (n - k) * lq;
  };
  // Sum the smaller of the two tails (compensated) so the result stays
  // accurate to ~1 ulp on both ends of [0, 1].
  const bool sum_upper = threshold > n * p;
  double sum = 0.0;
  double carry = 0.0;
  const int lo = sum_upper ? threshold : 0;
  const int hi = sum_upper ? n : threshold - 1;
  for (int k = lo; k <= hi; ++k) {
    const double y = std::exp(log_term(k)) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  const double tail = sum_upper ? sum : 1.0 - sum;
  return std::min(std::max(tail, 0.0), 1.0);
}

double kl_bernoulli(double a, double p) {
  if (!(a > 0.0 && a < 1.0) || !(p > 0.0 && p < 1.0))
    throw std::domain_error(
        "kl_bernoulli: arguments must lie strictly inside (0, 1)");
  return a * std::log(a / p) + (1.0 - a) * std::log((1.0 - a) / (1.0 - p));
}

double chernoff_tail_bound(double a, int n, double p) {
  if (n < 1)
    throw std::invalid_argument("chernoff_tail_bound: n must be >= 1");
  if (!(a < p))
    throw std::domain_error("chernoff_tail_bound: requires a < p");
  return std::exp(-static_cast<double>(n) * kl_bernoulli(a, p));
}

double pguess_lower_bound(double gamma, double mu_at) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("pguess_lower_bound: gamma must be in (0, 1)");
  if (mu_at < 0.0)
    throw std::domain_error("pguess_lower_bound: mu must be nonnegative");
  return -std::expm1(-mu_at);
}

TradeoffPoint tradeoff_check(double theta, int n_env) {
  const ImperfectCnotModel model(theta, n_env);
  const double p = 0.5 * (1.0 + std::abs(std::cos(model.theta())));
  const double pguess = majority_pguess(n_env, p);
  const double gamma = gamma_closed_form(model);
  return {pguess, gamma, pguess + gamma - 1.0};
}

}  // namespace einsdrop
