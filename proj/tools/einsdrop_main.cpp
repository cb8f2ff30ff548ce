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
//
// Command-line front end. Subcommands:
//   toy      - N-qubit imperfect-CNOT chain: decoherence factor and
//              majority-vote guessing probabilities
//   bound    - resource lower bound on the guessing probability
//   tradeoff - guessing/decoherence trade-off over a (theta, N) grid
//   sweep    - Haar-instance antenna optimization sweep (CSV output)
//   verify   - built-in consistency suite
//
// Exit codes: 0 success, 1 usage/config error, 2 verification failure.
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "einsdrop/cli_support.hpp"
#include "einsdrop/linalg.hpp"
#include "einsdrop/optimizer.hpp"
#include "einsdrop/qubit_env.hpp"
#include "einsdrop/scenario.hpp"
#include "einsdrop/version.hpp"

namespace {

using namespace einsdrop;
using einsdrop::cli::fmt_double;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailure = 2;

std::string now_iso8601() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// ---------------------------------------------------------------------------
// Config files and manifests
// ---------------------------------------------------------------------------

using KvMap = std::map<std::string, std::string>;

// Loads --config if present, rejecting keys the command does not know.
KvMap load_config(const std::string& path, const std::string& command,
                  const std::set<std::string>& allowed,
                  bool allow_k_grid = false) {
  if (path.empty()) return {};
  KvMap kv = einsdrop::cli::load_kv_file(path);
  for (const auto& [key, value] : kv) {
    (void)value;
    if (allowed.count(key)) continue;
    if (allow_k_grid && key.rfind("k_grid_", 0) == 0) continue;
    throw std::invalid_argument("config: key '" + key +
                                "' is not part of the '" + command +
                                "' schema");
  }
  return kv;
}

// Applies a config value unless the flag was given explicitly.
void merge_value(const CLI::App* sub, const KvMap& cfg, const std::string& flag,
                 const std::string& key, std::string* target) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return;
  if (sub->count(flag) > 0) return;
  *target = it->second;
}

std::uint64_t resolve_seed(const CLI::App* sub, const KvMap& cfg,
                           std::uint64_t flag_seed) {
  if (sub->count("--seed") > 0) return flag_seed;
  const auto it = cfg.find("seed");
  if (it != cfg.end()) {
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw std::invalid_argument("config: cannot parse seed '" + it->second +
                                  "'");
    }
  }
  if (const char* env = std::getenv("EINSDROP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(
          "EINSDROP_SEED is set but is not an unsigned integer");
    }
  }
  return kDefaultSeed;
}

std::filesystem::path ensure_out_dir(const std::string& out) {
  const std::filesystem::path dir = out.empty() ? "." : out;
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  f << content;
}

// Manifest = informational manifest_* keys + the exact key/value pairs that
// reproduce the run when fed back through --config.
std::string render_manifest(
    const std::string& command,
    const std::vector<std::pair<std::string, std::string>>& outputs,
    const std::vector<std::pair<std::string, std::string>>& config_keys) {
  std::ostringstream out;
  out << "manifest_command = " << command << "\n";
  out << "manifest_version = " << kVersion << "\n";
  out << "manifest_timestamp = " << now_iso8601() << "\n";
  for (const auto& [name, path] : outputs)
    out << "manifest_output_" << name << " = " << path << "\n";
  for (const auto& [key, value] : config_keys)
    out << key << " = " << value << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// toy
// ---------------------------------------------------------------------------

struct ToyArgs {
  std::string theta = "";
  int n_env = 0;
  std::string intercept = "1,3,5";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string config;
};

int run_toy(const CLI::App* sub, ToyArgs args) {
  const KvMap cfg =
      load_config(args.config, "toy", {"theta", "n", "intercept", "seed"});
  merge_value(sub, cfg, "--theta", "theta", &args.theta);
  merge_value(sub, cfg, "--intercept", "intercept", &args.intercept);
  if (sub->count("--n") == 0 && cfg.count("n"))
    args.n_env = static_cast<int>(std::stoll(cfg.at("n")));
  args.seed = resolve_seed(sub, cfg, args.seed);
  if (args.theta.empty())
    throw std::invalid_argument("toy: --theta is required");
  if (args.n_env < 1)
    throw std::invalid_argument("toy: --n must be a positive integer");

  const double theta = einsdrop::cli::parse_angle(args.theta);
  const ImperfectCnotModel model(theta, args.n_env);
  const double gamma = gamma_closed_form(model);
  const double log10_gamma = log_gamma_closed_form(model) / std::numbers::ln10;
  const HelstromSingle hel = helstrom_single(model.theta());

  std::vector<long long> counts = einsdrop::cli::parse_int_list(args.intercept);
  if (counts.empty()) throw std::invalid_argument("toy: empty intercept list");
  std::vector<double> pguess;
  for (long long n : counts) {
    if (n < 1 || n > args.n_env)
      throw std::invalid_argument(
          "toy: intercept count " + std::to_string(n) +
          " outside [1, N = " + std::to_string(args.n_env) + "]");
    if (gamma > 0.0 && gamma <= 1.0) {
      InterceptionModel im{gamma,
                           static_cast<double>(n) *
                               (-std::log(std::abs(std::sin(model.theta())))),
                           static_cast<int>(n)};
      im.validate(args.n_env);
    }
    pguess.push_back(majority_pguess(static_cast<int>(n), hel.success));
  }

  std::cout << "theta_rad    = " << fmt_double(theta) << "\n";
  std::cout << "n_env        = " << args.n_env << "\n";
  std::cout << "gamma        = " << fmt_double(gamma) << "\n";
  std::cout << "log10_gamma  = " << fmt_double(log10_gamma) << "\n";
  std::cout << "helstrom_p   = " << fmt_double(hel.success) << "\n";
  std::cout << "\nn_intercepted  pguess\n";
  for (std::size_t i = 0; i < counts.size(); ++i)
    std::cout << std::setw(13) << counts[i] << "  " << fmt_double(pguess[i])
              << "\n";

  if (!args.out.empty()) {
    const std::filesystem::path dir = ensure_out_dir(args.out);
    std::ostringstream csv;
    csv << "theta,n_env,gamma,helstrom_p,n_intercepted,pguess\n";
    for (std::size_t i = 0; i < counts.size(); ++i)
      csv << fmt_double(theta) << "," << args.n_env << "," << fmt_double(gamma)
          << "," << fmt_double(hel.success) << "," << counts[i] << ","
          << fmt_double(pguess[i]) << "\n";
    write_text_file(dir / "toy.csv", csv.str());
    write_text_file(dir / "toy_manifest.txt",
                    render_manifest("toy", {{"csv", "toy.csv"}},
                                    {{"theta", args.theta},
                                     {"n", std::to_string(args.n_env)},
                                     {"intercept", args.intercept},
                                     {"seed", std::to_string(args.seed)}}));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

struct BoundArgs {
  double gamma = std::nan("");
  double log10_gamma = std::nan("");
  double fraction = std::nan("");
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string config;
};

int run_bound(const CLI::App* sub, BoundArgs args) {
  const KvMap cfg = load_config(args.config, "bound",
                                {"gamma", "log10_gamma", "fraction", "seed"});
  if (sub->count("--gamma") == 0 && cfg.count("gamma"))
    args.gamma = std::stod(cfg.at("gamma"));
  if (sub->count("--log10-gamma") == 0 && cfg.count("log10_gamma"))
    args.log10_gamma = std::stod(cfg.at("log10_gamma"));
  if (sub->count("--fraction") == 0 && cfg.count("fraction"))
    args.fraction = std::stod(cfg.at("fraction"));
  args.seed = resolve_seed(sub, cfg, args.seed);

  const bool have_gamma = !std::isnan(args.gamma);
  const bool have_log10 = !std::isnan(args.log10_gamma);
  if (have_gamma == have_log10)
    throw std::invalid_argument(
        "bound: give exactly one of --gamma or --log10-gamma");
  if (std::isnan(args.fraction))
    throw std::invalid_argument("bound: --fraction is required");
  if (!(args.fraction > 0.0) || args.fraction > 1.0)
    throw std::invalid_argument("bound: fraction must lie in (0, 1]");

  double minus_ln_gamma = 0.0;
  double log10_gamma = 0.0;
  if (have_gamma) {
    if (!(args.gamma > 0.0 && args.gamma < 1.0))
      throw std::invalid_argument("bound: gamma must lie in (0, 1)");
    minus_ln_gamma = -std::log(args.gamma);
    log10_gamma = std::log10(args.gamma);
  } else {
    if (!(args.log10_gamma < 0.0))
      throw std::invalid_argument("bound: log10-gamma must be negative");
    log10_gamma = args.log10_gamma;
    minus_ln_gamma = -args.log10_gamma * std::numbers::ln10;
  }
  const double mu_at = args.fraction * minus_ln_gamma;
  const double gamma_value =
      have_gamma ? args.gamma : std::pow(10.0, args.log10_gamma);
  // The closed form -expm1(-mu) also covers factors that underflow the
  // double range.
  const double bound = (gamma_value > 0.0 && gamma_value < 1.0)
                           ? pguess_lower_bound(gamma_value, mu_at)
                           : -std::expm1(-mu_at);

  std::cout << "log10_gamma  = " << fmt_double(log10_gamma) << "\n";
  std::cout << "gamma        = " << fmt_double(gamma_value) << "\n";
  std::cout << "fraction     = " << fmt_double(args.fraction) << "\n";
  std::cout << "mu           = " << fmt_double(mu_at) << "\n";
  std::cout << "pguess_bound = " << fmt_double(bound) << "\n";

  if (!args.out.empty()) {
    const std::filesystem::path dir = ensure_out_dir(args.out);
    std::ostringstream csv;
    csv << "log10_gamma,gamma,fraction,mu,pguess_lower_bound\n";
    csv << fmt_double(log10_gamma) << "," << fmt_double(gamma_value) << ","
        << fmt_double(args.fraction) << "," << fmt_double(mu_at) << ","
        << fmt_double(bound) << "\n";
    write_text_file(dir / "bound.csv", csv.str());
    std::vector<std::pair<std::string, std::string>> keys;
    if (have_gamma)
      keys.emplace_back("gamma", fmt_double(args.gamma));
    else
      keys.emplace_back("log10_gamma", fmt_double(args.log10_gamma));
    keys.emplace_back("fraction", fmt_double(args.fraction));
    keys.emplace_back("seed", std::to_string(args.seed));
    write_text_file(dir / "bound_manifest.txt",
                    render_manifest("bound", {{"csv", "bound.csv"}}, keys));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// tradeoff
// ---------------------------------------------------------------------------

struct TradeoffArgs {
  std::string theta_grid = "0.05:1.55:0.05";
  std::string n_grid = "1:200";
  std::uint64_t seed = kDefaultSeed;
  std::string out = ".";
  std::string config;
};

int run_tradeoff(const CLI::App* sub, TradeoffArgs args) {
  const KvMap cfg =
      load_config(args.config, "tradeoff", {"theta_grid", "n_grid", "seed"});
  merge_value(sub, cfg, "--theta-grid", "theta_grid", &args.theta_grid);
  merge_value(sub, cfg, "--n-grid", "n_grid", &args.n_grid);
  args.seed = resolve_seed(sub, cfg, args.seed);

  const std::vector<double> thetas =
      einsdrop::cli::parse_double_grid(args.theta_grid);
  const std::vector<long long> ns = einsdrop::cli::parse_int_grid(args.n_grid);
  for (long long n : ns)
    if (n < 1) throw std::invalid_argument("tradeoff: N must be >= 1");

  std::ostringstream csv;
  csv << "theta,n_env,gamma,pguess,slack\n";
  double min_slack = std::numeric_limits<double>::infinity();
  double min_theta = 0.0;
  long long min_n = 0;
  for (double theta : thetas)
    for (long long n : ns) {
      const TradeoffPoint pt = tradeoff_check(theta, static_cast<int>(n));
      csv << fmt_double(theta) << "," << n << "," << fmt_double(pt.gamma)
          << "," << fmt_double(pt.pguess) << "," << fmt_double(pt.slack)
          << "\n";
      if (pt.slack < min_slack) {
        min_slack = pt.slack;
        min_theta = theta;
        min_n = n;
      }
    }

  const std::filesystem::path dir = ensure_out_dir(args.out);
  write_text_file(dir / "tradeoff.csv", csv.str());
  write_text_file(dir / "tradeoff_manifest.txt",
                  render_manifest("tradeoff", {{"csv", "tradeoff.csv"}},
                                  {{"theta_grid", args.theta_grid},
                                   {"n_grid", args.n_grid},
                                   {"seed", std::to_string(args.seed)}}));

  const bool holds = min_slack >= -1e-12;
  std::cout << "rows         = " << thetas.size() * ns.size() << "\n";
  std::cout << "csv          = " << (dir / "tradeoff.csv").string() << "\n";
  std::cout << "min_slack    = " << fmt_double(min_slack)
            << " (theta = " << fmt_double(min_theta) << ", N = " << min_n
            << ")\n";
  std::cout << "tradeoff     = " << (holds ? "PASS" : "FAIL") << "\n";
  return holds ? kExitOk : kExitVerifyFailure;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string d_list;
  std::string instances;
  int k_count = 0;
  int restarts = -1;
  int max_iters = -1;
  double step_size = std::nan("");
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::string out = ".";
  std::string config;
};

int run_sweep_cmd(const CLI::App* sub, SweepArgs args) {
  const KvMap cfg = load_config(
      args.config, "sweep",
      {"d_list", "instances", "k_count", "restarts", "max_iters", "step_size",
       "seed"},
      /*allow_k_grid=*/true);
  merge_value(sub, cfg, "--d", "d_list", &args.d_list);
  merge_value(sub, cfg, "--instances", "instances", &args.instances);
  if (sub->count("--k-count") == 0 && cfg.count("k_count"))
    args.k_count = static_cast<int>(std::stoll(cfg.at("k_count")));
  if (sub->count("--restarts") == 0 && cfg.count("restarts"))
    args.restarts = static_cast<int>(std::stoll(cfg.at("restarts")));
  if (sub->count("--max-iters") == 0 && cfg.count("max_iters"))
    args.max_iters = static_cast<int>(std::stoll(cfg.at("max_iters")));
  if (sub->count("--step-size") == 0 && cfg.count("step_size"))
    args.step_size = std::stod(cfg.at("step_size"));
  args.seed = resolve_seed(sub, cfg, args.seed);

  SweepConfig config;
  if (!args.d_list.empty()) {
    config.env_dims.clear();
    for (long long d : einsdrop::cli::parse_int_list(args.d_list))
      config.env_dims.push_back(static_cast<Index>(d));
  }
  if (!args.instances.empty()) {
    config.instances.clear();
    for (long long i : einsdrop::cli::parse_int_list(args.instances))
      config.instances.push_back(static_cast<int>(i));
  } else if (!args.d_list.empty()) {
    // Dimensions were overridden without instance counts: default to 5 each.
    config.instances.assign(config.env_dims.size(), 5);
  }
  if (config.instances.size() != config.env_dims.size())
    throw std::invalid_argument(
        "sweep: --instances must list one count per environment dimension");
  if (args.restarts >= 0) config.restarts = args.restarts;
  if (args.max_iters > 0) config.max_iters = args.max_iters;
  if (!std::isnan(args.step_size)) config.step_size = args.step_size;
  config.seed = args.seed;

  const int k_count = args.k_count > 0 ? args.k_count : 10;
  config.k_grid.clear();
  for (Index d : config.env_dims) {
    const std::string key = "k_grid_" + std::to_string(d);
    if (cfg.count(key)) {
      std::vector<int> grid;
      for (long long k : einsdrop::cli::parse_int_list(cfg.at(key)))
        grid.push_back(static_cast<int>(k));
      config.k_grid.push_back(std::move(grid));
    } else {
      config.k_grid.push_back(default_k_grid(d, k_count));
    }
  }

  const int threads = args.threads > 0
                          ? args.threads
                          : static_cast<int>(
                                std::max(1u, std::thread::hardware_concurrency()));

  const SweepResult result = run_sweep(config, threads);

  std::ostringstream records;
  records << "D,k,k_over_D,instance,pguess,ceiling,converged\n";
  for (const SweepRecord& r : result.records)
    records << r.env_dim << "," << r.k << ","
            << fmt_double(static_cast<double>(r.k) /
                          static_cast<double>(r.env_dim))
            << "," << r.instance_id << "," << fmt_double(r.optimized_pguess)
            << "," << fmt_double(r.helstrom_ceiling) << ","
            << (r.converged ? 1 : 0) << "\n";

  std::ostringstream aggregates;
  aggregates << "D,k_over_D,mean,std,n\n";
  for (const SweepAggregate& a : result.aggregates)
    aggregates << a.env_dim << "," << fmt_double(a.k_over_d) << ","
               << fmt_double(a.mean_pguess) << "," << fmt_double(a.std_pguess)
               << "," << a.n << "\n";

  const std::filesystem::path dir = ensure_out_dir(args.out);
  write_text_file(dir / "records.csv", records.str());
  write_text_file(dir / "aggregates.csv", aggregates.str());

  std::vector<std::pair<std::string, std::string>> keys;
  {
    std::ostringstream ds, is;
    for (std::size_t i = 0; i < config.env_dims.size(); ++i) {
      ds << (i ? "," : "") << config.env_dims[i];
      is << (i ? "," : "") << config.instances[i];
    }
    keys.emplace_back("d_list", ds.str());
    keys.emplace_back("instances", is.str());
  }
  for (std::size_t i = 0; i < config.env_dims.size(); ++i) {
    std::ostringstream ks;
    for (std::size_t j = 0; j < config.k_grid[i].size(); ++j)
      ks << (j ? "," : "") << config.k_grid[i][j];
    keys.emplace_back("k_grid_" + std::to_string(config.env_dims[i]), ks.str());
  }
  keys.emplace_back("restarts", std::to_string(config.restarts));
  keys.emplace_back("max_iters", std::to_string(config.max_iters));
  keys.emplace_back("step_size", fmt_double(config.step_size));
  keys.emplace_back("seed", std::to_string(config.seed));
  write_text_file(
      dir / "sweep_manifest.txt",
      render_manifest(
          "sweep",
          {{"records", "records.csv"}, {"aggregates", "aggregates.csv"}},
          keys));

  std::cout << "records      = " << (dir / "records.csv").string() << " ("
            << result.records.size() << " rows)\n";
  std::cout << "aggregates   = " << (dir / "aggregates.csv").string() << " ("
            << result.aggregates.size() << " rows)\n";
  std::cout << "manifest     = " << (dir / "sweep_manifest.txt").string()
            << "\n";
  for (const SweepAggregate& a : result.aggregates)
    if (a.k == a.env_dim)
      std::cout << "D=" << a.env_dim
                << "  mean pguess at k=D: " << fmt_double(a.mean_pguess)
                << " (n=" << a.n << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

// Exact binomial CDF by convolution, local oracle for the dominance check.
double verify_binomial_cdf(double x, int n, double p) {
  std::vector<long double> pmf{1.0L};
  for (int trial = 0; trial < n; ++trial) {
    std::vector<long double> next(pmf.size() + 1, 0.0L);
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      next[k] += pmf[k] * (1.0L - static_cast<long double>(p));
      next[k + 1] += pmf[k] * static_cast<long double>(p);
    }
    pmf = std::move(next);
  }
  long double acc = 0.0L;
  for (int k = 0; k <= n; ++k)
    if (k <= x) acc += pmf[k];
  return static_cast<double>(acc);
}

int run_verify(std::uint64_t seed) {
  std::vector<CheckResult> checks;
  RngStream rng(seed);

  {  // Corner structure of the two-party reduced state.
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      RngStream r = rng.split(100 + trial);
      const UnitaryOperator u0 = haar_random_unitary(8, r);
      const UnitaryOperator u1 = haar_random_unitary(8, r);
      const UnitaryOperator basis = haar_random_unitary(8, r);
      ComplexMatrix pm =
          basis.matrix().leftCols(4) * basis.matrix().leftCols(4).adjoint();
      const EavesdropScenario sc(u0, u1, Projector(pm));
      const ComplexMatrix m = rho_sa(sc).matrix();
      for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) {
          if ((i == 0 || i == 3) && (j == 0 || j == 3)) continue;
          worst = std::max(worst, std::abs(m(i, j)));
        }
      worst = std::max(worst, std::abs(m(0, 0) - Complex(0.5, 0.0)));
      worst = std::max(worst, std::abs(m(3, 3) - Complex(0.5, 0.0)));
      worst = std::max(worst, std::abs(2.0 * std::abs(m(0, 3)) -
                                       collective_gamma(u0, u1)));
    }
    checks.push_back({"reduced-state-structure", worst < 1e-9,
                      "max deviation " + fmt_double(worst)});
  }

  {  // Closed-form four-party state against the sequential product.
    double worst = 0.0;
    for (Index d : {Index{2}, Index{8}}) {
      for (int trial = 0; trial < 5; ++trial) {
        RngStream r = rng.split(200 + 10 * d + trial);
        const UnitaryOperator u0 = haar_random_unitary(d, r);
        const UnitaryOperator u1 = haar_random_unitary(d, r);
        const UnitaryOperator basis = haar_random_unitary(d, r);
        ComplexMatrix pm = basis.matrix().leftCols(d / 2) *
                           basis.matrix().leftCols(d / 2).adjoint();
        const EavesdropScenario sc(u0, u1, Projector(pm));
        worst = std::max(
            worst, max_abs(final_state_saev(sc).amplitudes() -
                           final_state_saev_sequential(sc).amplitudes()));
      }
    }
    checks.push_back({"final-state-dual-path", worst < 1e-9,
                      "max deviation " + fmt_double(worst)});
  }

  {  // Guessing probability: reduced state versus scalar closed form.
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      RngStream r = rng.split(300 + trial);
      const UnitaryOperator u0 = haar_random_unitary(10, r);
      const UnitaryOperator u1 = haar_random_unitary(10, r);
      const UnitaryOperator basis = haar_random_unitary(10, r);
      ComplexMatrix pm =
          basis.matrix().leftCols(3) * basis.matrix().leftCols(3).adjoint();
      const EavesdropScenario sc(u0, u1, Projector(pm));
      const ComplexMatrix av = rho_av(sc).matrix();
      const double from_state = av(0, 0).real() + av(3, 3).real();
      const double closed = pguess_objective(u0, u1, sc.p0_antenna());
      worst = std::max(worst, std::abs(from_state - closed));
    }
    checks.push_back({"guessing-dual-path", worst < 1e-9,
                      "max deviation " + fmt_double(worst)});
  }

  {  // KL identity.
    double worst = 0.0;
    for (double theta = 0.05; theta < 1.56; theta += 0.05) {
      const double p = 0.5 * (1.0 + std::abs(std::cos(theta)));
      worst = std::max(worst, std::abs(kl_bernoulli(0.5, p) +
                                       std::log(std::abs(std::sin(theta)))));
    }
    checks.push_back({"kl-log-sine-identity", worst < 1e-12,
                      "max deviation " + fmt_double(worst)});
  }

  {  // Chernoff dominance on a coarse grid.
    bool ok = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (int n : {1, 2, 5, 10, 20, 50})
      for (double p : {0.2, 0.5, 0.8535533905932737, 0.95})
        for (double a : {0.05, 0.1, 0.3, 0.45, 0.7}) {
          if (a >= p) continue;
          const double bound = chernoff_tail_bound(a, n, p);
          const double exact = verify_binomial_cdf(a * n, n, p);
          worst = std::max(worst, exact - bound);
          if (exact > bound + 1e-12) ok = false;
        }
    checks.push_back({"chernoff-dominates-cdf", ok,
                      "max (cdf - bound) " + fmt_double(worst)});
  }

  {  // Trade-off grid.
    double min_slack = std::numeric_limits<double>::infinity();
    for (double theta = 0.05; theta < 1.56; theta += 0.05)
      for (int n = 1; n <= 200; ++n)
        min_slack = std::min(min_slack, tradeoff_check(theta, n).slack);
    checks.push_back({"tradeoff-grid", min_slack >= -1e-12,
                      "min slack " + fmt_double(min_slack)});
  }

  {  // Full-access antenna optimization reaches the two-state optimum.
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      RngStream r = rng.split(400 + trial);
      const UnitaryOperator u0 = haar_random_unitary(8, r);
      const UnitaryOperator u1 = haar_random_unitary(8, r);
      OptimizerOptions opts;
      opts.restarts = 2;
      opts.max_iters = 500;
      const OptimizeResult res = optimize_antenna(u0, u1, 8, r.split(9), opts);
      worst = std::max(worst,
                       std::abs(res.best_pguess -
                                helstrom_ceiling(collective_gamma(u0, u1))));
    }
    checks.push_back(
        {"helstrom-ceiling-d8", worst < 1e-3, "max gap " + fmt_double(worst)});
  }

  {  // 20-qubit toy chain decoherence factor.
    const double lg =
        log_gamma_closed_form(ImperfectCnotModel(std::numbers::pi / 4.0, 20));
    const double dev = std::abs(lg - (-10.0 * std::log(2.0)));
    checks.push_back({"toy-gamma-2^-10", dev <= 1e-15,
                      "log-space deviation " + fmt_double(dev)});
  }

  {  // Majority triple of the toy chain.
    const double p = helstrom_single(std::numbers::pi / 4.0).success;
    const double q1 = majority_pguess(1, p);
    const double q3 = majority_pguess(3, p);
    const double q5 = majority_pguess(5, p);
    const bool ok = std::abs(q1 - 0.85) < 0.005 &&
                    std::abs(q3 - 0.94) < 0.005 && std::abs(q5 - 0.98) < 0.005;
    checks.push_back({"toy-majority-triple", ok,
                      fmt_double(q1) + " / " + fmt_double(q3) + " / " +
                          fmt_double(q5)});
  }

  int passed = 0;
  for (const CheckResult& c : checks) {
    std::cout << (c.pass ? "[ ok ] " : "[FAIL] ") << std::left << std::setw(28)
              << c.name << " " << c.detail << "\n";
    if (c.pass) ++passed;
  }
  std::cout << "verify: " << passed << "/" << checks.size()
            << " checks passed\n";
  return passed == static_cast<int>(checks.size()) ? kExitOk
                                                   : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Decoherence wiretap toolkit: how much an eavesdropper on the "
      "environment learns about a measured qubit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ToyArgs toy_args;
  CLI::App* toy = app.add_subcommand(
      "toy", "Imperfect-CNOT chain: decoherence factor and majority guessing");
  toy->add_option("--theta", toy_args.theta,
                  "Coupling angle (radians or 'pi/4' style)");
  toy->add_option("--n", toy_args.n_env, "Number of environment qubits");
  toy->add_option("--intercept", toy_args.intercept,
                  "Comma list of intercepted-qubit counts (default 1,3,5)");
  toy->add_option("--seed", toy_args.seed, "Seed recorded in the manifest");
  toy->add_option("--out", toy_args.out, "Directory for toy.csv + manifest");
  toy->add_option("--config", toy_args.config, "Key-value config file");

  BoundArgs bound_args;
  CLI::App* bound = app.add_subcommand(
      "bound", "Lower bound on the guessing probability from antenna reach");
  bound->add_option("--gamma", bound_args.gamma, "Decoherence factor in (0,1)");
  bound->add_option("--log10-gamma", bound_args.log10_gamma,
                    "log10 of the decoherence factor (negative)");
  bound->add_option("--fraction", bound_args.fraction,
                    "Observed fraction of the environment, in (0,1]");
  bound->add_option("--seed", bound_args.seed, "Seed recorded in the manifest");
  bound->add_option("--out", bound_args.out,
                    "Directory for bound.csv + manifest");
  bound->add_option("--config", bound_args.config, "Key-value config file");

  TradeoffArgs tradeoff_args;
  CLI::App* tradeoff = app.add_subcommand(
      "tradeoff", "Guessing/decoherence trade-off over a (theta, N) grid");
  tradeoff->add_option("--theta-grid", tradeoff_args.theta_grid,
                       "start:stop:step in radians (default 0.05:1.55:0.05)");
  tradeoff->add_option("--n-grid", tradeoff_args.n_grid,
                       "start:stop[:step] (default 1:200)");
  tradeoff->add_option("--seed", tradeoff_args.seed,
                       "Seed recorded in the manifest");
  tradeoff->add_option("--out", tradeoff_args.out,
                       "Output directory (default .)");
  tradeoff->add_option("--config", tradeoff_args.config,
                       "Key-value config file");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Optimize antennas over Haar instances and tabulate pguess");
  sweep->add_option("--d", sweep_args.d_list,
                    "Comma list of environment dimensions");
  sweep->add_option("--instances", sweep_args.instances,
                    "Comma list of instance counts, one per dimension");
  sweep->add_option("--k-count", sweep_args.k_count,
                    "Points in the default monitored-size grid (default 10)");
  sweep->add_option("--restarts", sweep_args.restarts,
                    "Random restarts per optimization (default 5)");
  sweep->add_option("--max-iters", sweep_args.max_iters,
                    "Ascent step budget per start (default 2000)");
  sweep->add_option("--step-size", sweep_args.step_size,
                    "Base ascent step (default 1.0)");
  sweep->add_option("--seed", sweep_args.seed, "Root seed");
  sweep->add_option("--threads", sweep_args.threads,
                    "Worker threads (default: hardware concurrency)");
  sweep->add_option("--out", sweep_args.out, "Output directory (default .)");
  sweep->add_option("--config", sweep_args.config, "Key-value config file");

  std::uint64_t verify_seed = kDefaultSeed;
  CLI::App* verify =
      app.add_subcommand("verify", "Run the built-in consistency suite");
  verify->add_option("--seed", verify_seed, "Seed for the random checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (toy->parsed()) return run_toy(toy, toy_args);
    if (bound->parsed()) return run_bound(bound, bound_args);
    if (tradeoff->parsed()) return run_tradeoff(tradeoff, tradeoff_args);
    if (sweep->parsed()) return run_sweep_cmd(sweep, sweep_args);
    if (verify->parsed()) return run_verify(verify_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
