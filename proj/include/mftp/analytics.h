// Copyright 2026 The MFTP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MFTP_ANALYTICS_H_
#define MFTP_ANALYTICS_H_

#include <string>
#include <vector>

namespace mftp {

/// Result of a geometric tail sum; `divergent` is set when the ratio is >= 1
/// and `value` is then +inf.
struct SeriesValue {
  double value = 0.0;
  bool divergent = false;
};

/// Sum over l >= ceil(r_cor) of the self-avoiding-walk count 3 * 4^(l-1)
/// times 2^l p^(l/2), i.e. (3/4) x^l with x = 8 sqrt(p), in closed form.
/// Throws unless 0 < p < 1/2 and r_cor >= 1.
SeriesValue saw_chain_bound(double p, double r_cor);

/// Same tail as saw_chain_bound, summed term by term up to `max_terms`.
double saw_chain_partial_sum(double p, double r_cor, int max_terms);

struct BoundInputs {
  double p = 0.0;
  int L = 0;
  double alpha = 1.0;
  /// Typical chain length; when <= 0 it is derived as alpha * ln L.
  double r_cor = 0.0;

  double correlation_length() const;
};

struct BoundTerms {
  SeriesValue chain;       // sum_{l >= ceil(r_cor)} (8/3) 6^l p^(l/2)
  double mismatch = 0.0;   // (p / (1 - p))^(r_cor / 2)
  SeriesValue total;       // L^2 (chain + mismatch)
};

/// Upper bound on the per-cycle logical error probability:
/// L^2 [ sum_{l >= ceil(r_cor)} (8/3) 6^l p^(l/2) + (p/(1-p))^(r_cor/2) ].
/// Divergent when 6 sqrt(p) >= 1. Throws unless 0 < p < 1/2, L >= 2 and
/// r_cor > 0.
BoundTerms logical_error_bound(const BoundInputs& in);
double logical_error_bound_partial_sum(const BoundInputs& in, int max_terms);

/// The p for which p / (1 - p) = exp(-4 / alpha) / 36. Throws for alpha <= 0.
double analytic_threshold(double alpha);

struct FailurePoint {
  double t = 0.0;
  double p_fail = 0.0;
  int n_trials = 0;
};

using FailureSeries = std::vector<FailurePoint>;

enum class FitFlag { Ok, NoFailures, Saturated };

struct GammaFit {
  double gamma = 0.0;
  double residual = 0.0;  // weighted sum of squares at the optimum
  FitFlag flag = FitFlag::Ok;
};

/// Weighted least-squares fit of p_fail(t) = (3/4)(1 - exp(-gamma t)) with
/// binomial weights n / (f (1 - f)) evaluated on the model curve.
/// Times are rescaled by t_max and gamma * t_max is searched by a log grid
/// followed by golden-section refinement over [1e-8, 1e4]. Throws for fewer
/// than 3 points, non-increasing t or p_fail outside [0, 1].
GammaFit fit_gamma_eff(const FailureSeries& series);

/// Model curve (3/4)(1 - exp(-gamma t)).
double depolarizing_failure(double gamma, double t);

struct ResourceParams {
  double gamma = 1.0;   // ancilla dissipation rate
  double kappa = 10.0;  // qubit-spin coupling rate (Gamma / kappa = 1e-5)
  double Gamma = 1e-4;  // qubit decoherence rate
  double J_over_gamma = 10.0;
  double h_over_gamma = 10.0;
  double trotter_product_J = 0.1;  // target J gamma tau^2
  double trotter_product_h = 0.1;  // target h gamma tau^2
  double mc_steps = 100.0;         // cooling time in units of 1/gamma
};

struct ResourceEstimate {
  double tau = 0.0;
  long long m = 0;  // t_cool / tau rounded to the nearest integer
  double t_cool = 0.0;
  double t_cycle = 0.0;
  double p_cycle = 0.0;
  std::vector<std::string> warnings;
};

/// tau = min over {J, h} of sqrt(product / (X / gamma)) / gamma,
/// t_cool = mc_steps / gamma, m = round(t_cool / tau),
/// t_cycle = t_cool + m / kappa, p_cycle = 1 - exp(-Gamma t_cycle).
/// Throws for nonpositive rates; soft constraint violations become warnings.
ResourceEstimate resource_estimate(const ResourceParams& params);

}  // namespace mftp

#endif  // MFTP_ANALYTICS_H_
