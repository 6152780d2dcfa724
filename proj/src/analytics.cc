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

#include "mftp/analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mftp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{l >= l0} scale * x^l
SeriesValue geometric_tail(double scale, double x, int l0) {
  if (x >= 1.0) return {kInf, true};
  return {scale * std::pow(x, l0) / (1.0 - x), false};
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in (0, 1/2)");
}

int first_length(double r_cor) { return static_cast<int>(std::ceil(r_cor)); }

}  // namespace

SeriesValue saw_chain_bound(double p, double r_cor) {
  check_probability(p);
  if (!(r_cor >= 1.0)) throw std::invalid_argument("r_cor must be >= 1");
  // 3 * 4^(l-1) * 2^l * p^(l/2) = (3/4) (8 sqrt p)^l
  return geometric_tail(0.75, 8.0 * std::sqrt(p), first_length(r_cor));
}

double saw_chain_partial_sum(double p, double r_cor, int max_terms) {
  double sum = 0.0;
  const int l0 = first_length(r_cor);
  for (int l = l0; l < l0 + max_terms; ++l) {
    sum += 0.75 * std::pow(8.0 * std::sqrt(p), l);
  }
  return sum;
}

double BoundInputs::correlation_length() const {
  return r_cor > 0.0 ? r_cor : alpha * std::log(static_cast<double>(L));
}

namespace {

void check_bound_inputs(const BoundInputs& in) {
  check_probability(in.p);
  if (in.L < 2) throw std::invalid_argument("L must be >= 2");
  if (!(in.correlation_length() > 0.0)) throw std::invalid_argument("r_cor must be positive");
}

}  // namespace

BoundTerms logical_error_bound(const BoundInputs& in) {
  check_bound_inputs(in);
  const double r = in.correlation_length();
  const double sites = static_cast<double>(in.L) * in.L;
  BoundTerms out;
  out.chain = geometric_tail(8.0 / 3.0, 6.0 * std::sqrt(in.p), first_length(r));
  out.mismatch = std::pow(in.p / (1.0 - in.p), r / 2.0);
  out.total = out.chain.divergent ? SeriesValue{kInf, true}
                                  : SeriesValue{sites * (out.chain.value + out.mismatch), false};
  return out;
}

double logical_error_bound_partial_sum(const BoundInputs& in, int max_terms) {
  check_bound_inputs(in);
  const double r = in.correlation_length();
  const int l0 = first_length(r);
  double chain = 0.0;
  for (int l = l0; l < l0 + max_terms; ++l) {
    chain += 8.0 / 3.0 * std::pow(6.0 * std::sqrt(in.p), l);
  }
  return static_cast<double>(in.L) * in.L * (chain + std::pow(in.p / (1.0 - in.p), r / 2.0));
}

double analytic_threshold(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const double odds = std::exp(-4.0 / alpha) / 36.0;
  return odds / (1.0 + odds);
}

double depolarizing_failure(double gamma, double t) {
  return 0.75 * -std::expm1(-gamma * t);
}

namespace {

double weighted_squares(const FailureSeries& s, double t_max, double g) {
  double sum = 0.0;
  for (const auto& pt : s) {
    const double f = depolarizing_failure(g, pt.t / t_max);
    const double var = std::max(f * (1.0 - f), 1e-12);
    const double r = pt.p_fail - f;
    sum += pt.n_trials * r * r / var;
  }
  return sum;
}

}  // namespace

GammaFit fit_gamma_eff(const FailureSeries& series) {
  if (series.size() < 3) throw std::invalid_argument("need at least 3 points to fit");
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& pt = series[k];
    if (!(pt.p_fail >= 0.0 && pt.p_fail <= 1.0)) throw std::invalid_argument("p_fail outside [0, 1]");
    if (pt.n_trials < 1) throw std::invalid_argument("n_trials must be positive");
    if (!(pt.t > 0.0) || (k > 0 && !(pt.t > series[k - 1].t))) {
      throw std::invalid_argument("t must be positive and strictly increasing");
    }
  }
  const double t_max = series.back().t;
  constexpr double kLo = 1e-8, kHi = 1e4;

  if (std::all_of(series.begin(), series.end(), [](const auto& pt) { return pt.p_fail == 0.0; })) {
    return {0.0, 0.0, FitFlag::NoFailures};
  }
  if (std::all_of(series.begin(), series.end(), [](const auto& pt) { return pt.p_fail >= 0.75; })) {
    return {kHi / t_max, weighted_squares(series, t_max, kHi), FitFlag::Saturated};
  }

  // Coarse log grid, then golden section around the best grid point.
  constexpr int kGrid = 241;
  const double log_lo = std::log(kLo), log_hi = std::log(kHi);
  const double step = (log_hi - log_lo) / (kGrid - 1);
  int best = 0;
  double best_val = kInf;
  for (int k = 0; k < kGrid; ++k) {
    const double v = weighted_squares(series, t_max, std::exp(log_lo + k * step));
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  double a = log_lo + std::max(best - 1, 0) * step;
  double b = log_lo + std::min(best + 1, kGrid - 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double x) { return weighted_squares(series, t_max, std::exp(x)); };
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-13) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  const double g = std::exp((a + b) / 2.0);
  return {g / t_max, weighted_squares(series, t_max, g), FitFlag::Ok};
}

ResourceEstimate resource_estimate(const ResourceParams& p) {
  for (double v : {p.gamma, p.kappa, p.Gamma, p.J_over_gamma, p.h_over_gamma, p.trotter_product_J,
                   p.trotter_product_h, p.mc_steps}) {
    if (!(v > 0.0)) throw std::invalid_argument("all resource parameters must be positive");
  }
  ResourceEstimate out;
  const double tau_J = std::sqrt(p.trotter_product_J / p.J_over_gamma) / p.gamma;
  const double tau_h = std::sqrt(p.trotter_product_h / p.h_over_gamma) / p.gamma;
  out.tau = std::min(tau_J, tau_h);
  out.t_cool = p.mc_steps / p.gamma;
  out.m = std::llround(out.t_cool / out.tau);
  out.t_cycle = out.t_cool + static_cast<double>(out.m) / p.kappa;
  out.p_cycle = -std::expm1(-p.Gamma * out.t_cycle);

  if (p.J_over_gamma <= 1.0 || p.h_over_gamma <= 1.0) {
    out.warnings.emplace_back("Markov approximation needs J, h >> gamma");
  }
  if (p.trotter_product_J >= 1.0 || p.trotter_product_h >= 1.0) {
    out.warnings.emplace_back("Trotter splitting needs J gamma tau^2 << 1 and h gamma tau^2 << 1");
  }
  return out;
}

}  // namespace mftp
