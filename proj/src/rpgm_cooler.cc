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

#include "mftp/rpgm_cooler.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mftp {

int SpinConfiguration::down_count() const {
  return static_cast<int>(std::count(spins.begin(), spins.end(), std::int8_t{-1}));
}

CouplingMode parse_coupling_mode(std::string_view name) {
  if (name == "fixed") return CouplingMode::FixedJ;
  if (name == "log") return CouplingMode::LogScaledJ;
  if (name == "large") return CouplingMode::LargeJ;
  throw std::invalid_argument("unknown coupling mode '" + std::string(name) + "'");
}

SweepOrder parse_sweep_order(std::string_view name) {
  if (name == "raster") return SweepOrder::Raster;
  if (name == "random") return SweepOrder::Random;
  throw std::invalid_argument("unknown sweep order '" + std::string(name) + "'");
}

double coupling_for(const CoolingParams& params, int L) {
  switch (params.mode) {
    case CouplingMode::FixedJ: return params.J;
    case CouplingMode::LogScaledJ: return params.alpha * params.h * std::log(L) / 2.0;
    case CouplingMode::LargeJ: return params.h * L;
  }
  return params.J;
}

std::vector<ScheduleStage> default_schedule(double beta_target, double h, int sweeps_total,
                                            int stages) {
  if (stages < 1 || sweeps_total < stages) {
    throw std::invalid_argument("schedule needs at least one sweep per stage");
  }
  std::vector<ScheduleStage> out(static_cast<std::size_t>(stages));
  const double start = 0.1 / h;
  const bool frozen = std::isinf(beta_target);
  const double top = frozen ? 10.0 / h : beta_target;
  for (int k = 0; k < stages; ++k) {
    auto& s = out[static_cast<std::size_t>(k)];
    s.sweeps = sweeps_total / stages;
    if (top <= start || stages == 1) {
      s.beta = top;
    } else {
      s.beta = start * std::pow(top / start, static_cast<double>(k) / (stages - 1));
    }
  }
  out.back().beta = beta_target;
  out.back().sweeps += sweeps_total % stages;
  return out;
}

std::vector<ScheduleStage> parse_schedule(std::string_view text) {
  std::vector<ScheduleStage> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("schedule item needs beta:sweeps");
    ScheduleStage s;
    const auto beta_text = item.substr(0, colon);
    if (beta_text == "inf") {
      s.beta = std::numeric_limits<double>::infinity();
    } else {
      s.beta = std::stod(std::string(beta_text));
    }
    s.sweeps = std::stoi(std::string(item.substr(colon + 1)));
    out.push_back(s);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

namespace {

void check_sizes(const SpinConfiguration& u, std::span<const std::int8_t> signs,
                 const LatticeGeometry& geom, Sector sector) {
  if (u.size() != geom.edge_count() ||
      static_cast<int>(signs.size()) != geom.check_count(sector)) {
    throw std::invalid_argument("spin or syndrome size does not match lattice");
  }
}

std::int8_t signed_parity(const SpinConfiguration& u, std::span<const std::int8_t> signs,
                          const LatticeGeometry& geom, Sector sector, int check) {
  int p = signs[static_cast<std::size_t>(check)];
  for (int e : geom.check_edges(sector, check)) p *= u.spins[static_cast<std::size_t>(e)];
  return static_cast<std::int8_t>(p);
}

}  // namespace

double energy(const SpinConfiguration& u, std::span<const std::int8_t> signs, Couplings c,
              const LatticeGeometry& geom, Sector sector) {
  check_sizes(u, signs, geom, sector);
  long plaquette = 0;
  for (int k = 0; k < geom.check_count(sector); ++k) {
    plaquette += signed_parity(u, signs, geom, sector, k);
  }
  long field = 0;
  for (auto s : u.spins) field += s;
  return -c.J * static_cast<double>(plaquette) - c.h * static_cast<double>(field);
}

double local_field_delta(const SpinConfiguration& u, std::span<const std::int8_t> signs,
                         int edge, Couplings c, const LatticeGeometry& geom, Sector sector) {
  check_sizes(u, signs, geom, sector);
  if (edge < 0 || edge >= geom.edge_count()) throw std::out_of_range("edge index out of range");
  double local = 0.0;
  for (int check : geom.edge_checks(sector, edge)) {
    int p = signs[static_cast<std::size_t>(check)];
    for (int e : geom.check_edges(sector, check)) {
      if (e != edge) p *= u.spins[static_cast<std::size_t>(e)];
    }
    local += p;
  }
  return 2.0 * u.spins[static_cast<std::size_t>(edge)] * (c.J * local + c.h);
}

MetropolisSampler::MetropolisSampler(const LatticeGeometry& geom, Sector sector,
                                     std::span<const std::int8_t> signs, Couplings couplings,
                                     SpinConfiguration start)
    : geom_(geom), sector_(sector), couplings_(couplings), u_(std::move(start)) {
  check_sizes(u_, signs, geom, sector);
  parity_.resize(static_cast<std::size_t>(geom.check_count(sector)));
  for (int k = 0; k < geom.check_count(sector); ++k) {
    parity_[static_cast<std::size_t>(k)] = signed_parity(u_, signs, geom, sector, k);
  }
  energy_ = energy(u_, signs, couplings, geom, sector);
  for (int k = -2; k <= 2; ++k) {
    for (int up = 0; up < 2; ++up) {
      delta_[static_cast<std::size_t>(k + 2)][static_cast<std::size_t>(up)] =
          2.0 * (couplings_.J * k + couplings_.h * (up ? 1 : -1));
    }
  }
  set_beta(0.0);
}

void MetropolisSampler::set_beta(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
  beta_ = beta;
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t up = 0; up < 2; ++up) {
      const double d = delta_[k][up];
      accept_[k][up] = d <= 0.0 ? 1.0 : std::exp(-beta * d);
    }
  }
}

bool MetropolisSampler::try_flip(int edge, CounterRng& rng) {
  const auto e = static_cast<std::size_t>(edge);
  int k = 0;
  const auto checks = geom_.edge_checks(sector_, edge);
  for (int c : checks) k += parity_[static_cast<std::size_t>(c)];
  const auto row = static_cast<std::size_t>(k + 2);
  const auto up = static_cast<std::size_t>(u_.spins[e] == 1);
  const double d = delta_[row][up];
  if (d > 0.0 && !(rng.uniform() < accept_[row][up])) return false;
  u_.spins[e] = static_cast<std::int8_t>(-u_.spins[e]);
  for (int c : checks) parity_[static_cast<std::size_t>(c)] *= -1;
  energy_ += d;
  return true;
}

int MetropolisSampler::sweep(CounterRng& rng, SweepOrder order) {
  const int n = u_.size();
  int accepted = 0;
  if (order == SweepOrder::Raster) {
    for (int e = 0; e < n; ++e) accepted += try_flip(e, rng);
  } else {
    for (int k = 0; k < n; ++k) {
      accepted += try_flip(static_cast<int>(rng.below(static_cast<std::uint32_t>(n))), rng);
    }
  }
  return accepted;
}

std::uint64_t MetropolisSampler::state_bits() const {
  std::uint64_t bits = 0;
  for (int i = 0; i < u_.size() && i < 64; ++i) {
    if (u_.spins[static_cast<std::size_t>(i)] == -1) bits |= std::uint64_t{1} << i;
  }
  return bits;
}

void metropolis_sweep(SpinConfiguration& u, std::span<const std::int8_t> signs, double beta,
                      Couplings c, const LatticeGeometry& geom, Sector sector, CounterRng& rng,
                      SweepOrder order) {
  MetropolisSampler sampler(geom, sector, signs, c, std::move(u));
  sampler.set_beta(beta);
  sampler.sweep(rng, order);
  u = sampler.state();
}

SpinConfiguration anneal(std::span<const std::int8_t> signs, const CoolingParams& params,
                         const LatticeGeometry& geom, Sector sector, CounterRng& rng) {
  const Couplings c{coupling_for(params, geom.size()), params.h};
  if (!(c.J > 0.0) || !(c.h > 0.0)) throw std::invalid_argument("J and h must be positive");
  const auto schedule = params.schedule.empty()
                            ? default_schedule(params.beta_target, params.h, params.sweeps_total)
                            : params.schedule;
  if (schedule.empty()) throw std::invalid_argument("empty annealing schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k].beta >= 0.0) || schedule[k].sweeps < 0 ||
        (k > 0 && schedule[k].beta < schedule[k - 1].beta)) {
      throw std::invalid_argument("schedule betas must be nonnegative and nondecreasing");
    }
  }
  MetropolisSampler sampler(geom, sector, signs, c, SpinConfiguration(geom.edge_count()));
  for (const auto& stage : schedule) {
    sampler.set_beta(stage.beta);
    for (int s = 0; s < stage.sweeps; ++s) sampler.sweep(rng, params.order);
  }
  return sampler.state();
}

double nishimori_beta(double p, double h) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("Nishimori beta needs 0 < p < 1/2");
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  return std::log((1.0 - p) / p) / (2.0 * h);
}

std::vector<double> exact_gibbs(const LatticeGeometry& geom, Sector sector,
                                std::span<const std::int8_t> signs, double beta, Couplings c) {
  const int n = geom.edge_count();
  if (n > 18) throw std::invalid_argument("exact Gibbs enumeration limited to 18 spins");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> log_w(states);
  SpinConfiguration u(n);
  for (std::size_t s = 0; s < states; ++s) {
    for (int i = 0; i < n; ++i) {
      u.spins[static_cast<std::size_t>(i)] = (s >> i) & 1u ? -1 : 1;
    }
    log_w[s] = -beta * energy(u, signs, c, geom, sector);
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  double z = 0.0;
  for (auto& w : log_w) {
    w = std::exp(w - top);
    z += w;
  }
  for (auto& w : log_w) w /= z;
  return log_w;
}

BitField correction_from_spins(const SpinConfiguration& u) {
  BitField out(u.spins.size());
  for (std::size_t i = 0; i < u.spins.size(); ++i) {
    if (u.spins[i] == -1) out.set(i, true);
  }
  return out;
}

}  // namespace mftp
