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

#ifndef MFTP_RPGM_COOLER_H_
#define MFTP_RPGM_COOLER_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mftp/bits.h"
#include "mftp/lattice.h"
#include "mftp/rng.h"

namespace mftp {

/// Classical ancilla spins u_i = +1/-1, one per edge.
struct SpinConfiguration {
  std::vector<std::int8_t> spins;

  SpinConfiguration() = default;
  explicit SpinConfiguration(int edge_count) : spins(static_cast<std::size_t>(edge_count), 1) {}

  int size() const { return static_cast<int>(spins.size()); }
  int down_count() const;
  double down_fraction() const { return static_cast<double>(down_count()) / size(); }
  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;
};

struct Couplings {
  double J = 1.0;
  double h = 1.0;
};

enum class CouplingMode { FixedJ, LogScaledJ, LargeJ };
enum class SweepOrder { Raster, Random };

struct ScheduleStage {
  double beta = 0.0;
  int sweeps = 0;
};

struct CoolingParams {
  double J = 1.0;  // used as-is in FixedJ mode
  double h = 1.0;
  double alpha = 1.0;
  double beta_target = 1.0;
  /// Explicit stages; empty means default_schedule(beta_target, h, sweeps_total).
  std::vector<ScheduleStage> schedule;
  int sweeps_total = 2000;
  CouplingMode mode = CouplingMode::FixedJ;
  SweepOrder order = SweepOrder::Raster;
};

CouplingMode parse_coupling_mode(std::string_view name);
SweepOrder parse_sweep_order(std::string_view name);

/// Plaquette coupling for a lattice of size L:
///   FixedJ      J
///   LogScaledJ  4J/(2h) = alpha * ln L, i.e. J = alpha * h * ln(L) / 2
///   LargeJ      J = h * L, so 4J/(2h) = 2L exceeds every defect separation
double coupling_for(const CoolingParams& params, int L);

/// 4J/(2h): the longest chain the plaquette terms hold together against the field.
inline double correlation_length(const Couplings& c) { return 4.0 * c.J / (2.0 * c.h); }

/// Geometric ladder of `stages` inverse temperatures from 0.1/h up to
/// beta_target with equal sweeps per stage (remainder on the last stage).
/// A target at or below 0.1/h gives a flat schedule; an infinite target
/// climbs to 10/h and finishes the last stage at zero temperature.
std::vector<ScheduleStage> default_schedule(double beta_target, double h, int sweeps_total,
                                            int stages = 8);

/// Parses "beta:sweeps,beta:sweeps,..." (beta may be "inf").
std::vector<ScheduleStage> parse_schedule(std::string_view text);

/// H = -J sum_c s_c prod_{i in c} u_i - h sum_i u_i over the checks of one sector.
double energy(const SpinConfiguration& u, std::span<const std::int8_t> signs, Couplings c,
              const LatticeGeometry& geom, Sector sector);

/// Energy change from flipping u[edge].
double local_field_delta(const SpinConfiguration& u, std::span<const std::int8_t> signs,
                         int edge, Couplings c, const LatticeGeometry& geom, Sector sector);

/// Single-flip Metropolis chain that caches the signed parity
/// s_c * prod u of every check so a proposal costs O(1).
class MetropolisSampler {
 public:
  MetropolisSampler(const LatticeGeometry& geom, Sector sector, std::span<const std::int8_t> signs,
                    Couplings couplings, SpinConfiguration start);

  void set_beta(double beta);
  double beta() const { return beta_; }

  /// One pass over all edges; returns the number of accepted flips.
  int sweep(CounterRng& rng, SweepOrder order = SweepOrder::Raster);

  const SpinConfiguration& state() const { return u_; }
  /// Energy maintained by accumulating the accepted flip deltas.
  double tracked_energy() const { return energy_; }
  /// Bit i set when spin i is down; valid for edge_count <= 64.
  std::uint64_t state_bits() const;

 private:
  const LatticeGeometry& geom_;
  Sector sector_;
  Couplings couplings_;
  SpinConfiguration u_;
  std::vector<std::int8_t> parity_;
  double beta_ = 0.0;
  double energy_ = 0.0;
  // Acceptance by (sum of adjacent parities + 2, spin is up).
  std::array<std::array<double, 2>, 5> accept_{};
  std::array<std::array<double, 2>, 5> delta_{};

  bool try_flip(int edge, CounterRng& rng);
};

/// One raster (or random-site) sweep at inverse temperature beta.
void metropolis_sweep(SpinConfiguration& u, std::span<const std::int8_t> signs, double beta,
                      Couplings c, const LatticeGeometry& geom, Sector sector, CounterRng& rng,
                      SweepOrder order = SweepOrder::Raster);

/// Starts all-up and runs the schedule stages in order. Throws for an empty
/// or decreasing schedule or nonpositive J, h.
SpinConfiguration anneal(std::span<const std::int8_t> signs, const CoolingParams& params,
                         const LatticeGeometry& geom, Sector sector, CounterRng& rng);

/// Inverse temperature on the Nishimori line, exp(-2 beta h) = p / (1 - p).
/// Throws for p outside (0, 1/2).
double nishimori_beta(double p, double h);

/// Boltzmann probabilities of all 2^edge_count states; index bit i set
/// means u_i = -1. Throws when edge_count > 18 (beyond L = 3).
std::vector<double> exact_gibbs(const LatticeGeometry& geom, Sector sector,
                                std::span<const std::int8_t> signs, double beta, Couplings c);

/// Feedback in Pauli-frame form: bit i set iff u_i = -1.
BitField correction_from_spins(const SpinConfiguration& u);

}  // namespace mftp

#endif  // MFTP_RPGM_COOLER_H_
