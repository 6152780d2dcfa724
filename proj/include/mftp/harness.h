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

#ifndef MFTP_HARNESS_H_
#define MFTP_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mftp/analytics.h"
#include "mftp/decoder.h"
#include "mftp/digital_cooling.h"
#include "mftp/lattice.h"
#include "mftp/pauli_frame.h"
#include "mftp/rng.h"
#include "mftp/rpgm_cooler.h"

namespace mftp {

enum class CoolerKind { Metropolis, Digital, OracleExact };

CoolerKind parse_cooler_kind(std::string_view name);
std::string_view to_string(CoolerKind kind);

struct ExperimentConfig {
  std::vector<int> L_list;
  std::vector<double> p_list;
  Boundary boundary = Boundary::Toric;
  CoolerKind cooler = CoolerKind::Metropolis;
  int cycles = 100;
  int trials = 100;

  // Metropolis cooler.
  CouplingMode coupling = CouplingMode::LogScaledJ;
  double alpha = 1.0;
  double J = 1.0;
  double h = 1.0;
  int sweeps = 2000;
  std::vector<ScheduleStage> schedule;  // empty: default ladder to the Nishimori beta
  SweepOrder order = SweepOrder::Raster;

  // Digital cooler.
  double tau = 0.25;
  int digital_steps = 2000;
  double digital_gamma = 1.0;
  RateMode rate_mode = RateMode::DetailedBalance;

  DecoderOptions decoder;
  std::uint64_t base_seed = 42;
  int threads = 0;  // 0: hardware concurrency
  std::string output;  // CSV path; empty writes nothing
  int bootstrap = 200;
  double ci_level = 0.90;
};

/// Flat "key = value" text, one per line, '#' starts a comment. Keys mirror
/// the simulate flags: L, p (comma lists), boundary, cooler, cycles, trials,
/// coupling, alpha, J, h, sweeps, schedule, order, tau, digital-steps,
/// digital-gamma, rate-mode, decoder, exact-cap, seed, threads, out,
/// bootstrap, ci.
ExperimentConfig parse_config(std::istream& in);
void apply_config_key(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Inverse temperature used for a given physical error rate: the Nishimori
/// value, +inf at p = 0 and 0 for p >= 1/2.
double operating_beta(double p, double h);

/// Per-(L, p) cooler configuration.
struct CoolerSetup {
  CoolerKind kind = CoolerKind::Metropolis;
  CoolingParams metropolis;
  DigitalCoolingParams digital;
};

CoolerSetup make_cooler(const ExperimentConfig& config, int L, double p);

/// Produces the feedback spin configuration for one sector. The oracle
/// cooler returns the exact error indicator taken from `frame`.
SpinConfiguration cool(const CoolerSetup& setup, std::span<const std::int8_t> signs,
                       const LatticeGeometry& geom, Sector sector, const PauliFrame& frame,
                       CounterRng& rng);

/// One feedback cycle: the Z sub-cycle (vertex syndrome, correction on z
/// bits) then the X sub-cycle on the face sector. Noise is injected by the
/// caller.
void mftp_cycle(PauliFrame& frame, const LatticeGeometry& geom, const CoolerSetup& setup,
                CounterRng& rng);

/// base_seed XOR splitmix64(splitmix64(splitmix64(trial) ^ L) ^ bits(p)).
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial, int L, double p);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  int L = 0;
  double p = 0.0;
  std::vector<LogicalClass> classes;  // one per cycle, read out on a copy
  int first_failure = -1;             // 1-based cycle, -1 if never
  int approximate_readouts = 0;       // cycles decoded by the greedy fallback

  bool failed_any(int cycle) const { return first_failure > 0 && cycle >= first_failure; }
};

TrialRecord run_trial(const ExperimentConfig& config, const LatticeGeometry& geom, double p,
                      std::uint64_t trial);

struct CellResult {
  int L = 0;
  double p = 0.0;
  int trials = 0;
  FailureSeries series;  // fraction of trials whose current class is not I
  GammaFit fit;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  int approximate_readouts = 0;
  std::string error;
  std::vector<TrialRecord> records;
};

struct SweepResult {
  std::vector<CellResult> cells;  // L-major, then p, in config order
};

/// Fraction of records with class != I at each cycle.
FailureSeries failure_series(const std::vector<TrialRecord>& records, int cycles);

/// Percentile bootstrap interval of gamma_eff, resampling whole trials.
std::pair<double, double> bootstrap_gamma(const std::vector<TrialRecord>& records, int cycles,
                                          int resamples, double level, std::uint64_t seed);

/// Runs every (L, p, trial) on a bounded worker pool, aggregates per cell,
/// fits gamma_eff, and writes the CSV when config.output is set.
SweepResult run_sweep(const ExperimentConfig& config);

/// CSV header and rows: trial,seed,L,p,cycle,class,failed with p in
/// shortest round-trip form and failed = (class != I).
void write_csv(std::ostream& out, const SweepResult& result);
std::string format_double(double x);

/// Rebuilds per-cell failure series (and fits) from a CSV written by write_csv.
std::vector<CellResult> cells_from_csv(std::istream& in);

std::string summary_json(const std::vector<CellResult>& cells);

struct ThresholdEstimate {
  double lo = 0.0;
  double hi = 0.0;
  bool open = false;  // some size pair never crossed inside the p range
  std::vector<double> crossings;
};

/// Crossing points of ln gamma_eff between adjacent sizes, interpolated
/// linearly in ln p. Throws with fewer than 2 sizes or 3 p values.
ThresholdEstimate estimate_threshold(const std::vector<CellResult>& cells);

}  // namespace mftp

#endif  // MFTP_HARNESS_H_
