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

#ifndef MFTP_DIGITAL_COOLING_H_
#define MFTP_DIGITAL_COOLING_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mftp/lattice.h"
#include "mftp/rng.h"
#include "mftp/rpgm_cooler.h"

namespace mftp {

// Trotterized dissipative cooling simulated on bits. Every operator in the
// pumping scheme is an X flip or a Z-diagonal projector, so starting from a
// computational basis state the channel is an ordinary Markov chain.

enum class RateMode {
  /// Decay/excitation ratio exp(-2 beta gap) / (1 + exp(-2 beta gap)) for
  /// the plaquette and field channels, excitation held at the base rate.
  FixedRatio,
  /// Flip rates set by the true energy change of each flip, so that the
  /// chain leaves the Gibbs distribution of the full Hamiltonian invariant.
  DetailedBalance,
};

RateMode parse_rate_mode(std::string_view name);

struct RatePair {
  double minus = 0.0;  // decay (lowers the energy)
  double plus = 0.0;   // excitation
};

/// `gap` is half the energy splitting of the two levels (J for a plaquette
/// term, h for a field term). FixedRatio fixes plus = base and
/// minus = base * exp(-2 beta gap) / (1 + exp(-2 beta gap)); DetailedBalance
/// fixes minus = base and plus = base * exp(-2 beta gap). Throws for
/// beta < 0, gap <= 0 or base < 0.
RatePair rate_pair(double beta, double gap, RateMode mode, double base = 1.0);

struct DigitalCoolingParams {
  double tau = 0.25;
  int steps = 2000;  // m; total cooling time is steps * tau
  RatePair plaquette;
  RatePair field;
  RateMode mode = RateMode::DetailedBalance;
  /// Used by DetailedBalance, where plaquette.minus and field.minus act as
  /// the base rates and excitation rates follow each flip's energy change.
  double beta = 1.0;
  Couplings couplings;

  double cooling_time() const { return tau * steps; }
};

/// Rates for inverse temperature beta with base rate `gamma`.
DigitalCoolingParams make_digital_params(double beta, Couplings couplings, double tau, int steps,
                                         double gamma, RateMode mode);

/// A' spins on edges plus the B' copy of the syndrome on checks.
struct AncillaState {
  SpinConfiguration u;
  std::vector<std::int8_t> s;
};

/// Plaquette channel, checks visited in index order. For each check the
/// signed parity s_c * prod u decides the branch: excited (-1) flips a
/// uniformly chosen edge of the check with probability 2 * minus * tau,
/// satisfied (+1) with probability 2 * plus * tau.
void plaquette_pump_step(AncillaState& state, const LatticeGeometry& geom, Sector sector,
                         double tau, RatePair rates, CounterRng& rng);

/// Field channel: each down spin flips up with probability 2 * minus * tau,
/// each up spin flips down with probability 2 * plus * tau.
void field_pump_step(AncillaState& state, double tau, RatePair rates, CounterRng& rng);

/// DetailedBalance variants. The plaquette step picks a uniform edge of each
/// check, the field step visits each edge; the flip happens with probability
/// 2 * base * tau * min(1, exp(-beta * dE)) for the total energy change dE.
void plaquette_pump_step_balanced(AncillaState& state, const LatticeGeometry& geom, Sector sector,
                                  double tau, double base, double beta, Couplings c,
                                  CounterRng& rng);
void field_pump_step_balanced(AncillaState& state, const LatticeGeometry& geom, Sector sector,
                              double tau, double base, double beta, Couplings c, CounterRng& rng);

/// Copies the syndrome to s, starts u all-up, then alternates the plaquette
/// and field channels `steps` times. Throws if any flip probability
/// 2 * rate * tau exceeds 1.
SpinConfiguration trotter_cool(std::span<const std::int8_t> signs,
                               const DigitalCoolingParams& params, const LatticeGeometry& geom,
                               Sector sector, CounterRng& rng);

struct PumpingCheck {
  bool holds = false;
  std::string counterexample;  // empty when the identities hold
};

/// Exact check on one plaquette (4 edge spins + 1 copy spin, 32 basis
/// states) that conjugating the projected flip X_v (I - Z_v prod Z_i)/2 by
/// the CNOT ladder U = prod_i CNOT(i -> v) gives the single-spin lowering
/// operator X_v (I - Z_v)/2, and that the recopy plus random-target CNOT
/// channel turns that jump into a uniformly random edge flip on excited
/// plaquettes. `omit_cnot` in [0, 4) drops one CNOT from U.
PumpingCheck verify_pumping_identity(int omit_cnot = -1);

}  // namespace mftp

#endif  // MFTP_DIGITAL_COOLING_H_
