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

#include "mftp/digital_cooling.h"

#include <Eigen/Dense>

#include <bitset>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mftp {

RateMode parse_rate_mode(std::string_view name) {
  if (name == "ratio") return RateMode::FixedRatio;
  if (name == "balanced") return RateMode::DetailedBalance;
  throw std::invalid_argument("unknown rate mode '" + std::string(name) + "'");
}

RatePair rate_pair(double beta, double gap, RateMode mode, double base) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
  if (!(gap > 0.0)) throw std::invalid_argument("gap must be positive");
  if (!(base >= 0.0)) throw std::invalid_argument("base rate must be nonnegative");
  const double boltzmann = std::exp(-2.0 * beta * gap);
  if (mode == RateMode::FixedRatio) return {base * boltzmann / (1.0 + boltzmann), base};
  return {base, base * boltzmann};
}

DigitalCoolingParams make_digital_params(double beta, Couplings couplings, double tau, int steps,
                                         double gamma, RateMode mode) {
  DigitalCoolingParams p;
  p.tau = tau;
  p.steps = steps;
  p.mode = mode;
  p.beta = beta;
  p.couplings = couplings;
  p.plaquette = rate_pair(beta, couplings.J, mode, gamma);
  p.field = rate_pair(beta, couplings.h, mode, gamma);
  return p;
}

namespace {

std::int8_t parity_of(const AncillaState& st, const LatticeGeometry& geom, Sector sector,
                      int check) {
  int p = st.s[static_cast<std::size_t>(check)];
  for (int e : geom.check_edges(sector, check)) p *= st.u.spins[static_cast<std::size_t>(e)];
  return static_cast<std::int8_t>(p);
}

double flip_delta(const AncillaState& st, const LatticeGeometry& geom, Sector sector, int edge,
                  Couplings c) {
  int k = 0;
  for (int check : geom.edge_checks(sector, edge)) k += parity_of(st, geom, sector, check);
  return 2.0 * (c.J * k + c.h * st.u.spins[static_cast<std::size_t>(edge)]);
}

void flip(AncillaState& st, int edge) {
  auto& s = st.u.spins[static_cast<std::size_t>(edge)];
  s = static_cast<std::int8_t>(-s);
}

double balanced_probability(double tau, double base, double beta, double delta) {
  const double boltzmann = delta <= 0.0 ? 1.0 : std::exp(-beta * delta);
  return 2.0 * base * tau * boltzmann;
}

}  // namespace

void plaquette_pump_step(AncillaState& state, const LatticeGeometry& geom, Sector sector,
                         double tau, RatePair rates, CounterRng& rng) {
  if (tau == 0.0) return;
  const double p_decay = 2.0 * rates.minus * tau;
  const double p_excite = 2.0 * rates.plus * tau;
  for (int c = 0; c < geom.check_count(sector); ++c) {
    const bool excited = parity_of(state, geom, sector, c) == -1;
    if (!rng.bernoulli(excited ? p_decay : p_excite)) continue;
    const auto edges = geom.check_edges(sector, c);
    flip(state, edges[rng.below(static_cast<std::uint32_t>(edges.size()))]);
  }
}

void field_pump_step(AncillaState& state, double tau, RatePair rates, CounterRng& rng) {
  if (tau == 0.0) return;
  const double p_up = 2.0 * rates.minus * tau;
  const double p_down = 2.0 * rates.plus * tau;
  for (auto& s : state.u.spins) {
    if (rng.bernoulli(s == -1 ? p_up : p_down)) s = static_cast<std::int8_t>(-s);
  }
}

void plaquette_pump_step_balanced(AncillaState& state, const LatticeGeometry& geom, Sector sector,
                                  double tau, double base, double beta, Couplings c,
                                  CounterRng& rng) {
  if (tau == 0.0) return;
  for (int check = 0; check < geom.check_count(sector); ++check) {
    const auto edges = geom.check_edges(sector, check);
    const int e = edges[rng.below(static_cast<std::uint32_t>(edges.size()))];
    const double d = flip_delta(state, geom, sector, e, c);
    if (rng.bernoulli(balanced_probability(tau, base, beta, d))) flip(state, e);
  }
}

void field_pump_step_balanced(AncillaState& state, const LatticeGeometry& geom, Sector sector,
                              double tau, double base, double beta, Couplings c, CounterRng& rng) {
  if (tau == 0.0) return;
  for (int e = 0; e < state.u.size(); ++e) {
    const double d = flip_delta(state, geom, sector, e, c);
    if (rng.bernoulli(balanced_probability(tau, base, beta, d))) flip(state, e);
  }
}

SpinConfiguration trotter_cool(std::span<const std::int8_t> signs,
                               const DigitalCoolingParams& params, const LatticeGeometry& geom,
                               Sector sector, CounterRng& rng) {
  if (static_cast<int>(signs.size()) != geom.check_count(sector)) {
    throw std::invalid_argument("syndrome size does not match lattice");
  }
  if (params.steps < 0 || !(params.tau >= 0.0)) throw std::invalid_argument("bad step settings");
  for (double r : {params.plaquette.minus, params.plaquette.plus, params.field.minus,
                   params.field.plus}) {
    if (!(r >= 0.0) || 2.0 * r * params.tau > 1.0) {
      throw std::invalid_argument("each flip probability 2 * rate * tau must lie in [0, 1]");
    }
  }
  AncillaState state{SpinConfiguration(geom.edge_count()), {signs.begin(), signs.end()}};
  for (int m = 0; m < params.steps; ++m) {
    if (params.mode == RateMode::FixedRatio) {
      plaquette_pump_step(state, geom, sector, params.tau, params.plaquette, rng);
      field_pump_step(state, params.tau, params.field, rng);
    } else {
      plaquette_pump_step_balanced(state, geom, sector, params.tau, params.plaquette.minus,
                                   params.beta, params.couplings, rng);
      field_pump_step_balanced(state, geom, sector, params.tau, params.field.minus, params.beta,
                               params.couplings, rng);
    }
  }
  return std::move(state.u);
}

namespace {

// One plaquette: qubits 0-3 are the edge spins, qubit 4 is the copy spin.
// Basis index bit k set means qubit k is |1>, i.e. spin -1.
constexpr int kQubits = 5;
constexpr int kDim = 1 << kQubits;
constexpr int kCopy = 4;
using Op = Eigen::Matrix<double, kDim, kDim>;
using Dist = Eigen::Matrix<double, kDim, 1>;

Op permutation(auto map) {
  Op m = Op::Zero();
  for (int x = 0; x < kDim; ++x) m(map(x), x) = 1.0;
  return m;
}

Op pauli_x(int q) {
  return permutation([q](int x) { return x ^ (1 << q); });
}

Op pauli_z(int q) {
  Op m = Op::Zero();
  for (int x = 0; x < kDim; ++x) m(x, x) = (x >> q) & 1 ? -1.0 : 1.0;
  return m;
}

Op cnot(int control, int target) {
  return permutation([=](int x) { return x ^ (((x >> control) & 1) << target); });
}

Op cnot_ladder(int omit) {
  Op u = Op::Identity();
  for (int i = 0; i < 4; ++i) {
    if (i != omit) u = cnot(i, kCopy) * u;
  }
  return u;
}

std::string describe(int x) {
  std::ostringstream os;
  os << "edges=" << std::bitset<4>(static_cast<unsigned>(x & 15)) << " copy=" << ((x >> kCopy) & 1);
  return os.str();
}

// Marginal over the edge spins of a distribution on the 32 basis states.
Eigen::Matrix<double, 16, 1> edge_marginal(const Dist& d) {
  Eigen::Matrix<double, 16, 1> m = Eigen::Matrix<double, 16, 1>::Zero();
  for (int x = 0; x < kDim; ++x) m(x & 15) += d(x);
  return m;
}

}  // namespace

PumpingCheck verify_pumping_identity(int omit_cnot) {
  const Op I = Op::Identity();
  Op plaquette_parity = pauli_z(kCopy);
  for (int i = 0; i < 4; ++i) plaquette_parity = plaquette_parity * pauli_z(i);

  const Op eta_copy = pauli_x(kCopy) * (I - plaquette_parity) / 2.0;
  const Op U = cnot_ladder(omit_cnot);
  const Op conjugated = U * eta_copy * U;
  const Op lowering = pauli_x(kCopy) * (I - pauli_z(kCopy)) / 2.0;
  Op sigma_minus = Op::Zero();
  for (int x = 0; x < kDim; ++x) {
    if ((x >> kCopy) & 1) sigma_minus(x ^ (1 << kCopy), x) = 1.0;
  }

  PumpingCheck out;
  if (!lowering.isApprox(sigma_minus)) {
    out.counterexample = "X(I - Z)/2 differs from the lowering operator";
    return out;
  }
  for (int x = 0; x < kDim; ++x) {
    if (!(conjugated.col(x) - sigma_minus.col(x)).isZero(0.0)) {
      out.counterexample = "U xi U != sigma- on " + describe(x);
      return out;
    }
  }

  // Jump route versus direct route on every basis state with the copy spin
  // equal to the stored syndrome bit b.
  for (int x = 0; x < kDim; ++x) {
    const int b = (x >> kCopy) & 1;
    Dist start = Dist::Zero();
    start(x) = 1.0;

    // Direct: (I - parity)/2 selects excited plaquettes, then X on a uniform edge.
    const Dist selected = (I - plaquette_parity) / 2.0 * start;
    Dist direct = Dist::Zero();
    for (int i = 0; i < 4; ++i) direct += 0.25 * (pauli_x(i) * selected);

    // Pumped: U, lowering on the copy spin, U again, recopy b onto the copy
    // spin (CNOT from the stored bit), then CNOT copy -> random edge.
    Dist pumped = U * (sigma_minus * (U * start));
    if (b == 1) pumped = pauli_x(kCopy) * pumped;
    Dist spread = Dist::Zero();
    for (int i = 0; i < 4; ++i) spread += 0.25 * (cnot(kCopy, i) * pumped);

    if ((edge_marginal(direct) - edge_marginal(spread)).cwiseAbs().maxCoeff() > 1e-12) {
      out.counterexample = "random-CNOT channel disagrees with the edge-flip jump on " + describe(x);
      return out;
    }
    // After the recopy the copy spin flags exactly the jumps that happened.
    if (spread.sum() > 0.0) {
      for (int y = 0; y < kDim; ++y) {
        if (spread(y) > 0.0 && ((y >> kCopy) & 1) != 1) {
          out.counterexample = "flag spin not raised after jump on " + describe(x);
          return out;
        }
      }
    }
  }
  out.holds = true;
  return out;
}

}  // namespace mftp
