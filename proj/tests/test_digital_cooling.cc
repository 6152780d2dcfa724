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

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "mftp/digital_cooling.h"
#include "mftp/pauli_frame.h"
#include "oracles.h"

using namespace mftp;

namespace {

std::vector<std::int8_t> trivial(const LatticeGeometry& g) {
  return std::vector<std::int8_t>(static_cast<std::size_t>(g.vertex_count()), 1);
}

std::vector<std::int8_t> syndrome_of_edges(const LatticeGeometry& g, std::initializer_list<int> edges) {
  BitField b(static_cast<std::size_t>(g.edge_count()));
  for (int e : edges) b.flip(static_cast<std::size_t>(e));
  return sector_syndrome(b, g, Sector::Vertex);
}

int excited(const AncillaState& st, const LatticeGeometry& g) {
  int n = 0;
  for (int c = 0; c < g.vertex_count(); ++c) {
    int p = st.s[static_cast<std::size_t>(c)];
    for (int e : g.check_edges(Sector::Vertex, c)) p *= st.u.spins[static_cast<std::size_t>(e)];
    n += p == -1;
  }
  return n;
}

std::uint64_t bits_of(const SpinConfiguration& u) {
  std::uint64_t b = 0;
  for (int i = 0; i < u.size(); ++i) b |= std::uint64_t{u.spins[static_cast<std::size_t>(i)] == -1} << i;
  return b;
}

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  double s = 0.0, s2 = 0.0;
  for (double x : xs) {
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(xs.size());
  const double mean = s / n;
  return {mean, std::sqrt(std::max(0.0, s2 / n - mean * mean) / n)};
}

}  // namespace

TEST_CASE("rate pairs") {
  const auto fixed = rate_pair(0.0, 1.0, RateMode::FixedRatio);
  CHECK(fixed.minus / fixed.plus == 0.5);
  for (double beta : {0.3, 1.0, 2.5}) {
    const auto r = rate_pair(beta, 0.7, RateMode::FixedRatio, 2.0);
    const double b = std::exp(-2 * beta * 0.7);
    CHECK(r.plus == 2.0);
    CHECK(r.minus / r.plus == doctest::Approx(b / (1 + b)).epsilon(1e-14));
    const auto d = rate_pair(beta, 0.7, RateMode::DetailedBalance, 2.0);
    CHECK(d.minus == 2.0);
    CHECK(d.plus / d.minus == doctest::Approx(b).epsilon(1e-14));
  }
  CHECK(rate_pair(60.0, 1.0, RateMode::DetailedBalance).plus < 1e-50);
  CHECK(rate_pair(std::numeric_limits<double>::infinity(), 1.0, RateMode::DetailedBalance).plus == 0.0);
  CHECK_THROWS_AS(rate_pair(-1.0, 1.0, RateMode::FixedRatio), std::invalid_argument);
  CHECK_THROWS_AS(rate_pair(1.0, 0.0, RateMode::FixedRatio), std::invalid_argument);
  CHECK(parse_rate_mode("ratio") == RateMode::FixedRatio);
  CHECK(parse_rate_mode("balanced") == RateMode::DetailedBalance);
  CHECK_THROWS_AS(parse_rate_mode("gibbs"), std::invalid_argument);
}

TEST_CASE("zero step length and zero steps are the identity") {
  const auto g = build_lattice(4);
  CounterRng rng(1);
  AncillaState st{SpinConfiguration(g.edge_count()), syndrome_of_edges(g, {3, 17})};
  for (int i = 0; i < g.edge_count(); i += 3) st.u.spins[static_cast<std::size_t>(i)] = -1;
  const auto before = st.u;
  for (int k = 0; k < 100; ++k) {
    plaquette_pump_step(st, g, Sector::Vertex, 0.0, {1.0, 1.0}, rng);
    field_pump_step(st, 0.0, {1.0, 1.0}, rng);
    plaquette_pump_step_balanced(st, g, Sector::Vertex, 0.0, 1.0, 1.0, {1, 1}, rng);
    field_pump_step_balanced(st, g, Sector::Vertex, 0.0, 1.0, 1.0, {1, 1}, rng);
  }
  CHECK(st.u == before);

  auto p = make_digital_params(1.0, {1, 1}, 0.25, 0, 1.0, RateMode::DetailedBalance);
  CHECK(trotter_cool(syndrome_of_edges(g, {3}), p, g, Sector::Vertex, rng) == SpinConfiguration(g.edge_count()));
}

TEST_CASE("without excitation the excited count never grows") {
  const auto g = build_lattice(6);
  CounterRng rng(2);
  for (int run = 0; run < 50; ++run) {
    BitField err(static_cast<std::size_t>(g.edge_count()));
    for (int k = 0; k < 4; ++k) err.flip(rng.below(static_cast<std::uint32_t>(g.edge_count())));
    AncillaState st{SpinConfiguration(g.edge_count()), sector_syndrome(err, g, Sector::Vertex)};
    int last = excited(st, g);
    for (int step = 0; step < 200; ++step) {
      plaquette_pump_step(st, g, Sector::Vertex, 0.5, {0.8, 0.0}, rng);
      const int now = excited(st, g);
      CHECK(now <= last);
      CHECK((last - now) % 2 == 0);
      last = now;
    }
  }
}

TEST_CASE("equal plaquette rates keep the parity distribution uniform") {
  const auto g = build_lattice(4);
  CounterRng rng(3);
  AncillaState st{SpinConfiguration(g.edge_count()), trivial(g)};
  for (auto& s : st.u.spins) s = rng.bernoulli(0.5) ? -1 : 1;
  const int steps = 100000;
  double total = 0.0;
  for (int k = 0; k < steps; ++k) {
    plaquette_pump_step(st, g, Sector::Vertex, 0.5, {0.5, 0.5}, rng);
    total += excited(st, g);
  }
  const double frac = total / (steps * 16.0);
  CAPTURE(frac);
  CHECK(std::abs(frac - 0.5) < 0.01);
}

TEST_CASE("field channel stationary fraction") {
  CounterRng rng(4);
  AncillaState st{SpinConfiguration(1000), {}};
  const RatePair r{0.3, 0.1};
  const double want = r.plus / (r.plus + r.minus);
  double down = 0.0;
  const int steps = 2000, burn = 100;
  for (int k = 0; k < steps; ++k) {
    field_pump_step(st, 1.0, r, rng);
    if (k >= burn) down += st.u.down_fraction();
  }
  CHECK(down / (steps - burn) == doctest::Approx(want).epsilon(0.02));

  AncillaState cold{SpinConfiguration(64), {}};
  for (auto& s : cold.u.spins) s = -1;
  for (int k = 0; k < 200; ++k) field_pump_step(cold, 0.5, {1.0, 0.0}, rng);
  CHECK(cold.u.down_count() == 0);
}

TEST_CASE("balanced chain samples the Gibbs distribution at L=2") {
  const auto g = build_lattice(2);
  const auto o = oracle::torus(2);
  const Couplings c{1.0, 1.0};
  const double beta = 0.5;
  for (const auto& signs : {trivial(g), syndrome_of_edges(g, {0})}) {
    std::vector<int> s_int(signs.begin(), signs.end());
    const auto want = oracle::gibbs(o.stars, s_int, o.edges, beta, c.J, c.h);
    const auto lib = exact_gibbs(g, Sector::Vertex, signs, beta, c);
    CHECK(oracle::total_variation(want, lib) < 1e-12);

    CounterRng rng(5);
    AncillaState st{SpinConfiguration(g.edge_count()), signs};
    std::vector<double> hist(256, 0.0);
    const int burn = 1000, samples = 200000;
    for (int k = 0; k < burn + samples; ++k) {
      plaquette_pump_step_balanced(st, g, Sector::Vertex, 0.25, 1.0, beta, c, rng);
      field_pump_step_balanced(st, g, Sector::Vertex, 0.25, 1.0, beta, c, rng);
      if (k >= burn) hist[bits_of(st.u)] += 1.0 / samples;
    }
    const double tv = oracle::total_variation(hist, want);
    CAPTURE(tv);
    CHECK(tv < 0.03);
  }
}

TEST_CASE("trivial syndrome density matches Metropolis") {
  const auto g = build_lattice(4);
  const Couplings c{1.0, 1.0};
  const double beta = 0.5;
  const auto signs = trivial(g);
  const int runs = 400;
  std::vector<double> dig, met, dig_e, met_e;
  CounterRng rng(6);
  const auto dp = make_digital_params(beta, c, 0.25, 1000, 1.0, RateMode::DetailedBalance);
  CoolingParams mp;
  mp.J = c.J;
  mp.h = c.h;
  mp.schedule = {{beta, 1000}};
  for (int k = 0; k < runs; ++k) {
    const auto a = trotter_cool(signs, dp, g, Sector::Vertex, rng);
    const auto b = anneal(signs, mp, g, Sector::Vertex, rng);
    dig.push_back(a.down_fraction());
    met.push_back(b.down_fraction());
    dig_e.push_back(energy(a, signs, c, g, Sector::Vertex));
    met_e.push_back(energy(b, signs, c, g, Sector::Vertex));
  }
  const auto d = moments(dig), m = moments(met);
  const auto de = moments(dig_e), me = moments(met_e);
  CAPTURE(d.mean);
  CAPTURE(m.mean);
  CHECK(d.mean > 0.0);
  CHECK(std::abs(d.mean - m.mean) < 3 * std::hypot(d.se, m.se));
  CHECK(std::abs(de.mean - me.mean) < 3 * std::hypot(de.se, me.se));
}

TEST_CASE("adjacent defects are joined by their shared edge") {
  const auto g = build_lattice(4);
  const int e = g.horizontal_edge(1, 1);
  const auto signs = syndrome_of_edges(g, {e});
  const auto p = make_digital_params(3.0, {1.5, 1.0}, 0.25, 2000, 1.0, RateMode::DetailedBalance);
  CounterRng rng(7);
  int hit = 0;
  const int runs = 200;
  for (int k = 0; k < runs; ++k) {
    const auto fix = correction_from_spins(trotter_cool(signs, p, g, Sector::Vertex, rng));
    hit += fix.popcount() == 1 && fix.get(static_cast<std::size_t>(e));
  }
  CAPTURE(hit);
  CHECK(hit >= 0.85 * runs);
}

TEST_CASE("pumping identities on one plaquette") {
  const auto ok = verify_pumping_identity();
  CHECK(ok.holds);
  CHECK(ok.counterexample.empty());
  for (int omit = 0; omit < 4; ++omit) {
    const auto bad = verify_pumping_identity(omit);
    CAPTURE(omit);
    CHECK_FALSE(bad.holds);
    CHECK_FALSE(bad.counterexample.empty());
  }
}

TEST_CASE("halving the step length") {
  const auto g = build_lattice(4);
  const auto signs = trivial(g);
  const Couplings c{1.0, 1.0};
  const double beta = 0.4, t_cool = 100.0;
  const int runs = 1500;
  auto observe = [&](double tau, RateMode mode) {
    auto p = make_digital_params(beta, c, tau, static_cast<int>(std::lround(t_cool / tau)), 1.0, mode);
    CounterRng rng(8);
    std::vector<double> xs;
    for (int k = 0; k < runs; ++k) xs.push_back(trotter_cool(signs, p, g, Sector::Vertex, rng).down_fraction());
    return moments(xs);
  };
  // Balanced steps are each Gibbs-invariant: no drift with tau at all.
  const auto b1 = observe(0.2, RateMode::DetailedBalance), b2 = observe(0.1, RateMode::DetailedBalance);
  CHECK(std::abs(b1.mean - b2.mean) < 4 * std::hypot(b1.se, b2.se));
  // Fixed-ratio rates: the drift shrinks at least linearly.
  const auto p1 = observe(0.2, RateMode::FixedRatio), p2 = observe(0.1, RateMode::FixedRatio),
             p3 = observe(0.05, RateMode::FixedRatio);
  const double d1 = std::abs(p1.mean - p2.mean), d2 = std::abs(p2.mean - p3.mean);
  CAPTURE(d1);
  CAPTURE(d2);
  CHECK(d2 <= 0.75 * d1 + 4 * std::hypot(p2.se, p3.se));
  CHECK(d1 <= 0.2 + 4 * std::hypot(p1.se, p2.se));
}

TEST_CASE("flip probabilities above one are rejected") {
  const auto g = build_lattice(3);
  auto p = make_digital_params(1.0, {1, 1}, 0.6, 10, 1.0, RateMode::DetailedBalance);
  CounterRng rng(9);
  CHECK_THROWS_AS(trotter_cool(trivial(g), p, g, Sector::Vertex, rng), std::invalid_argument);
  p.tau = 0.5;
  CHECK_NOTHROW(trotter_cool(trivial(g), p, g, Sector::Vertex, rng));
  CHECK_THROWS_AS(trotter_cool(std::vector<std::int8_t>(3, 1), p, g, Sector::Vertex, rng), std::invalid_argument);
}

TEST_CASE("seeded runs repeat and split runs splice") {
  const auto g = build_lattice(5);
  const auto signs = syndrome_of_edges(g, {2, 7, 30});
  for (RateMode mode : {RateMode::FixedRatio, RateMode::DetailedBalance}) {
    const auto p = make_digital_params(1.2, {1, 1}, 0.25, 300, 1.0, mode);
    CounterRng a(10), b(10);
    CHECK(trotter_cool(signs, p, g, Sector::Vertex, a) == trotter_cool(signs, p, g, Sector::Vertex, b));

    // The chain's state is all that carries over between steps.
    CounterRng whole(11), split(11);
    const auto full = trotter_cool(signs, p, g, Sector::Vertex, whole);
    AncillaState st{SpinConfiguration(g.edge_count()), signs};
    for (int m = 0; m < p.steps; ++m) {
      if (mode == RateMode::FixedRatio) {
        plaquette_pump_step(st, g, Sector::Vertex, p.tau, p.plaquette, split);
        field_pump_step(st, p.tau, p.field, split);
      } else {
        plaquette_pump_step_balanced(st, g, Sector::Vertex, p.tau, p.plaquette.minus, p.beta, p.couplings, split);
        field_pump_step_balanced(st, g, Sector::Vertex, p.tau, p.field.minus, p.beta, p.couplings, split);
      }
    }
    CHECK(st.u == full);
  }
}
