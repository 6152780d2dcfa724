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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "mftp/harness.h"

using namespace mftp;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.L_list = {4};
  c.p_list = {0.02};
  c.cycles = 10;
  c.trials = 8;
  c.sweeps = 200;
  c.bootstrap = 20;
  c.threads = 1;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

CellResult synthetic_cell(int L, double p, double gamma) {
  CellResult c;
  c.L = L;
  c.p = p;
  c.fit.gamma = gamma;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream text(
      "# grid\n"
      "L = 8, 12\n"
      "p = 0.01,0.02  # two rates\n"
      "\n"
      "cooler = digital\n"
      "cycles = 50\n"
      "trials=20\n"
      "J = 2.5\n"
      "schedule = 0.5:100, 2:300\n"
      "rate-mode = ratio\n"
      "decoder = greedy\n"
      "exact-cap = 12\n"
      "seed = 7\n"
      "out = run.csv\n");
  const auto c = parse_config(text);
  CHECK(c.L_list == std::vector<int>{8, 12});
  CHECK(c.p_list == std::vector<double>{0.01, 0.02});
  CHECK(c.cooler == CoolerKind::Digital);
  CHECK(c.cycles == 50);
  CHECK(c.trials == 20);
  CHECK(c.J == 2.5);
  CHECK(c.coupling == CouplingMode::FixedJ);
  REQUIRE(c.schedule.size() == 2);
  CHECK(c.schedule[1].beta == 2.0);
  CHECK(c.schedule[1].sweeps == 300);
  CHECK(c.rate_mode == RateMode::FixedRatio);
  CHECK(c.decoder.mode == DecoderMode::Greedy);
  CHECK(c.decoder.exact_cap == 12);
  CHECK(c.base_seed == 7);
  CHECK(c.output == "run.csv");

  std::istringstream bad_key("colour = blue\n");
  CHECK_THROWS_AS(parse_config(bad_key), std::invalid_argument);
  std::istringstream no_eq("L 8\n");
  CHECK_THROWS_AS(parse_config(no_eq), std::invalid_argument);
  CHECK(parse_cooler_kind("oracle") == CoolerKind::OracleExact);
  CHECK(to_string(CoolerKind::Metropolis) == "metropolis");
  CHECK_THROWS_AS(parse_cooler_kind("fridge"), std::invalid_argument);
}

TEST_CASE("operating temperature") {
  CHECK(std::isinf(operating_beta(0.0, 1.0)));
  CHECK(operating_beta(0.5, 1.0) == 0.0);
  CHECK(operating_beta(0.7, 1.0) == 0.0);
  CHECK(operating_beta(0.05, 1.0) == doctest::Approx(std::log(19.0) / 2).epsilon(1e-15));
  const auto setup = make_cooler(small_config(), 8, 0.05);
  CHECK(setup.metropolis.beta_target == operating_beta(0.05, 1.0));
  CHECK(setup.digital.couplings.J == doctest::Approx(std::log(8.0) / 2).epsilon(1e-15));
}

TEST_CASE("oracle cooler removes every error") {
  const auto g = build_lattice(6);
  auto c = small_config();
  c.cooler = CoolerKind::OracleExact;
  for (double p : {0.01, 0.1, 0.2}) {
    const auto setup = make_cooler(c, 6, p);
    CounterRng rng(1);
    for (int k = 0; k < 50; ++k) {
      PauliFrame f(g);
      inject_errors(f, p, rng);
      mftp_cycle(f, g, setup, rng);
      CHECK(f.clean());
    }
  }
  c.p_list = {0.01, 0.1, 0.2};
  c.cycles = 20;
  for (const auto& cell : run_sweep(c).cells) {
    CHECK(cell.fit.gamma == 0.0);
    CHECK(cell.fit.flag == FitFlag::NoFailures);
  }
}

TEST_CASE("no noise, no failures") {
  auto c = small_config();
  c.p_list = {0.0};
  const auto g = build_lattice(4);
  const auto r = run_trial(c, g, 0.0, 3);
  CHECK(r.classes.size() == 10);
  for (auto cls : r.classes) CHECK(cls == LogicalClass::I);
  CHECK(r.first_failure == -1);
  CHECK_FALSE(r.failed_any(10));
}

TEST_CASE("seeds are stable and distinct") {
  CHECK(trial_seed(42, 0, 8, 0.02) == trial_seed(42, 0, 8, 0.02));
  CHECK(trial_seed(42, 0, 8, 0.02) != trial_seed(42, 1, 8, 0.02));
  CHECK(trial_seed(42, 0, 8, 0.02) != trial_seed(42, 0, 12, 0.02));
  CHECK(trial_seed(42, 0, 8, 0.02) != trial_seed(42, 0, 8, 0.03));
  CHECK((trial_seed(42, 5, 8, 0.02) ^ trial_seed(43, 5, 8, 0.02)) == (42 ^ 43));
}

TEST_CASE("identical seeds give identical records") {
  auto c = small_config();
  const auto g = build_lattice(4);
  for (CoolerKind k : {CoolerKind::Metropolis, CoolerKind::Digital}) {
    c.cooler = k;
    c.digital_steps = 200;
    const auto a = run_trial(c, g, 0.05, 11), b = run_trial(c, g, 0.05, 11);
    CHECK(a.seed == b.seed);
    CHECK(a.classes == b.classes);
    CHECK(a.first_failure == b.first_failure);
  }
}

TEST_CASE("CSV is byte-identical across thread counts") {
  auto c = small_config();
  c.L_list = {4, 5};
  c.p_list = {0.03, 0.08};
  c.trials = 12;
  std::string prev;
  for (int threads : {1, 3}) {
    c.threads = threads;
    c.output = temp_path("mftp_threads_" + std::to_string(threads) + ".csv");
    const auto r = run_sweep(c);
    for (const auto& cell : r.cells) CHECK(cell.error.empty());
    const auto text = slurp(c.output);
    if (!prev.empty()) CHECK(text == prev);
    prev = text;
    std::remove(c.output.c_str());
  }
  const auto lines = std::count(prev.begin(), prev.end(), '\n');
  CHECK(lines == 1 + 2 * 2 * c.trials * c.cycles);
  CHECK(prev.substr(0, prev.find('\n')) == "trial,seed,L,p,cycle,class,failed");
}

TEST_CASE("CSV round trip and schema") {
  auto c = small_config();
  c.p_list = {0.05, 0.1};
  c.cycles = 12;
  c.trials = 10;
  const auto r = run_sweep(c);
  std::stringstream csv;
  write_csv(csv, r);
  const std::string text = csv.str();
  std::istringstream lines(text);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  const auto& rec = r.cells[0].records[0];
  CHECK(first == "0," + std::to_string(rec.seed) + ",4,0.05,1," + to_char(rec.classes[0]) + "," +
                     (rec.classes[0] == LogicalClass::I ? "0" : "1"));

  std::istringstream back(text);
  const auto cells = cells_from_csv(back);
  REQUIRE(cells.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(cells[k].L == 4);
    CHECK(cells[k].p == r.cells[k].p);
    CHECK(cells[k].trials == 10);
    REQUIRE(cells[k].series.size() == r.cells[k].series.size());
    for (std::size_t t = 0; t < cells[k].series.size(); ++t) {
      CHECK(cells[k].series[t].p_fail == r.cells[k].series[t].p_fail);
    }
    CHECK(cells[k].fit.gamma == r.cells[k].fit.gamma);
  }
  std::istringstream wrong("a,b,c\n");
  CHECK_THROWS_AS(cells_from_csv(wrong), std::invalid_argument);
  std::istringstream short_row("trial,seed,L,p,cycle,class,failed\n0,1,4\n");
  CHECK_THROWS_AS(cells_from_csv(short_row), std::invalid_argument);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.02) == "0.02");

  const auto json = summary_json(r.cells);
  CHECK(json.find("\"gamma_eff\"") != std::string::npos);
  CHECK(json.find("\"ci\"") != std::string::npos);
}

TEST_CASE("empty grids and bad configs") {
  auto c = small_config();
  c.p_list.clear();
  CHECK(run_sweep(c).cells.empty());
  c = small_config();
  c.cycles = 0;
  CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);
  c = small_config();
  c.p_list = {1.5};
  CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);
}

TEST_CASE("unwritable output is reported per cell") {
  auto c = small_config();
  c.p_list = {0.01, 0.02};
  c.output = "/nonexistent-dir/out.csv";
  const auto r = run_sweep(c);
  REQUIRE(r.cells.size() == 2);
  for (const auto& cell : r.cells) {
    CHECK(cell.error.find("cannot open") != std::string::npos);
    CHECK(cell.series.size() == 10);
  }
}

TEST_CASE("maximal noise saturates at three quarters") {
  auto c = small_config();
  c.p_list = {0.5};
  c.cycles = 30;
  c.trials = 400;
  c.sweeps = 40;
  const auto cell = run_sweep(c).cells.at(0);
  const double n = cell.trials;
  const double sigma = std::sqrt(0.75 * 0.25 / n);
  double late = 0.0;
  for (const auto& pt : cell.series) {
    CHECK(pt.p_fail <= 0.75 + 3 * sigma);
    if (pt.t > 10) late += pt.p_fail / 20.0;
  }
  CHECK(std::abs(late - 0.75) < 3 * sigma);
}

TEST_CASE("failure fraction stays below the saturation band") {
  auto c = small_config();
  c.p_list = {0.05, 0.15};
  c.cycles = 40;
  c.trials = 100;
  c.bootstrap = 0;
  for (const auto& cell : run_sweep(c).cells) {
    const double sigma = std::sqrt(0.75 * 0.25 / cell.trials);
    for (const auto& pt : cell.series) CHECK(pt.p_fail <= 0.75 + 3 * sigma);
    for (const auto& r : cell.records) {
      for (int t = 1; t < c.cycles; ++t) CHECK((!r.failed_any(t) || r.failed_any(t + 1)));
    }
  }
}

TEST_CASE("clean frame stays nearly clean at low temperature") {
  const auto g = build_lattice(8);
  auto c = small_config();
  c.coupling = CouplingMode::LogScaledJ;
  auto setup = make_cooler(c, 8, 0.01);
  setup.metropolis.beta_target = 2.3;
  CounterRng rng(2);
  double flipped = 0.0;
  const int runs = 40;
  for (int k = 0; k < runs; ++k) {
    PauliFrame f(g);
    mftp_cycle(f, g, setup, rng);
    flipped += static_cast<double>(f.x_errors.popcount() + f.z_errors.popcount()) / (2.0 * g.edge_count());
  }
  CHECK(flipped / runs < 0.02);
}

TEST_CASE("a single error is corrected within one cycle") {
  const auto g = build_lattice(8);
  auto c = small_config();
  c.alpha = 1.0;
  const auto setup = make_cooler(c, 8, 0.01);
  CounterRng rng(3);
  int fixed = 0;
  const int runs = 200;
  for (int k = 0; k < runs; ++k) {
    PauliFrame f(g);
    f.z_errors.set(rng.below(static_cast<std::uint32_t>(g.edge_count())), true);
    mftp_cycle(f, g, setup, rng);
    fixed += compute_syndrome(f, g).trivial() && residual_class(f, g) == LogicalClass::I;
  }
  CAPTURE(fixed);
  CHECK(fixed >= 0.95 * runs);
}

TEST_CASE("bootstrap interval brackets the point estimate") {
  auto c = small_config();
  c.p_list = {0.08};
  c.cycles = 30;
  c.trials = 60;
  c.bootstrap = 100;
  const auto cell = run_sweep(c).cells.at(0);
  CHECK(cell.ci_lo <= cell.fit.gamma);
  CHECK(cell.fit.gamma <= cell.ci_hi);
  const auto again = bootstrap_gamma(cell.records, c.cycles, 100, 0.9, 5);
  CHECK(again == bootstrap_gamma(cell.records, c.cycles, 100, 0.9, 5));
  CHECK(bootstrap_gamma({}, 10, 100, 0.9, 5) == std::pair<double, double>{0.0, 0.0});
}

TEST_CASE("threshold from synthetic curves") {
  const double pc = 0.06, b = 0.5;
  std::vector<CellResult> cells;
  for (int L : {8, 12, 16, 20}) {
    const double a = 0.01 * (1 + 0.01 * L);
    for (double p = 0.03; p < 0.0901; p += 0.01) cells.push_back(synthetic_cell(L, p, a * std::pow(p / pc, b * L)));
  }
  const auto est = estimate_threshold(cells);
  CHECK_FALSE(est.open);
  CHECK(est.crossings.size() == 3);
  CHECK(est.lo == doctest::Approx(pc).epsilon(0.005 / pc));
  CHECK(est.hi == doctest::Approx(pc).epsilon(0.005 / pc));
  CHECK(std::abs(est.lo - pc) < 0.005);
  CHECK(std::abs(est.hi - pc) < 0.005);

  std::vector<CellResult> parallel;
  for (int L : {8, 12}) {
    for (double p : {0.01, 0.02, 0.03}) parallel.push_back(synthetic_cell(L, p, (L == 8 ? 0.01 : 0.001) * p));
  }
  const auto never = estimate_threshold(parallel);
  CHECK(never.open);
  CHECK(never.crossings.empty());
  CHECK(never.lo == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(std::isinf(never.hi));

  std::vector<CellResult> one_p{synthetic_cell(8, 0.02, 0.1), synthetic_cell(12, 0.02, 0.05)};
  CHECK_THROWS_AS(estimate_threshold(one_p), std::invalid_argument);
  std::vector<CellResult> one_L{synthetic_cell(8, 0.01, 0.1), synthetic_cell(8, 0.02, 0.2), synthetic_cell(8, 0.03, 0.3)};
  CHECK_THROWS_AS(estimate_threshold(one_L), std::invalid_argument);
}

TEST_CASE("Metropolis and digital coolers agree at L=4") {
  auto c = small_config();
  c.p_list = {0.02};
  c.cycles = 50;
  c.trials = 200;
  c.sweeps = 400;
  c.digital_steps = 400;
  c.bootstrap = 200;
  c.ci_level = 0.95;
  c.cooler = CoolerKind::Metropolis;
  const auto m = run_sweep(c).cells.at(0);
  c.cooler = CoolerKind::Digital;
  const auto d = run_sweep(c).cells.at(0);
  CAPTURE(m.fit.gamma);
  CAPTURE(d.fit.gamma);
  CHECK(m.fit.gamma > 0.0);
  CHECK(d.fit.gamma > 0.0);
  CHECK(m.ci_lo <= d.ci_hi);
  CHECK(d.ci_lo <= m.ci_hi);
}
