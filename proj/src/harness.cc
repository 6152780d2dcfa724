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

#include "mftp/harness.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace mftp {

CoolerKind parse_cooler_kind(std::string_view name) {
  if (name == "metropolis") return CoolerKind::Metropolis;
  if (name == "digital") return CoolerKind::Digital;
  if (name == "oracle") return CoolerKind::OracleExact;
  throw std::invalid_argument("unknown cooler '" + std::string(name) + "'");
}

std::string_view to_string(CoolerKind kind) {
  switch (kind) {
    case CoolerKind::Metropolis: return "metropolis";
    case CoolerKind::Digital: return "digital";
    case CoolerKind::OracleExact: return "oracle";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

template <typename T>
std::vector<T> parse_list(std::string_view text, T (*conv)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.push_back(conv(t));
  }
  return out;
}

int to_int(const std::string& s) { return std::stoi(s); }
double to_double(const std::string& s) { return std::stod(s); }

}  // namespace

void apply_config_key(ExperimentConfig& c, std::string_view key, std::string_view raw) {
  const std::string v = trim(raw);
  if (key == "L") {
    c.L_list = parse_list<int>(v, to_int);
  } else if (key == "p") {
    c.p_list = parse_list<double>(v, to_double);
  } else if (key == "boundary") {
    c.boundary = parse_boundary(v);
  } else if (key == "cooler") {
    c.cooler = parse_cooler_kind(v);
  } else if (key == "cycles") {
    c.cycles = std::stoi(v);
  } else if (key == "trials") {
    c.trials = std::stoi(v);
  } else if (key == "coupling") {
    c.coupling = parse_coupling_mode(v);
  } else if (key == "alpha") {
    c.alpha = std::stod(v);
  } else if (key == "J") {
    c.J = std::stod(v);
    c.coupling = CouplingMode::FixedJ;
  } else if (key == "h") {
    c.h = std::stod(v);
  } else if (key == "sweeps") {
    c.sweeps = std::stoi(v);
  } else if (key == "schedule") {
    c.schedule = parse_schedule(v);
  } else if (key == "order") {
    c.order = parse_sweep_order(v);
  } else if (key == "tau") {
    c.tau = std::stod(v);
  } else if (key == "digital-steps") {
    c.digital_steps = std::stoi(v);
  } else if (key == "digital-gamma") {
    c.digital_gamma = std::stod(v);
  } else if (key == "rate-mode") {
    c.rate_mode = parse_rate_mode(v);
  } else if (key == "decoder") {
    c.decoder.mode = parse_decoder_mode(v);
  } else if (key == "exact-cap") {
    c.decoder.exact_cap = std::stoi(v);
  } else if (key == "seed") {
    c.base_seed = std::stoull(v);
  } else if (key == "threads") {
    c.threads = std::stoi(v);
  } else if (key == "out") {
    c.output = v;
  } else if (key == "bootstrap") {
    c.bootstrap = std::stoi(v);
  } else if (key == "ci") {
    c.ci_level = std::stod(v);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + " lacks '='");
    }
    apply_config_key(c, trim(std::string_view(line).substr(0, eq)),
                     std::string_view(line).substr(eq + 1));
  }
  return c;
}

double operating_beta(double p, double h) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  if (p >= 0.5) return 0.0;
  return nishimori_beta(p, h);
}

CoolerSetup make_cooler(const ExperimentConfig& config, int L, double p) {
  CoolerSetup s;
  s.kind = config.cooler;
  const double beta = operating_beta(p, config.h);
  auto& m = s.metropolis;
  m.J = config.J;
  m.h = config.h;
  m.alpha = config.alpha;
  m.mode = config.coupling;
  m.beta_target = beta;
  m.sweeps_total = config.sweeps;
  m.schedule = config.schedule;
  m.order = config.order;
  const Couplings c{coupling_for(m, L), config.h};
  s.digital = make_digital_params(beta, c, config.tau, config.digital_steps, config.digital_gamma,
                                  config.rate_mode);
  return s;
}

SpinConfiguration cool(const CoolerSetup& setup, std::span<const std::int8_t> signs,
                       const LatticeGeometry& geom, Sector sector, const PauliFrame& frame,
                       CounterRng& rng) {
  switch (setup.kind) {
    case CoolerKind::Metropolis: return anneal(signs, setup.metropolis, geom, sector, rng);
    case CoolerKind::Digital: return trotter_cool(signs, setup.digital, geom, sector, rng);
    case CoolerKind::OracleExact: break;
  }
  SpinConfiguration u(geom.edge_count());
  const BitField& errors = frame.errors(sector);
  for (int e = 0; e < geom.edge_count(); ++e) {
    if (errors.get(static_cast<std::size_t>(e))) u.spins[static_cast<std::size_t>(e)] = -1;
  }
  return u;
}

void mftp_cycle(PauliFrame& frame, const LatticeGeometry& geom, const CoolerSetup& setup,
                CounterRng& rng) {
  for (Sector s : {Sector::Vertex, Sector::Face}) {
    const auto signs = sector_syndrome(frame.errors(s), geom, s);
    const SpinConfiguration u = cool(setup, signs, geom, s, frame, rng);
    frame.errors(s) ^= correction_from_spins(u);
  }
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial, int L, double p) {
  const auto p_bits = std::bit_cast<std::uint64_t>(p);
  return base_seed ^
         splitmix64(splitmix64(splitmix64(trial) ^ static_cast<std::uint64_t>(L)) ^ p_bits);
}

namespace {

TrialRecord run_trial_with(const ExperimentConfig& config, const LatticeGeometry& geom, double p,
                           std::uint64_t trial, const CoolerSetup& setup) {
  TrialRecord rec;
  rec.trial = trial;
  rec.L = geom.size();
  rec.p = p;
  rec.seed = trial_seed(config.base_seed, trial, rec.L, p);
  rec.classes.reserve(static_cast<std::size_t>(config.cycles));
  CounterRng rng(rec.seed);
  PauliFrame frame(geom);
  for (int t = 1; t <= config.cycles; ++t) {
    inject_errors(frame, p, rng);
    mftp_cycle(frame, geom, setup, rng);
    const DecodeResult readout = decode_and_classify(frame, geom, config.decoder);
    rec.classes.push_back(readout.logical);
    rec.approximate_readouts += readout.approximate;
    if (rec.first_failure < 0 && readout.logical != LogicalClass::I) rec.first_failure = t;
  }
  return rec;
}

void validate(const ExperimentConfig& config) {
  if (config.cycles < 1 || config.trials < 1) {
    throw std::invalid_argument("cycles and trials must be >= 1");
  }
  for (double p : config.p_list) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p outside [0, 1]");
  }
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& config, const LatticeGeometry& geom, double p,
                      std::uint64_t trial) {
  validate(config);
  return run_trial_with(config, geom, p, trial, make_cooler(config, geom.size(), p));
}

FailureSeries failure_series(const std::vector<TrialRecord>& records, int cycles) {
  FailureSeries out;
  if (records.empty()) return out;
  for (int t = 1; t <= cycles; ++t) {
    int failed = 0;
    for (const auto& r : records) failed += r.classes[static_cast<std::size_t>(t - 1)] != LogicalClass::I;
    out.push_back({static_cast<double>(t), static_cast<double>(failed) / records.size(),
                   static_cast<int>(records.size())});
  }
  return out;
}

namespace {

double fit_or_zero(const FailureSeries& s) {
  if (s.size() < 3) return 0.0;
  return fit_gamma_eff(s).gamma;
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::pair<double, double> bootstrap_gamma(const std::vector<TrialRecord>& records, int cycles,
                                          int resamples, double level, std::uint64_t seed) {
  if (records.empty() || resamples < 1 || cycles < 3) return {0.0, 0.0};
  CounterRng rng(seed);
  const auto n = static_cast<std::uint32_t>(records.size());
  // Failure counts per trial per cycle, so resampling only sums integers.
  std::vector<double> gammas;
  gammas.reserve(static_cast<std::size_t>(resamples));
  std::vector<int> counts(static_cast<std::size_t>(cycles));
  for (int b = 0; b < resamples; ++b) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint32_t k = 0; k < n; ++k) {
      const auto& r = records[rng.below(n)];
      for (int t = 0; t < cycles; ++t) {
        counts[static_cast<std::size_t>(t)] += r.classes[static_cast<std::size_t>(t)] != LogicalClass::I;
      }
    }
    FailureSeries s;
    for (int t = 0; t < cycles; ++t) {
      s.push_back({static_cast<double>(t + 1), static_cast<double>(counts[static_cast<std::size_t>(t)]) / n,
                   static_cast<int>(n)});
    }
    gammas.push_back(fit_or_zero(s));
  }
  const double tail = (1.0 - level) / 2.0;
  return {percentile(gammas, tail), percentile(gammas, 1.0 - tail)};
}

SweepResult run_sweep(const ExperimentConfig& config) {
  validate(config);
  SweepResult result;
  if (config.L_list.empty() || config.p_list.empty()) return result;

  std::vector<LatticeGeometry> geoms;
  for (int L : config.L_list) geoms.push_back(build_lattice(L, config.boundary));

  struct Cell {
    std::size_t geom;
    double p;
    CoolerSetup setup;
  };
  std::vector<Cell> cells;
  for (std::size_t g = 0; g < geoms.size(); ++g) {
    for (double p : config.p_list) cells.push_back({g, p, make_cooler(config, geoms[g].size(), p)});
  }

  const std::size_t per_cell = static_cast<std::size_t>(config.trials);
  const std::size_t total = cells.size() * per_cell;
  std::vector<TrialRecord> records(total);
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t c = job / per_cell;
      const auto& cell = cells[c];
      try {
        records[job] = run_trial_with(config, geoms[cell.geom], cell.p, job % per_cell, cell.setup);
      } catch (const std::exception& e) {
        errors[c] = e.what();
      }
    }
  };
  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult out;
    out.L = geoms[cells[c].geom].size();
    out.p = cells[c].p;
    out.trials = config.trials;
    out.error = errors[c];
    out.records.assign(std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(c * per_cell)),
                       std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_cell)));
    if (out.error.empty()) {
      for (const auto& r : out.records) out.approximate_readouts += r.approximate_readouts;
      out.series = failure_series(out.records, config.cycles);
      if (out.series.size() >= 3) {
        out.fit = fit_gamma_eff(out.series);
        std::tie(out.ci_lo, out.ci_hi) =
            bootstrap_gamma(out.records, config.cycles, config.bootstrap, config.ci_level,
                            trial_seed(config.base_seed, ~std::uint64_t{0}, out.L, out.p));
      }
    }
    result.cells.push_back(std::move(out));
  }

  if (!config.output.empty()) {
    std::ofstream file(config.output);
    if (!file) {
      for (auto& cell : result.cells) {
        if (cell.error.empty()) cell.error = "cannot open " + config.output;
      }
    } else {
      write_csv(file, result);
      if (!file) {
        for (auto& cell : result.cells) {
          if (cell.error.empty()) cell.error = "write failed for " + config.output;
        }
      }
    }
  }
  return result;
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << "trial,seed,L,p,cycle,class,failed\n";
  for (const auto& cell : result.cells) {
    if (!cell.error.empty()) continue;
    const std::string p = format_double(cell.p);
    for (const auto& r : cell.records) {
      for (std::size_t t = 0; t < r.classes.size(); ++t) {
        const char cls = to_char(r.classes[t]);
        out << r.trial << ',' << r.seed << ',' << r.L << ',' << p << ',' << (t + 1) << ',' << cls
            << ',' << (cls != 'I' ? 1 : 0) << '\n';
      }
    }
  }
}

std::vector<CellResult> cells_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "trial,seed,L,p,cycle,class,failed") {
    throw std::invalid_argument("CSV header must be trial,seed,L,p,cycle,class,failed");
  }
  // (L, p) -> cycle -> (failed, total)
  std::map<std::pair<int, double>, std::map<int, std::pair<int, int>>> tally;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string field[7];
    for (auto& f : field) {
      if (!std::getline(ss, f, ',')) {
        throw std::invalid_argument("CSV line " + std::to_string(lineno) + " has too few fields");
      }
    }
    const int L = std::stoi(field[2]);
    const double p = std::stod(field[3]);
    const int cycle = std::stoi(field[4]);
    auto& slot = tally[{L, p}][cycle];
    slot.first += std::stoi(field[6]);
    slot.second += 1;
  }
  std::vector<CellResult> cells;
  for (const auto& [key, by_cycle] : tally) {
    CellResult c;
    c.L = key.first;
    c.p = key.second;
    for (const auto& [cycle, counts] : by_cycle) {
      c.series.push_back({static_cast<double>(cycle),
                          static_cast<double>(counts.first) / counts.second, counts.second});
      c.trials = std::max(c.trials, counts.second);
    }
    if (c.series.size() >= 3) c.fit = fit_gamma_eff(c.series);
    cells.push_back(std::move(c));
  }
  return cells;
}

std::string summary_json(const std::vector<CellResult>& cells) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json j;
    j["L"] = c.L;
    j["p"] = c.p;
    j["trials"] = c.trials;
    j["gamma_eff"] = c.fit.gamma;
    j["ci"] = {c.ci_lo, c.ci_hi};
    j["fit_flag"] = c.fit.flag == FitFlag::Ok           ? "ok"
                    : c.fit.flag == FitFlag::NoFailures ? "no_failures"
                                                        : "saturated";
    j["residual"] = c.fit.residual;
    j["approximate_readouts"] = c.approximate_readouts;
    if (!c.series.empty()) j["final_failure_fraction"] = c.series.back().p_fail;
    if (!c.error.empty()) j["error"] = c.error;
    out.push_back(std::move(j));
  }
  return out.dump(2);
}

ThresholdEstimate estimate_threshold(const std::vector<CellResult>& cells) {
  std::map<int, std::map<double, double>> grid;
  for (const auto& c : cells) grid[c.L][c.p] = c.fit.gamma;
  if (grid.size() < 2) throw std::invalid_argument("threshold estimate needs >= 2 sizes");
  for (const auto& [L, row] : grid) {
    if (row.size() < 3) throw std::invalid_argument("threshold estimate needs >= 3 p values");
  }
  constexpr double kFloor = 1e-12;
  ThresholdEstimate out;
  double open_lo = std::numeric_limits<double>::infinity(), open_hi = 0.0;
  for (auto it = grid.begin(); std::next(it) != grid.end(); ++it) {
    const auto& small = it->second;
    const auto& large = std::next(it)->second;
    std::vector<std::pair<double, double>> diff;  // (ln p, ln gamma_large - ln gamma_small)
    for (const auto& [p, g_small] : small) {
      const auto found = large.find(p);
      if (found == large.end()) continue;
      diff.emplace_back(std::log(p), std::log(std::max(found->second, kFloor)) -
                                         std::log(std::max(g_small, kFloor)));
    }
    bool crossed = false;
    for (std::size_t k = 0; k + 1 < diff.size(); ++k) {
      const auto [x0, d0] = diff[k];
      const auto [x1, d1] = diff[k + 1];
      if (d0 < 0.0 && d1 >= 0.0) {
        out.crossings.push_back(std::exp(x0 + (x1 - x0) * (-d0) / (d1 - d0)));
        crossed = true;
        break;
      }
    }
    if (!crossed) {
      out.open = true;
      if (!diff.empty() && diff.back().second < 0.0) {
        open_lo = std::min(open_lo, std::exp(diff.back().first));  // threshold above the range
        open_hi = std::numeric_limits<double>::infinity();
      } else if (!diff.empty()) {
        open_lo = std::min(open_lo, 0.0);
        open_hi = std::max(open_hi, std::exp(diff.front().first));
      }
    }
  }
  if (!out.crossings.empty()) {
    out.lo = *std::min_element(out.crossings.begin(), out.crossings.end());
    out.hi = *std::max_element(out.crossings.begin(), out.crossings.end());
  }
  if (out.open) {
    out.lo = out.crossings.empty() ? open_lo : std::min(out.lo, open_lo);
    out.hi = out.crossings.empty() ? open_hi : std::max(out.hi, open_hi);
  }
  return out;
}

}  // namespace mftp
