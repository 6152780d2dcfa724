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
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mftp/analytics.h"
#include "mftp/digital_cooling.h"
#include "mftp/harness.h"
#include "mftp/lattice.h"
#include "mftp/pauli_frame.h"
#include "mftp/rpgm_cooler.h"

namespace {

using nlohmann::json;

json number_or_inf(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

json cells_json(const std::vector<mftp::CellResult>& cells) {
  return json::parse(mftp::summary_json(cells));
}

struct SimulateFlags {
  std::vector<int> L;
  std::vector<double> p;
  std::string boundary = "toric";
  std::string cooler = "metropolis";
  std::string coupling = "log";
  std::string schedule;
  std::string order = "raster";
  std::string rate_mode = "balanced";
  std::string decoder = "exact";
  double J = std::nan("");
};

void add_simulate_flags(CLI::App* app, mftp::ExperimentConfig& c, SimulateFlags& f) {
  app->add_option("--L", f.L, "lattice sizes")->required()->delimiter(',');
  app->add_option("--p", f.p, "physical error rates")->required()->delimiter(',');
  app->add_option("--alpha", c.alpha, "chain-length prefactor in J = alpha h ln(L) / 2");
  app->add_option("--cycles", c.cycles);
  app->add_option("--trials", c.trials);
  app->add_option("--sweeps", c.sweeps, "Metropolis sweeps per sub-cycle");
  app->add_option("--cooler", f.cooler)->check(CLI::IsMember({"metropolis", "digital", "oracle"}));
  app->add_option("--seed", c.base_seed);
  app->add_option("--out", c.output, "CSV output path");
  app->add_option("--boundary", f.boundary)->check(CLI::IsMember({"toric", "planar"}));
  app->add_option("--decoder", f.decoder)->check(CLI::IsMember({"exact", "greedy"}));
  app->add_option("--exact-cap", c.decoder.exact_cap);
  app->add_option("--coupling", f.coupling)->check(CLI::IsMember({"fixed", "log", "large"}));
  app->add_option("--J", f.J, "fixed plaquette coupling (implies --coupling fixed)");
  app->add_option("--h", c.h);
  app->add_option("--schedule", f.schedule, "beta:sweeps,... (beta may be inf)");
  app->add_option("--order", f.order)->check(CLI::IsMember({"raster", "random"}));
  app->add_option("--tau", c.tau);
  app->add_option("--digital-steps", c.digital_steps);
  app->add_option("--digital-gamma", c.digital_gamma);
  app->add_option("--rate-mode", f.rate_mode)->check(CLI::IsMember({"ratio", "balanced"}));
  app->add_option("--threads", c.threads);
  app->add_option("--bootstrap", c.bootstrap);
  app->add_option("--ci", c.ci_level);
}

void finish_simulate_flags(mftp::ExperimentConfig& c, const SimulateFlags& f) {
  c.L_list = f.L;
  c.p_list = f.p;
  c.boundary = mftp::parse_boundary(f.boundary);
  c.cooler = mftp::parse_cooler_kind(f.cooler);
  c.coupling = mftp::parse_coupling_mode(f.coupling);
  if (!std::isnan(f.J)) {
    c.J = f.J;
    c.coupling = mftp::CouplingMode::FixedJ;
  }
  if (!f.schedule.empty()) c.schedule = mftp::parse_schedule(f.schedule);
  c.order = mftp::parse_sweep_order(f.order);
  c.rate_mode = mftp::parse_rate_mode(f.rate_mode);
  c.decoder.mode = mftp::parse_decoder_mode(f.decoder);
}

int report_sweep(const mftp::SweepResult& r) {
  std::cout << cells_json(r.cells).dump(2) << "\n";
  for (const auto& cell : r.cells) {
    if (!cell.error.empty()) return 1;
  }
  return 0;
}

struct DemoFlags {
  std::string engine = "metropolis";
  int L = 16;
  double p = 0.05;
  double beta = std::nan("");
  double J = std::nan("");
  double h = 1.0;
  double alpha = 1.0;
  int sweeps = 2000;
  int steps = 2000;
  double tau = 0.25;
  std::string boundary = "toric";
  std::uint64_t seed = 1;
  std::string pgm;
  std::string csv;
};

// Edge spins on a 2L x 2L grid: h(r, c) at (2r, 2c+1), v(r, c) below its
// upper vertex. Vertex and face cells hold 1 for a defect, 0 otherwise.
std::vector<std::vector<int>> spin_grid(const mftp::LatticeGeometry& geom,
                                        const mftp::SpinConfiguration& u,
                                        const std::vector<std::int8_t>& signs) {
  const int L = geom.size();
  const bool planar = geom.boundary() == mftp::Boundary::Planar;
  std::vector<std::vector<int>> g(2 * L, std::vector<int>(2 * L, 0));
  for (int r = 0; r < L; ++r) {
    for (int c = 0; c < L; ++c) g[2 * r][2 * c + 1] = u.spins[geom.horizontal_edge(r, c)];
  }
  const int vrows = planar ? L - 1 : L;
  const int vcols = planar ? L - 1 : L;
  for (int r = 0; r < vrows; ++r) {
    for (int c = 0; c < vcols; ++c) {
      g[2 * r + 1][planar ? 2 * c + 2 : 2 * c] = u.spins[geom.vertical_edge(r, c)];
    }
  }
  for (int v = 0; v < geom.vertex_count(); ++v) {
    const auto site = geom.check_site(mftp::Sector::Vertex, v);
    g[2 * site.row][planar ? 2 * site.col + 2 : 2 * site.col] = signs[v] == -1 ? 2 : 0;
  }
  return g;
}

void write_pgm(const std::string& path, const std::vector<std::vector<int>>& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "P2\n" << g[0].size() << ' ' << g.size() << "\n255\n";
  for (const auto& row : g) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const int level = row[c] == 1 ? 255 : row[c] == -1 ? 0 : row[c] == 2 ? 64 : 160;
      out << level << (c + 1 == row.size() ? '\n' : ' ');
    }
  }
}

void write_grid_csv(const std::string& path, const std::vector<std::vector<int>>& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& row : g) {
    for (std::size_t c = 0; c < row.size(); ++c) out << row[c] << (c + 1 == row.size() ? '\n' : ',');
  }
}

json cool_demo(const DemoFlags& f) {
  const auto geom = mftp::build_lattice(f.L, mftp::parse_boundary(f.boundary));
  mftp::CounterRng rng(f.seed);
  mftp::PauliFrame frame(geom);
  mftp::inject_errors(frame, f.p, rng);
  const auto signs = mftp::sector_syndrome(frame.z_errors, geom, mftp::Sector::Vertex);

  const double beta = std::isnan(f.beta) ? mftp::operating_beta(f.p, f.h) : f.beta;
  mftp::CoolingParams params;
  params.h = f.h;
  params.alpha = f.alpha;
  params.mode = std::isnan(f.J) ? mftp::CouplingMode::LogScaledJ : mftp::CouplingMode::FixedJ;
  if (!std::isnan(f.J)) params.J = f.J;
  params.beta_target = beta;
  params.sweeps_total = f.sweeps;
  const mftp::Couplings c{mftp::coupling_for(params, f.L), f.h};

  mftp::SpinConfiguration u;
  if (f.engine == "digital") {
    const auto d = mftp::make_digital_params(std::isinf(beta) ? 1e3 : beta, c, f.tau, f.steps, 1.0,
                                             mftp::RateMode::DetailedBalance);
    u = mftp::trotter_cool(signs, d, geom, mftp::Sector::Vertex, rng);
  } else {
    u = mftp::anneal(signs, params, geom, mftp::Sector::Vertex, rng);
  }

  auto corrected = frame;
  corrected.z_errors ^= mftp::correction_from_spins(u);
  int defects = 0;
  for (auto s : signs) defects += s == -1;
  int residual = 0;
  for (auto s : mftp::sector_syndrome(corrected.z_errors, geom, mftp::Sector::Vertex)) residual += s == -1;

  const auto grid = spin_grid(geom, u, signs);
  if (!f.pgm.empty()) write_pgm(f.pgm, grid);
  if (!f.csv.empty()) write_grid_csv(f.csv, grid);

  json out;
  out["engine"] = f.engine;
  out["L"] = f.L;
  out["p"] = f.p;
  out["beta"] = number_or_inf(beta);
  out["J"] = c.J;
  out["h"] = c.h;
  out["energy"] = mftp::energy(u, signs, c, geom, mftp::Sector::Vertex);
  out["down_fraction"] = u.down_fraction();
  out["defects"] = defects;
  out["residual_defects"] = residual;
  out["error_weight"] = frame.z_errors.popcount();
  out["correction_weight"] = u.down_count();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative-feedback surface code memory simulator"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help");

  mftp::ExperimentConfig sim_config;
  SimulateFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "run trials over an (L, p) grid");
  simulate->set_help_flag("--help", "print this help");
  add_simulate_flags(simulate, sim_config, sim_flags);

  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "run a sweep described by a config file");
  sweep->set_help_flag("--help", "print this help");
  sweep->add_option("--config", config_path)->required()->check(CLI::ExistingFile);

  double b_alpha = 1.0, b_p = 0.0, b_rcor = 0.0;
  int b_L = 0;
  auto* bound = app.add_subcommand("bound", "analytic logical error bound");
  bound->set_help_flag("--help", "print this help");
  bound->add_option("--alpha", b_alpha);
  bound->add_option("--p", b_p)->required();
  bound->add_option("--L", b_L)->required();
  bound->add_option("--r-cor", b_rcor, "chain length; default alpha ln L");

  double t_alpha = 1.0;
  auto* threshold = app.add_subcommand("threshold", "analytic threshold for a given alpha");
  threshold->set_help_flag("--help", "print this help");
  threshold->add_option("--alpha", t_alpha);

  std::string fit_path;
  bool fit_crossing = false;
  auto* fit = app.add_subcommand("fit", "fit gamma_eff per (L, p) from a results CSV");
  fit->set_help_flag("--help", "print this help");
  fit->add_option("--in", fit_path)->required()->check(CLI::ExistingFile);
  fit->add_flag("--crossing", fit_crossing, "also estimate the crossing of gamma_eff curves");

  mftp::ResourceParams rp;
  auto* estimate = app.add_subcommand("estimate", "cycle time and per-cycle error budget");
  estimate->set_help_flag("--help", "print this help");
  double kappa_ratio = rp.Gamma / rp.kappa;
  estimate->add_option("--gamma-ratio", rp.Gamma, "Gamma / gamma");
  estimate->add_option("--kappa-ratio", kappa_ratio, "Gamma / kappa");
  estimate->add_option("--J-ratio", rp.J_over_gamma);
  estimate->add_option("--h-ratio", rp.h_over_gamma);
  estimate->add_option("--trotter", rp.trotter_product_J, "target J gamma tau^2 (also used for h)");
  estimate->add_option("--mc-steps", rp.mc_steps);

  DemoFlags demo;
  auto* cool = app.add_subcommand("cool-demo", "cool one syndrome and export the spin grid");
  cool->set_help_flag("--help", "print this help");
  cool->add_option("--engine", demo.engine)->check(CLI::IsMember({"digital", "metropolis"}));
  cool->add_option("--L", demo.L);
  cool->add_option("--p", demo.p);
  cool->add_option("--beta", demo.beta, "default: Nishimori value for p");
  cool->add_option("--J", demo.J, "default: alpha h ln(L) / 2");
  cool->add_option("--h", demo.h);
  cool->add_option("--alpha", demo.alpha);
  cool->add_option("--sweeps", demo.sweeps);
  cool->add_option("--steps", demo.steps);
  cool->add_option("--tau", demo.tau);
  cool->add_option("--boundary", demo.boundary)->check(CLI::IsMember({"toric", "planar"}));
  cool->add_option("--seed", demo.seed);
  cool->add_option("--pgm", demo.pgm);
  cool->add_option("--csv", demo.csv);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      finish_simulate_flags(sim_config, sim_flags);
      return report_sweep(mftp::run_sweep(sim_config));
    }
    if (*sweep) {
      std::ifstream in(config_path);
      return report_sweep(mftp::run_sweep(mftp::parse_config(in)));
    }
    if (*bound) {
      const mftp::BoundInputs in{b_p, b_L, b_alpha, b_rcor};
      const auto terms = mftp::logical_error_bound(in);
      const double r = in.correlation_length();
      json out;
      out["p"] = b_p;
      out["L"] = b_L;
      out["alpha"] = b_alpha;
      out["r_cor"] = r;
      out["chain"] = number_or_inf(terms.chain.value);
      out["mismatch"] = terms.mismatch;
      out["p_logical"] = number_or_inf(terms.total.value);
      out["divergent"] = terms.total.divergent;
      if (r >= 1.0) out["p_error_saw"] = number_or_inf(mftp::saw_chain_bound(b_p, r).value);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*threshold) {
      json out;
      out["alpha"] = t_alpha;
      out["p_threshold"] = mftp::analytic_threshold(t_alpha);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*fit) {
      std::ifstream in(fit_path);
      const auto cells = mftp::cells_from_csv(in);
      json out;
      out["cells"] = cells_json(cells);
      if (fit_crossing) {
        const auto t = mftp::estimate_threshold(cells);
        out["crossing"] = {{"lo", number_or_inf(t.lo)}, {"hi", number_or_inf(t.hi)}, {"open", t.open},
                           {"pairwise", t.crossings}};
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*estimate) {
      rp.trotter_product_h = rp.trotter_product_J;
      rp.kappa = rp.Gamma / kappa_ratio;
      const auto e = mftp::resource_estimate(rp);
      json out;
      out["tau"] = e.tau;
      out["m"] = e.m;
      out["t_cool"] = e.t_cool;
      out["t_cycle"] = e.t_cycle;
      out["p_cycle"] = e.p_cycle;
      out["kappa"] = rp.kappa;
      out["warnings"] = e.warnings;
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*cool) {
      std::cout << cool_demo(demo).dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
