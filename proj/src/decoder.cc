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

#include "mftp/decoder.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace mftp {

DecoderMode parse_decoder_mode(std::string_view name) {
  if (name == "exact") return DecoderMode::Exact;
  if (name == "greedy") return DecoderMode::Greedy;
  throw std::invalid_argument("unknown decoder '" + std::string(name) + "'");
}

DefectSet defects_of(std::span<const std::int8_t> syndrome, Sector sector) {
  DefectSet out{sector, {}};
  for (std::size_t k = 0; k < syndrome.size(); ++k) {
    if (syndrome[k] == -1) out.sites.push_back(static_cast<int>(k));
  }
  return out;
}

int pairwise_distance(const LatticeGeometry& geom, Sector sector, int a, int b) {
  const int n = geom.check_count(sector);
  if (a < 0 || a >= n || b < 0 || b >= n) throw std::out_of_range("check index out of range");
  return geom.distance(sector, a, b);
}

namespace {

void walk(const LatticeGeometry& geom, Sector sector, int& at, Direction d, int steps,
          BitField& path) {
  for (int k = 0; k < steps; ++k) {
    const Step s = geom.neighbor(sector, at, d);
    if (s.edge < 0) throw std::logic_error("routing walked off a closed side");
    path.flip(static_cast<std::size_t>(s.edge));
    at = s.target;
  }
}

// Signed move count along one axis: positive means right/down.
int leg(int from, int to, int period, bool wraps) {
  int delta = to - from;
  if (!wraps) return delta;
  delta = ((delta % period) + period) % period;
  return delta <= period - delta ? delta : delta - period;
}

}  // namespace

BitField shortest_path(const LatticeGeometry& geom, Sector sector, int a, int b) {
  BitField path(static_cast<std::size_t>(geom.edge_count()));
  const Site from = geom.check_site(sector, a);
  const Site to = geom.check_site(sector, b);
  const bool wraps = geom.boundary() == Boundary::Toric;
  const int dc = leg(from.col, to.col, geom.check_cols(sector), wraps);
  const int dr = leg(from.row, to.row, geom.check_rows(sector), wraps);
  int at = a;
  walk(geom, sector, at, dc >= 0 ? Direction::Right : Direction::Left, std::abs(dc), path);
  walk(geom, sector, at, dr >= 0 ? Direction::Down : Direction::Up, std::abs(dr), path);
  return path;
}

BitField path_to_boundary(const LatticeGeometry& geom, Sector sector, int a) {
  if (geom.boundary() == Boundary::Toric) throw std::logic_error("the torus has no boundary");
  BitField path(static_cast<std::size_t>(geom.edge_count()));
  const Site at_site = geom.check_site(sector, a);
  const int L = geom.size();
  Direction d;
  if (sector == Sector::Vertex) {
    d = at_site.col + 1 <= L - 1 - at_site.col ? Direction::Left : Direction::Right;
  } else {
    d = at_site.row + 1 <= L - 1 - at_site.row ? Direction::Up : Direction::Down;
  }
  int at = a;
  while (at != Step::kBoundary) {
    const Step s = geom.neighbor(sector, at, d);
    path.flip(static_cast<std::size_t>(s.edge));
    at = s.target;
  }
  return path;
}

namespace {

constexpr int kB = -1;  // boundary partner marker inside the solver

struct Costs {
  int n = 0;
  std::vector<int> d;       // n * n
  std::vector<int> bound;   // per defect, or empty on the torus
  int pair(int i, int j) const {
    if (i == kB && j == kB) return 0;
    if (i == kB) return bound[static_cast<std::size_t>(j)];
    if (j == kB) return bound[static_cast<std::size_t>(i)];
    return d[static_cast<std::size_t>(i * n + j)];
  }
  bool has_boundary() const { return !bound.empty(); }
};

int total(const Costs& c, const std::vector<int>& partner) {
  int t = 0;
  for (int i = 0; i < c.n; ++i) {
    const int j = partner[static_cast<std::size_t>(i)];
    if (j == kB) {
      t += c.pair(i, kB);
    } else if (j > i) {
      t += c.pair(i, j);
    }
  }
  return t;
}

std::vector<int> greedy(const Costs& c) {
  std::vector<int> partner(static_cast<std::size_t>(c.n), -2);
  int left = c.n;
  while (left > 0) {
    std::tuple<int, int, int> best{std::numeric_limits<int>::max(), 0, 0};
    for (int i = 0; i < c.n; ++i) {
      if (partner[static_cast<std::size_t>(i)] != -2) continue;
      for (int j = i + 1; j < c.n; ++j) {
        if (partner[static_cast<std::size_t>(j)] != -2) continue;
        best = std::min(best, std::tuple{c.pair(i, j), i, j});
      }
      if (c.has_boundary()) best = std::min(best, std::tuple{c.pair(i, kB), i, c.n});
    }
    const auto [cost, i, j] = best;
    if (cost == std::numeric_limits<int>::max()) throw std::invalid_argument("unpairable defect");
    if (j == c.n) {
      partner[static_cast<std::size_t>(i)] = kB;
      left -= 1;
    } else {
      partner[static_cast<std::size_t>(i)] = j;
      partner[static_cast<std::size_t>(j)] = i;
      left -= 2;
    }
  }
  return partner;
}

// Pairwise exchange until no swap of partners between two matched units
// lowers the cost.
void two_opt(const Costs& c, std::vector<int>& partner) {
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<std::pair<int, int>> units;
    for (int i = 0; i < c.n; ++i) {
      const int j = partner[static_cast<std::size_t>(i)];
      if (j == kB || j > i) units.emplace_back(i, j);
    }
    for (std::size_t x = 0; x < units.size() && !improved; ++x) {
      for (std::size_t y = x + 1; y < units.size() && !improved; ++y) {
        const auto [a, b] = units[x];
        const auto [p, q] = units[y];
        const int now = c.pair(a, b) + c.pair(p, q);
        const int alt1 = c.pair(a, p) + c.pair(b, q);
        const int alt2 = c.pair(a, q) + c.pair(b, p);
        auto link = [&](int u, int v) {
          if (u != kB) partner[static_cast<std::size_t>(u)] = v;
          if (v != kB) partner[static_cast<std::size_t>(v)] = u;
        };
        if (alt1 < now && alt1 <= alt2) {
          link(a, p);
          link(b, q);
          improved = true;
        } else if (alt2 < now) {
          link(a, q);
          link(b, p);
          improved = true;
        }
      }
    }
  }
}

class BranchAndBound {
 public:
  BranchAndBound(const Costs& c, std::vector<int> incumbent)
      : c_(c), best_(std::move(incumbent)), cur_(static_cast<std::size_t>(c.n), -2) {
    best_cost_ = total(c_, best_);
  }

  std::vector<int> solve() {
    search(0);
    return best_;
  }

 private:
  void search(int cost) {
    int i = 0;
    while (i < c_.n && cur_[static_cast<std::size_t>(i)] != -2) ++i;
    if (i == c_.n) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = cur_;
      }
      return;
    }
    // Every unmatched defect pays at least half its cheapest option.
    int twice_bound = 0;
    for (int k = i; k < c_.n; ++k) {
      if (cur_[static_cast<std::size_t>(k)] != -2) continue;
      int m = c_.has_boundary() ? c_.pair(k, kB) : std::numeric_limits<int>::max();
      for (int j = i; j < c_.n; ++j) {
        if (j != k && cur_[static_cast<std::size_t>(j)] == -2) m = std::min(m, c_.pair(k, j));
      }
      if (m == std::numeric_limits<int>::max()) return;  // odd leftover on the torus
      twice_bound += m;
    }
    if (2 * cost + twice_bound >= 2 * best_cost_) return;

    std::vector<std::pair<int, int>> options;
    for (int j = i + 1; j < c_.n; ++j) {
      if (cur_[static_cast<std::size_t>(j)] == -2) options.emplace_back(c_.pair(i, j), j);
    }
    if (c_.has_boundary()) options.emplace_back(c_.pair(i, kB), c_.n);
    std::sort(options.begin(), options.end());
    for (const auto& [w, j] : options) {
      if (j == c_.n) {
        cur_[static_cast<std::size_t>(i)] = kB;
        search(cost + w);
        cur_[static_cast<std::size_t>(i)] = -2;
      } else {
        cur_[static_cast<std::size_t>(i)] = j;
        cur_[static_cast<std::size_t>(j)] = i;
        search(cost + w);
        cur_[static_cast<std::size_t>(i)] = -2;
        cur_[static_cast<std::size_t>(j)] = -2;
      }
    }
  }

  const Costs& c_;
  std::vector<int> best_;
  std::vector<int> cur_;
  int best_cost_ = 0;
};

}  // namespace

Matching min_weight_matching(const DefectSet& defects, const LatticeGeometry& geom,
                             const DecoderOptions& options) {
  const Sector s = defects.sector;
  const int n = static_cast<int>(defects.sites.size());
  const bool toric = geom.boundary() == Boundary::Toric;
  if (toric && n % 2 != 0) {
    throw std::invalid_argument("odd defect count " + std::to_string(n) + " on the torus");
  }
  Matching out;
  out.correction = BitField(static_cast<std::size_t>(geom.edge_count()));
  if (n == 0) return out;

  Costs c;
  c.n = n;
  c.d.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      c.d[static_cast<std::size_t>(i * n + j)] =
          pairwise_distance(geom, s, defects.sites[static_cast<std::size_t>(i)],
                            defects.sites[static_cast<std::size_t>(j)]);
    }
  }
  if (!toric) {
    for (int i = 0; i < n; ++i) {
      c.bound.push_back(geom.boundary_distance(s, defects.sites[static_cast<std::size_t>(i)]));
    }
  }

  std::vector<int> partner = greedy(c);
  if (options.mode == DecoderMode::Exact && n <= options.exact_cap) {
    partner = BranchAndBound(c, std::move(partner)).solve();
  } else {
    two_opt(c, partner);
    out.approximate = true;
  }

  for (int i = 0; i < n; ++i) {
    const int j = partner[static_cast<std::size_t>(i)];
    const int a = defects.sites[static_cast<std::size_t>(i)];
    if (j == kB) {
      out.pairs.emplace_back(a, Step::kBoundary);
      out.correction ^= path_to_boundary(geom, s, a);
    } else if (j > i) {
      const int b = defects.sites[static_cast<std::size_t>(j)];
      out.pairs.emplace_back(a, b);
      out.correction ^= shortest_path(geom, s, a, b);
    }
  }
  out.total_weight = total(c, partner);
  return out;
}

DecodeResult decode_and_classify(const PauliFrame& frame, const LatticeGeometry& geom,
                                 const DecoderOptions& options) {
  PauliFrame work = frame;
  DecodeResult result;
  for (Sector s : {Sector::Vertex, Sector::Face}) {
    BitField& errors = work.errors(s);
    const auto syndrome = sector_syndrome(errors, geom, s);
    const Matching m = min_weight_matching(defects_of(syndrome, s), geom, options);
    errors ^= m.correction;
    result.approximate |= m.approximate;
    const auto after = sector_syndrome(errors, geom, s);
    if (std::any_of(after.begin(), after.end(), [](std::int8_t b) { return b != 1; })) {
      throw std::logic_error("matching correction left a nonzero syndrome");
    }
  }
  result.logical = residual_class(work, geom);
  return result;
}

}  // namespace mftp
