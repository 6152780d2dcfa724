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

#include "mftp/lattice.h"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mftp {

namespace {

int wrap(int x, int n) { return ((x % n) + n) % n; }

int wrapped_gap(int a, int b, int n) {
  const int d = std::abs(a - b);
  return std::min(d, n - d);
}

}  // namespace

Site LatticeGeometry::check_site(Sector s, int check) const {
  const int cols = sector(s).cols;
  return {check / cols, check % cols};
}

int LatticeGeometry::check_index(Sector s, Site site) const {
  return site.row * sector(s).cols + site.col;
}

Step LatticeGeometry::neighbor(Sector s, int check, Direction d) const {
  const int L = size_;
  const auto [r, c] = check_site(s, check);
  Step step;
  if (boundary_ == Boundary::Toric) {
    Site next{r, c};
    if (s == Sector::Vertex) {
      switch (d) {
        case Direction::Right: step.edge = horizontal_edge(r, c); next.col = wrap(c + 1, L); break;
        case Direction::Left: step.edge = horizontal_edge(r, wrap(c - 1, L)); next.col = wrap(c - 1, L); break;
        case Direction::Down: step.edge = vertical_edge(r, c); next.row = wrap(r + 1, L); break;
        case Direction::Up: step.edge = vertical_edge(wrap(r - 1, L), c); next.row = wrap(r - 1, L); break;
      }
    } else {
      switch (d) {
        case Direction::Right: step.edge = vertical_edge(r, wrap(c + 1, L)); next.col = wrap(c + 1, L); break;
        case Direction::Left: step.edge = vertical_edge(r, c); next.col = wrap(c - 1, L); break;
        case Direction::Down: step.edge = horizontal_edge(wrap(r + 1, L), c); next.row = wrap(r + 1, L); break;
        case Direction::Up: step.edge = horizontal_edge(r, c); next.row = wrap(r - 1, L); break;
      }
    }
    step.target = check_index(s, next);
    return step;
  }

  // Planar.
  const int rows = check_rows(s);
  const int cols = check_cols(s);
  if (s == Sector::Vertex) {
    switch (d) {
      case Direction::Right:
        step.edge = horizontal_edge(r, c + 1);
        step.target = c + 1 < cols ? check_index(s, {r, c + 1}) : Step::kBoundary;
        break;
      case Direction::Left:
        step.edge = horizontal_edge(r, c);
        step.target = c > 0 ? check_index(s, {r, c - 1}) : Step::kBoundary;
        break;
      case Direction::Down:
        if (r + 1 < rows) {
          step.edge = vertical_edge(r, c);
          step.target = check_index(s, {r + 1, c});
        }
        break;
      case Direction::Up:
        if (r > 0) {
          step.edge = vertical_edge(r - 1, c);
          step.target = check_index(s, {r - 1, c});
        }
        break;
    }
  } else {
    switch (d) {
      case Direction::Right:
        if (c + 1 < cols) {
          step.edge = vertical_edge(r, c);
          step.target = check_index(s, {r, c + 1});
        }
        break;
      case Direction::Left:
        if (c > 0) {
          step.edge = vertical_edge(r, c - 1);
          step.target = check_index(s, {r, c - 1});
        }
        break;
      case Direction::Down:
        step.edge = horizontal_edge(r + 1, c);
        step.target = r + 1 < rows ? check_index(s, {r + 1, c}) : Step::kBoundary;
        break;
      case Direction::Up:
        step.edge = horizontal_edge(r, c);
        step.target = r > 0 ? check_index(s, {r - 1, c}) : Step::kBoundary;
        break;
    }
  }
  return step;
}

int LatticeGeometry::distance(Sector s, int a, int b) const {
  const Site x = check_site(s, a);
  const Site y = check_site(s, b);
  if (boundary_ == Boundary::Toric) {
    return wrapped_gap(x.row, y.row, size_) + wrapped_gap(x.col, y.col, size_);
  }
  return std::abs(x.row - y.row) + std::abs(x.col - y.col);
}

int LatticeGeometry::boundary_distance(Sector s, int check) const {
  if (boundary_ == Boundary::Toric) return -1;
  const Site x = check_site(s, check);
  const int L = size_;
  if (s == Sector::Vertex) return std::min(x.col + 1, L - 1 - x.col);
  return std::min(x.row + 1, L - 1 - x.row);
}

namespace {

void finish_tables(int edge_count, std::vector<std::vector<int>> lists, int rows, int cols,
                   auto& t) {
  t.rows = rows;
  t.cols = cols;
  t.offsets.assign(1, 0);
  t.edges.clear();
  t.by_edge.assign(static_cast<std::size_t>(edge_count), {-1, -1});
  t.by_edge_count.assign(static_cast<std::size_t>(edge_count), 0);
  for (std::size_t k = 0; k < lists.size(); ++k) {
    for (int e : lists[k]) {
      t.edges.push_back(e);
      auto& n = t.by_edge_count[static_cast<std::size_t>(e)];
      t.by_edge[static_cast<std::size_t>(e)][static_cast<std::size_t>(n++)] = static_cast<int>(k);
    }
    t.offsets.push_back(static_cast<int>(t.edges.size()));
  }
}

}  // namespace

LatticeGeometry build_lattice(int L, Boundary boundary) {
  if (L < 2) throw std::invalid_argument("lattice size must be >= 2, got " + std::to_string(L));
  LatticeGeometry g;
  g.size_ = L;
  g.boundary_ = boundary;
  const bool toric = boundary == Boundary::Toric;
  g.vcols_ = toric ? L : L - 1;
  const int vrows = toric ? L : L - 1;
  g.edge_count_ = L * L + vrows * g.vcols_;

  const int vtx_rows = L, vtx_cols = toric ? L : L - 1;
  const int face_rows = toric ? L : L - 1, face_cols = L;

  std::vector<std::vector<int>> stars;
  for (int r = 0; r < vtx_rows; ++r) {
    for (int c = 0; c < vtx_cols; ++c) {
      std::vector<int> star;
      if (toric) {
        star = {g.horizontal_edge(r, c), g.horizontal_edge(r, wrap(c - 1, L)),
                g.vertical_edge(r, c), g.vertical_edge(wrap(r - 1, L), c)};
      } else {
        star = {g.horizontal_edge(r, c), g.horizontal_edge(r, c + 1)};
        if (r + 1 < L) star.push_back(g.vertical_edge(r, c));
        if (r > 0) star.push_back(g.vertical_edge(r - 1, c));
      }
      stars.push_back(std::move(star));
    }
  }
  std::vector<std::vector<int>> faces;
  for (int r = 0; r < face_rows; ++r) {
    for (int c = 0; c < face_cols; ++c) {
      std::vector<int> face;
      if (toric) {
        face = {g.horizontal_edge(r, c), g.horizontal_edge(wrap(r + 1, L), c),
                g.vertical_edge(r, c), g.vertical_edge(r, wrap(c + 1, L))};
      } else {
        face = {g.horizontal_edge(r, c), g.horizontal_edge(r + 1, c)};
        if (c > 0) face.push_back(g.vertical_edge(r, c - 1));
        if (c + 1 < L) face.push_back(g.vertical_edge(r, c));
      }
      faces.push_back(std::move(face));
    }
  }
  finish_tables(g.edge_count_, std::move(stars), vtx_rows, vtx_cols, g.vertex_);
  finish_tables(g.edge_count_, std::move(faces), face_rows, face_cols, g.face_);

  for (int c = 0; c < L; ++c) g.z_logical_.push_back(g.horizontal_edge(0, c));
  for (int r = 0; r < L; ++r) g.x_logical_.push_back(g.horizontal_edge(r, 0));
  return g;
}

namespace {

void check_range(int index, int count, const char* what) {
  if (index < 0 || index >= count) {
    throw std::out_of_range(std::string(what) + " index " + std::to_string(index) +
                            " outside [0, " + std::to_string(count) + ")");
  }
}

}  // namespace

std::span<const int> edges_of_vertex(const LatticeGeometry& geom, int vertex) {
  check_range(vertex, geom.vertex_count(), "vertex");
  return geom.check_edges(Sector::Vertex, vertex);
}

std::span<const int> edges_of_face(const LatticeGeometry& geom, int face) {
  check_range(face, geom.face_count(), "face");
  return geom.check_edges(Sector::Face, face);
}

std::span<const int> adjacent_plaquettes(const LatticeGeometry& geom, int edge) {
  check_range(edge, geom.edge_count(), "edge");
  return geom.edge_checks(Sector::Vertex, edge);
}

std::span<const int> adjacent_faces(const LatticeGeometry& geom, int edge) {
  check_range(edge, geom.edge_count(), "edge");
  return geom.edge_checks(Sector::Face, edge);
}

Boundary parse_boundary(std::string_view name) {
  if (name == "toric") return Boundary::Toric;
  if (name == "planar") return Boundary::Planar;
  throw std::invalid_argument("unknown boundary '" + std::string(name) + "'");
}

std::string_view to_string(Boundary b) { return b == Boundary::Toric ? "toric" : "planar"; }

}  // namespace mftp
