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

#ifndef MFTP_LATTICE_H_
#define MFTP_LATTICE_H_

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace mftp {

enum class Boundary { Toric, Planar };

/// Which stabilizer family a check belongs to. Vertex stars B_v carry the
/// b_v syndrome and detect Z errors; faces A_f carry a_f and detect X
/// errors. The X sub-cycle of the feedback loop is the Vertex machinery run
/// on the Face sector.
enum class Sector { Vertex, Face };

enum class Direction { Left, Right, Up, Down };

struct Site {
  int row = 0;
  int col = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

/// One move of a defect across a data edge.
struct Step {
  static constexpr int kBoundary = -1;  // exits through an open boundary
  static constexpr int kNone = -2;      // no such neighbour (closed side)
  int target = kNone;
  int edge = -1;
};

/// Square-lattice surface code geometry with qubits on edges.
///
/// Edge indexing: horizontal edges first, h(r, c) = r * L + c for
/// r, c in [0, L); then vertical edges v(r, c) = L * L + r * vcols + c.
///
///  * Toric: L x L vertices and faces, vcols = L. h(r, c) joins vertices
///    (r, c)-(r, c+1), v(r, c) joins (r, c)-(r+1, c), face (r, c) has corners
///    (r, c) and (r+1, c+1). All indices wrap.
///  * Planar: vertices form L rows x (L-1) columns; h(r, c) joins vertex
///    (r, c-1) to (r, c), so columns 0 and L-1 of horizontal edges dangle off
///    the left/right (rough) boundaries. Vertical edges form (L-1) x (L-1),
///    vcols = L - 1. Faces form (L-1) rows x L columns; the top and bottom
///    rows of horizontal edges belong to a single face (smooth boundaries).
///    Boundary stars and boundary faces have 3 edges.
///
/// Vertices and faces are numbered row-major within their own grid.
///
/// The tracked logical qubit has Z-logical support on row 0 of horizontal
/// edges and X-logical support on column 0 of horizontal edges; the two
/// supports share exactly edge h(0, 0).
class LatticeGeometry {
 public:
  int size() const { return size_; }
  Boundary boundary() const { return boundary_; }
  int edge_count() const { return edge_count_; }
  int vertex_count() const { return check_count(Sector::Vertex); }
  int face_count() const { return check_count(Sector::Face); }

  int check_count(Sector s) const { return static_cast<int>(sector(s).offsets.size()) - 1; }
  int check_rows(Sector s) const { return sector(s).rows; }
  int check_cols(Sector s) const { return sector(s).cols; }

  /// Edges of a check; unchecked index.
  std::span<const int> check_edges(Sector s, int check) const {
    const auto& t = sector(s);
    return {t.edges.data() + t.offsets[check],
            static_cast<std::size_t>(t.offsets[check + 1] - t.offsets[check])};
  }
  /// Checks of the given sector containing `edge` (1 or 2); unchecked index.
  std::span<const int> edge_checks(Sector s, int edge) const {
    const auto& t = sector(s);
    return {t.by_edge[edge].data(), static_cast<std::size_t>(t.by_edge_count[edge])};
  }

  Site check_site(Sector s, int check) const;
  int check_index(Sector s, Site site) const;

  int horizontal_edge(int row, int col) const { return row * size_ + col; }
  int vertical_edge(int row, int col) const { return size_ * size_ + row * vcols_ + col; }

  Step neighbor(Sector s, int check, Direction d) const;

  /// Taxicab distance between two checks of one sector (wrapped on the torus).
  int distance(Sector s, int a, int b) const;
  /// Edges needed to carry a defect to an open boundary; -1 on the torus.
  int boundary_distance(Sector s, int check) const;

  std::span<const int> z_logical() const { return z_logical_; }
  std::span<const int> x_logical() const { return x_logical_; }

 private:
  friend LatticeGeometry build_lattice(int L, Boundary boundary);

  struct SectorTables {
    int rows = 0;
    int cols = 0;
    std::vector<int> offsets;
    std::vector<int> edges;
    std::vector<std::array<int, 2>> by_edge;
    std::vector<int> by_edge_count;
  };
  const SectorTables& sector(Sector s) const { return s == Sector::Vertex ? vertex_ : face_; }

  int size_ = 0;
  int vcols_ = 0;
  int edge_count_ = 0;
  Boundary boundary_ = Boundary::Toric;
  SectorTables vertex_;
  SectorTables face_;
  std::vector<int> z_logical_;
  std::vector<int> x_logical_;
};

/// Throws std::invalid_argument for L < 2.
LatticeGeometry build_lattice(int L, Boundary boundary = Boundary::Toric);

// Range-checked incidence lookups; throw std::out_of_range.
std::span<const int> edges_of_vertex(const LatticeGeometry& geom, int vertex);
std::span<const int> edges_of_face(const LatticeGeometry& geom, int face);
std::span<const int> adjacent_plaquettes(const LatticeGeometry& geom, int edge);
std::span<const int> adjacent_faces(const LatticeGeometry& geom, int edge);

Boundary parse_boundary(std::string_view name);
std::string_view to_string(Boundary b);

}  // namespace mftp

#endif  // MFTP_LATTICE_H_
