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

#ifndef MFTP_DECODER_H_
#define MFTP_DECODER_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mftp/bits.h"
#include "mftp/lattice.h"
#include "mftp/pauli_frame.h"

namespace mftp {

enum class DecoderMode { Exact, Greedy };

DecoderMode parse_decoder_mode(std::string_view name);

struct DecoderOptions {
  DecoderMode mode = DecoderMode::Exact;
  /// Largest defect count solved by exact branch-and-bound; above this the
  /// greedy matcher is used and the result is flagged approximate.
  int exact_cap = 16;
};

/// Checks of one sector with eigenvalue -1.
struct DefectSet {
  Sector sector = Sector::Vertex;
  std::vector<int> sites;
};

DefectSet defects_of(std::span<const std::int8_t> syndrome, Sector sector);

struct Matching {
  /// Matched pairs; a second entry of Step::kBoundary means the defect is
  /// carried to an open boundary.
  std::vector<std::pair<int, int>> pairs;
  int total_weight = 0;
  BitField correction;
  bool approximate = false;
};

/// Range-checked wrapper around LatticeGeometry::distance.
int pairwise_distance(const LatticeGeometry& geom, Sector sector, int a, int b);

/// Shortest path between two checks: all column moves first, then row
/// moves. On the torus each leg takes the shorter way round, going
/// right/down on an exact tie.
BitField shortest_path(const LatticeGeometry& geom, Sector sector, int a, int b);
BitField path_to_boundary(const LatticeGeometry& geom, Sector sector, int a);

/// Minimum-weight pairing of the defects (plus boundary matches on the
/// planar patch) and the union of the routed paths. Throws
/// std::invalid_argument for an odd defect count on the torus.
Matching min_weight_matching(const DefectSet& defects, const LatticeGeometry& geom,
                             const DecoderOptions& options = {});

struct DecodeResult {
  LogicalClass logical = LogicalClass::I;
  bool approximate = false;
};

/// Syndrome, match and correct both sectors on a copy of the frame, then
/// classify. Throws std::logic_error if a correction fails to clear its
/// syndrome.
DecodeResult decode_and_classify(const PauliFrame& frame, const LatticeGeometry& geom,
                                 const DecoderOptions& options = {});

}  // namespace mftp

#endif  // MFTP_DECODER_H_
