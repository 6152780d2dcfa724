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

#ifndef MFTP_PAULI_FRAME_H_
#define MFTP_PAULI_FRAME_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mftp/bits.h"
#include "mftp/lattice.h"
#include "mftp/rng.h"

namespace mftp {

struct DecoderOptions;

enum class PauliKind { X, Z };

/// Accumulated errors, modulo stabilizers. A Y error is both bits set.
struct PauliFrame {
  BitField x_errors;
  BitField z_errors;

  PauliFrame() = default;
  explicit PauliFrame(const LatticeGeometry& geom)
      : x_errors(static_cast<std::size_t>(geom.edge_count())),
        z_errors(static_cast<std::size_t>(geom.edge_count())) {}

  /// The error bits a sector's checks see: vertex stars detect Z, faces X.
  BitField& errors(Sector s) { return s == Sector::Vertex ? z_errors : x_errors; }
  const BitField& errors(Sector s) const { return s == Sector::Vertex ? z_errors : x_errors; }

  bool clean() const { return x_errors.none() && z_errors.none(); }
  friend bool operator==(const PauliFrame&, const PauliFrame&) = default;
};

/// Stabilizer eigenvalues, +1 or -1 per check.
struct SyndromeField {
  std::vector<std::int8_t> vertex;  // b_v
  std::vector<std::int8_t> face;    // a_f

  std::vector<std::int8_t>& of(Sector s) { return s == Sector::Vertex ? vertex : face; }
  const std::vector<std::int8_t>& of(Sector s) const { return s == Sector::Vertex ? vertex : face; }
  bool trivial() const;
};

/// Logical action on the tracked qubit. Bit 0 is X, bit 1 is Z, so
/// composition is XOR (the Klein four-group).
enum class LogicalClass : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline LogicalClass compose(LogicalClass a, LogicalClass b) {
  return static_cast<LogicalClass>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
char to_char(LogicalClass c);
LogicalClass parse_logical_class(char c);

/// Flips each x bit and each z bit independently with probability p.
/// Randomness is consumed edge by edge, x before z. Throws for p outside [0, 1].
void inject_errors(PauliFrame& frame, double p, CounterRng& rng);

SyndromeField compute_syndrome(const PauliFrame& frame, const LatticeGeometry& geom);
std::vector<std::int8_t> sector_syndrome(const BitField& errors, const LatticeGeometry& geom,
                                         Sector s);

/// XORs `correction` into the x (kind X) or z (kind Z) bits.
void apply_correction(PauliFrame& frame, const BitField& correction, PauliKind kind);

/// XORs a stabilizer into the frame: kind X applies the vertex star B_v at
/// `site`, kind Z applies the face operator A_f.
void apply_stabilizer(PauliFrame& frame, const LatticeGeometry& geom, int site, PauliKind kind);

/// Class of a frame whose syndrome is already trivial, read from the
/// parities against the reference logical supports.
LogicalClass residual_class(const PauliFrame& frame, const LatticeGeometry& geom);

/// Decodes a copy of the frame with the reference decoder and returns the
/// logical class of the cleaned residual.
LogicalClass homology_class(const PauliFrame& frame, const LatticeGeometry& geom,
                            const DecoderOptions& options);

/// "x:<hex>;z:<hex>" using BitField::to_hex.
std::string frame_to_hex(const PauliFrame& frame);
PauliFrame frame_from_hex(std::string_view text, const LatticeGeometry& geom);

}  // namespace mftp

#endif  // MFTP_PAULI_FRAME_H_
