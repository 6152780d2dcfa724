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

#include "mftp/pauli_frame.h"

#include <algorithm>
#include <stdexcept>

#include "mftp/decoder.h"

namespace mftp {

bool SyndromeField::trivial() const {
  auto up = [](std::int8_t s) { return s == 1; };
  return std::all_of(vertex.begin(), vertex.end(), up) && std::all_of(face.begin(), face.end(), up);
}

char to_char(LogicalClass c) {
  switch (c) {
    case LogicalClass::I: return 'I';
    case LogicalClass::X: return 'X';
    case LogicalClass::Z: return 'Z';
    case LogicalClass::Y: return 'Y';
  }
  return '?';
}

LogicalClass parse_logical_class(char c) {
  switch (c) {
    case 'I': return LogicalClass::I;
    case 'X': return LogicalClass::X;
    case 'Z': return LogicalClass::Z;
    case 'Y': return LogicalClass::Y;
    default: throw std::invalid_argument(std::string("bad logical class '") + c + "'");
  }
}

void inject_errors(PauliFrame& frame, double p, CounterRng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("error probability outside [0, 1]");
  if (p == 0.0) return;
  const std::size_t n = frame.x_errors.size();
  for (std::size_t e = 0; e < n; ++e) {
    if (rng.bernoulli(p)) frame.x_errors.flip(e);
    if (rng.bernoulli(p)) frame.z_errors.flip(e);
  }
}

std::vector<std::int8_t> sector_syndrome(const BitField& errors, const LatticeGeometry& geom,
                                         Sector s) {
  if (errors.size() != static_cast<std::size_t>(geom.edge_count())) {
    throw std::invalid_argument("frame size does not match lattice");
  }
  const int n = geom.check_count(s);
  std::vector<std::int8_t> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = errors.parity_over(geom.check_edges(s, k)) ? -1 : 1;
  }
  return out;
}

SyndromeField compute_syndrome(const PauliFrame& frame, const LatticeGeometry& geom) {
  return {sector_syndrome(frame.z_errors, geom, Sector::Vertex),
          sector_syndrome(frame.x_errors, geom, Sector::Face)};
}

void apply_correction(PauliFrame& frame, const BitField& correction, PauliKind kind) {
  (kind == PauliKind::X ? frame.x_errors : frame.z_errors) ^= correction;
}

void apply_stabilizer(PauliFrame& frame, const LatticeGeometry& geom, int site, PauliKind kind) {
  const auto edges = kind == PauliKind::X ? edges_of_vertex(geom, site) : edges_of_face(geom, site);
  BitField& target = kind == PauliKind::X ? frame.x_errors : frame.z_errors;
  for (int e : edges) target.flip(static_cast<std::size_t>(e));
}

LogicalClass residual_class(const PauliFrame& frame, const LatticeGeometry& geom) {
  // A Z chain acts as the logical Z when it anticommutes with the X logical.
  const bool z_fail = frame.z_errors.parity_over(geom.x_logical());
  const bool x_fail = frame.x_errors.parity_over(geom.z_logical());
  return static_cast<LogicalClass>((x_fail ? 1 : 0) | (z_fail ? 2 : 0));
}

LogicalClass homology_class(const PauliFrame& frame, const LatticeGeometry& geom,
                            const DecoderOptions& options) {
  return decode_and_classify(frame, geom, options).logical;
}

std::string frame_to_hex(const PauliFrame& frame) {
  return "x:" + frame.x_errors.to_hex() + ";z:" + frame.z_errors.to_hex();
}

PauliFrame frame_from_hex(std::string_view text, const LatticeGeometry& geom) {
  const auto sep = text.find(';');
  if (text.substr(0, 2) != "x:" || sep == std::string_view::npos ||
      text.substr(sep + 1, 2) != "z:") {
    throw std::invalid_argument("frame dump must look like x:<hex>;z:<hex>");
  }
  const auto n = static_cast<std::size_t>(geom.edge_count());
  PauliFrame frame;
  frame.x_errors = BitField::from_hex(text.substr(2, sep - 2), n);
  frame.z_errors = BitField::from_hex(text.substr(sep + 3), n);
  return frame;
}

}  // namespace mftp
