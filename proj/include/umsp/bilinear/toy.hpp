#pragma once

#include "umsp/bilinear/group.hpp"

namespace umsp::bilinear {

// Test-oracle backend: G1 = G2 = GT = the additive group Z_p with
// pair(a, b) = a*b mod p. Algebraically exact, cryptographically
// worthless; small p makes discrete logs recoverable by exhaustive
// search, which is what the oracle tests rely on.
//
// The fixed generator of G1 and G2 is the least primitive root of p
// (2 for the default p = 101); any nonzero residue generates the
// additive group, the primitive root is simply a documented canonical
// choice. Elements encode as 4-byte big-endian residues.
inline constexpr uint32_t kToyElementBytes = 4;
inline constexpr uint32_t kToyScalarBytes = 4;
inline constexpr unsigned kToyDefaultOrder = 101;

}  // namespace umsp::bilinear
