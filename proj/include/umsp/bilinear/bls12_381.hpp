#pragma once

#include "umsp/bilinear/group.hpp"

namespace umsp::bilinear {

// Production backend: BLS12-381 with the optimal ate pairing.
//
// G1 is the order-r subgroup of E(Fq): y^2 = x^3 + 4, G2 the order-r
// subgroup of the sextic twist E'(Fq2): y^2 = x^3 + 4(u+1), GT the
// order-r subgroup of Fq12*. Canonical encodings are the standard
// compressed forms (48 bytes for G1, 96 for G2, big-endian with flag
// bits in the top three bits of the first byte); GT serializes as the
// twelve Fq coefficients of the tower representation, 576 bytes.
//
// Field arithmetic is GMP; nothing is constant-time.
inline constexpr uint32_t kBlsScalarBytes = 32;
inline constexpr uint32_t kBlsG1Bytes = 48;
inline constexpr uint32_t kBlsG2Bytes = 96;
inline constexpr uint32_t kBlsGTBytes = 576;

// Test hook: the pairing's final exponentiation has two routes, the
// frobenius-based chain used in production and a plain square-and-multiply
// by the same exponent. Returns true when both routes agree on a random
// element derived from the given seed.
bool bls_final_exp_routes_agree(uint64_t seed);

}  // namespace umsp::bilinear
