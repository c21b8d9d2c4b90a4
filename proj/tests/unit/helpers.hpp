#pragma once

#include <stdexcept>

#include "umsp/bilinear/group.hpp"
#include "umsp/rng.hpp"

namespace umsp::test {

using bilinear::G1Element;
using bilinear::G2Element;
using bilinear::Group;
using bilinear::GTElement;
using bilinear::Scalar;

// Exhaustive discrete logs on the toy backend: the independent oracle
// against closed-form exponents. Deliberately brute force.
inline uint64_t dlog_g1(const Group& g, const G1Element& x) {
  unsigned long p = mpz_get_ui(g.order().get_mpz_t());
  G1Element base = g.g1_base();
  for (uint64_t e = 0; e < p; ++e)
    if (g.eq(g.exp(base, g.scalar_from_u64(e)), x)) return e;
  throw std::runtime_error("G1 dlog not found");
}

inline uint64_t dlog_g2(const Group& g, const G2Element& x) {
  unsigned long p = mpz_get_ui(g.order().get_mpz_t());
  G2Element base = g.g2_base();
  for (uint64_t e = 0; e < p; ++e)
    if (g.eq(g.exp(base, g.scalar_from_u64(e)), x)) return e;
  throw std::runtime_error("G2 dlog not found");
}

inline uint64_t dlog_gt(const Group& g, const GTElement& x) {
  unsigned long p = mpz_get_ui(g.order().get_mpz_t());
  GTElement base = g.gt_base();
  for (uint64_t e = 0; e < p; ++e)
    if (g.eq(g.exp(base, g.scalar_from_u64(e)), x)) return e;
  throw std::runtime_error("GT dlog not found");
}

inline uint64_t to_u64(const Scalar& s) { return mpz_get_ui(s.value().get_mpz_t()); }

// Replays the scalar draws an operation performed from a deterministic
// source seeded identically, exposing "forgotten" exponents to tests.
class DrawReplay {
 public:
  DrawReplay(const Group& group, uint64_t seed) : group_(group), rng_(seed) {}

  Scalar next() { return group_.random_scalar(rng_); }
  uint64_t next_u64() { return to_u64(next()); }

 private:
  const Group& group_;
  DeterministicRandom rng_;
};

inline Bytes random_message(RandomSource& rng, size_t len) { return rng.bytes(len); }

}  // namespace umsp::test
