#pragma once

#include <cstdint>
#include <span>

#include "umsp/bytes.hpp"

namespace umsp {

// Caller-supplied randomness. All protocol operations that need entropy
// take a RandomSource so tests can replay exact draw sequences.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<uint8_t> out) = 0;

  Bytes bytes(size_t n) {
    Bytes b(n);
    fill(b);
    return b;
  }
};

// OS-backed randomness.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<uint8_t> out) override;
};

// SHA-256 counter stream from a seed. Byte-for-byte reproducible across
// platforms; used for fixed-seed scenarios and property tests.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(BytesView seed);
  explicit DeterministicRandom(uint64_t seed);

  void fill(std::span<uint8_t> out) override;

 private:
  Bytes seed_;
  uint64_t counter_ = 0;
  Bytes pending_;
};

}  // namespace umsp
