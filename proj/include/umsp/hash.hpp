#pragma once

#include <array>
#include <cstdint>

#include "umsp/bytes.hpp"

namespace umsp {

using Digest32 = std::array<uint8_t, 32>;

inline constexpr const char* kHashId = "sha-256";

Digest32 sha256(BytesView data);

// Incremental hasher over length-prefixed fields. Every field is fed as
// BE32(len) || bytes so that concatenation is unambiguous.
class FieldHasher {
 public:
  FieldHasher();
  FieldHasher& field(BytesView data);
  Digest32 finish() const;

 private:
  Bytes buffer_;
};

std::string digest_hex(const Digest32& d);

}  // namespace umsp
