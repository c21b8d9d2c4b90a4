#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace umsp {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

std::string to_hex(BytesView data);
Bytes from_hex(const std::string& hex);  // throws ValueError on bad input

inline Bytes to_bytes(BytesView v) { return Bytes(v.begin(), v.end()); }

void store_be32(uint32_t v, uint8_t* out);
void store_be64(uint64_t v, uint8_t* out);
uint32_t load_be32(const uint8_t* in);
uint64_t load_be64(const uint8_t* in);

}  // namespace umsp
