#include <openssl/rand.h>
#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>

#include "umsp/bytes.hpp"
#include "umsp/errors.hpp"
#include "umsp/hash.hpp"
#include "umsp/rng.hpp"

namespace umsp {

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(BytesView data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

static int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

Bytes from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw ValueError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = hex_nibble(hex[2 * i]);
    int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ValueError("invalid hex digit");
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

void store_be32(uint32_t v, uint8_t* out) {
  out[0] = static_cast<uint8_t>(v >> 24);
  out[1] = static_cast<uint8_t>(v >> 16);
  out[2] = static_cast<uint8_t>(v >> 8);
  out[3] = static_cast<uint8_t>(v);
}

void store_be64(uint64_t v, uint8_t* out) {
  store_be32(static_cast<uint32_t>(v >> 32), out);
  store_be32(static_cast<uint32_t>(v), out + 4);
}

uint32_t load_be32(const uint8_t* in) {
  return (static_cast<uint32_t>(in[0]) << 24) | (static_cast<uint32_t>(in[1]) << 16) |
         (static_cast<uint32_t>(in[2]) << 8) | static_cast<uint32_t>(in[3]);
}

uint64_t load_be64(const uint8_t* in) {
  return (static_cast<uint64_t>(load_be32(in)) << 32) | load_be32(in + 4);
}

Digest32 sha256(BytesView data) {
  Digest32 out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

FieldHasher::FieldHasher() = default;

FieldHasher& FieldHasher::field(BytesView data) {
  uint8_t len[4];
  store_be32(static_cast<uint32_t>(data.size()), len);
  buffer_.insert(buffer_.end(), len, len + 4);
  buffer_.insert(buffer_.end(), data.begin(), data.end());
  return *this;
}

Digest32 FieldHasher::finish() const { return sha256(buffer_); }

std::string digest_hex(const Digest32& d) { return to_hex(BytesView(d.data(), d.size())); }

void SystemRandom::fill(std::span<uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
    throw Error("system randomness unavailable");
}

DeterministicRandom::DeterministicRandom(BytesView seed) : seed_(seed.begin(), seed.end()) {}

DeterministicRandom::DeterministicRandom(uint64_t seed) {
  seed_.resize(8);
  store_be64(seed, seed_.data());
}

void DeterministicRandom::fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (pending_.empty()) {
      Bytes block(seed_.size() + 8);
      std::memcpy(block.data(), seed_.data(), seed_.size());
      store_be64(counter_++, block.data() + seed_.size());
      Digest32 d = sha256(block);
      pending_.assign(d.begin(), d.end());
    }
    size_t take = std::min(pending_.size(), out.size() - done);
    std::memcpy(out.data() + done, pending_.data(), take);
    pending_.erase(pending_.begin(), pending_.begin() + static_cast<long>(take));
    done += take;
  }
}

}  // namespace umsp
