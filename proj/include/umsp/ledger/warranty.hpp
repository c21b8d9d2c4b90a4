#pragma once

#include <optional>

#include "umsp/bytes.hpp"
#include "umsp/hash.hpp"
#include "umsp/params.hpp"
#include "umsp/rng.hpp"

namespace umsp::ledger {

// Ed25519 signing key, derived from a 32-byte seed so deterministic
// sources reproduce identical keys.
class SigningKey {
 public:
  explicit SigningKey(BytesView seed32);
  static SigningKey generate(RandomSource& rng);

  const Bytes& seed() const { return seed_; }
  const Bytes& public_key() const { return pub_; }  // 32 bytes

  Bytes sign(BytesView message) const;  // 64 bytes, deterministic

 private:
  Bytes seed_;
  Bytes pub_;
};

bool signature_verify(BytesView public_key, BytesView message, BytesView signature);

// Immutability evidence attached to a block, verified against the block
// digest d_b (or d_{b,1} for shrunk blocks):
//   UserSignature / ThirdPartySignature: payload = pubkey(32) || sig(64)
//   ProofOfWork: payload = nonce(8); h(d_b || nonce) needs `difficulty`
//                leading zero bits
//   None: empty payload
struct Warranty {
  WarrantyKind kind = WarrantyKind::None;
  Bytes payload;

  bool operator==(const Warranty& o) const = default;
};

Warranty make_signature_warranty(WarrantyKind kind, const SigningKey& key, const Digest32& digest);
Warranty make_pow_warranty(const Digest32& digest, uint32_t difficulty);

// true when the payload is well-formed and binds the digest
bool warranty_verify(const Warranty& warranty, const Digest32& digest, uint32_t pow_difficulty);

// difficulty = required leading zero bits of h(digest || nonce), capped at 32
uint64_t mine_pow(const Digest32& digest, uint32_t difficulty);
bool verify_pow(const Digest32& digest, uint64_t nonce, uint32_t difficulty);

}  // namespace umsp::ledger
