#pragma once

#include <optional>
#include <vector>

#include "umsp/bilinear/group.hpp"
#include "umsp/hash.hpp"

namespace umsp::protocol {

using bilinear::G1Element;
using bilinear::G2Element;
using bilinear::GTElement;
using bilinear::Group;
using bilinear::Scalar;

// The keeper's only long-lived secret: the current time-key. Move-only;
// epoch transitions and rotation consume the value, after which every
// operation on it fails with a StateError. The setup exponents u_i are
// never stored anywhere.
class KeeperSecret {
 public:
  KeeperSecret(uint64_t epoch, Scalar time_key) : epoch_(epoch), s_(std::move(time_key)) {}
  KeeperSecret(KeeperSecret&& other) noexcept = default;
  KeeperSecret& operator=(KeeperSecret&& other) noexcept = default;
  KeeperSecret(const KeeperSecret&) = delete;
  KeeperSecret& operator=(const KeeperSecret&) = delete;

  bool live() const { return s_.has_value(); }

  uint64_t epoch() const {
    require_live();
    return epoch_;
  }

  // Secret material; exposed for explicit export and tests only.
  const Scalar& time_key() const {
    require_live();
    return *s_;
  }

  // Zeroizes and invalidates. Used by epoch transitions and rotation.
  Scalar take() {
    require_live();
    Scalar s = std::move(*s_);
    s_.reset();
    return s;
  }

 private:
  void require_live() const {
    if (!s_) throw StateError("keeper secret has been erased (rotated or superseded)");
  }

  uint64_t epoch_ = 0;
  std::optional<Scalar> s_;
};

class UserKeypair {
 public:
  UserKeypair(Scalar mu, Scalar v, G2Element q)
      : mu_(std::move(mu)), v_(std::move(v)), q_(std::move(q)) {}

  const Scalar& mu() const { return mu_; }
  const Scalar& v() const { return v_; }
  const G2Element& public_key() const { return q_; }

 private:
  Scalar mu_;  // secret; q = g2^mu
  Scalar v_;   // secret; never published in any form
  G2Element q_;
};

class EncryptionToken {
 public:
  EncryptionToken(uint64_t epoch, G2Element k0) : epoch_(epoch), k0_(std::move(k0)) {}
  uint64_t epoch() const { return epoch_; }
  const G2Element& value() const { return k0_; }  // q^(1/s_t)

 private:
  uint64_t epoch_;
  G2Element k0_;
};

class EncapsulatedKey {
 public:
  EncapsulatedKey(uint64_t block, uint64_t epoch, G2Element k1)
      : block_(block), epoch_(epoch), k1_(std::move(k1)) {}
  uint64_t block() const { return block_; }
  uint64_t epoch() const { return epoch_; }
  const G2Element& value() const { return k1_; }  // g2^(v*k_b/s_t)

 private:
  uint64_t block_;
  uint64_t epoch_;
  G2Element k1_;
};

class UnlockedKey {
 public:
  UnlockedKey(uint64_t block, uint64_t epoch, G2Element k2)
      : block_(block), epoch_(epoch), k2_(std::move(k2)) {}
  uint64_t block() const { return block_; }
  uint64_t epoch() const { return epoch_; }
  const G2Element& value() const { return k2_; }  // g2^(mu*k_b/s_t)

 private:
  uint64_t block_;
  uint64_t epoch_;
  G2Element k2_;
};

class MaskingShards {
 public:
  MaskingShards(uint64_t epoch, std::vector<G1Element> shards)
      : epoch_(epoch), shards_(std::move(shards)) {}

  uint64_t epoch() const { return epoch_; }
  size_t count() const { return shards_.size(); }

  // 1-based, matching the published (shard, index) pairs
  const G1Element& shard(size_t i) const {
    if (i < 1 || i > shards_.size()) throw ValueError("shard index out of range");
    return shards_[i - 1];
  }

  const std::vector<G1Element>& all() const { return shards_; }

 private:
  uint64_t epoch_;
  std::vector<G1Element> shards_;
};

class ProviderKeypair {
 public:
  ProviderKeypair(Scalar d, G2Element pub) : d_(std::move(d)), pub_(std::move(pub)) {}
  const Scalar& secret() const { return d_; }
  const G2Element& public_key() const { return pub_; }

 private:
  Scalar d_;
  G2Element pub_;
};

// ElGamal-style wrapping of an unlocked key under a provider public key:
// R = g2^r, V = k2 * D^r.
class SealedGrant {
 public:
  SealedGrant(uint64_t block, uint64_t epoch, G2Element ephemeral, G2Element masked)
      : block_(block), epoch_(epoch), r_(std::move(ephemeral)), v_(std::move(masked)) {}
  uint64_t block() const { return block_; }
  uint64_t epoch() const { return epoch_; }
  const G2Element& ephemeral() const { return r_; }
  const G2Element& masked_key() const { return v_; }

 private:
  uint64_t block_;
  uint64_t epoch_;
  G2Element r_;
  G2Element v_;
};

// One delta-byte ciphertext shard plus the digest of its plaintext shard
// (digests are computed over the zero-padded shard).
struct ShardCipher {
  Bytes cipher;
  Digest32 plain_digest;
};

struct EncryptedPayload {
  uint64_t epoch = 0;
  std::vector<ShardCipher> entries;
  uint64_t message_length = 0;  // true byte length before padding
};

}  // namespace umsp::protocol
