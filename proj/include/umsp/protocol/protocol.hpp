#pragma once

#include <functional>

#include "umsp/params.hpp"
#include "umsp/protocol/types.hpp"
#include "umsp/rng.hpp"

namespace umsp::protocol {

// ---------------------------------------------------------------------------
// File Keeper
// ---------------------------------------------------------------------------

struct SetupRequest {
  uint64_t block_bytes = 0;  // |B|, must be >= the backend's shard width
  WarrantyKind warranty = WarrantyKind::UserSignature;
  uint32_t pow_difficulty = 0;
};

struct SetupResult {
  LedgerParams params;
  MaskingShards shards;   // epoch 0
  KeeperSecret secret;    // epoch 0
};

// Chooses fresh exponents u_1..u_I followed by the time-key s_0 (in that
// draw order), publishes masking shards g1^(u_i * s_0) and keeps only s_0.
// I = ceil(|B| / delta).
SetupResult keeper_setup(std::shared_ptr<const bilinear::Group> group, const SetupRequest& request,
                         RandomSource& rng);

// One atomic re-keying step. Holding both time-keys is only possible
// inside this object; constructing it consumes the retiring secret and
// finish() releases the successor. Shards advance by s_new/s_old, the
// encapsulated keys by the inverse ratio.
class EpochTransition {
 public:
  EpochTransition(const bilinear::Group& group, KeeperSecret& retiring, RandomSource& rng);

  // Test instrumentation: inject the successor time-key instead of
  // drawing it.
  static EpochTransition with_time_key(KeeperSecret& retiring, Scalar next_key);

  uint64_t from_epoch() const { return from_epoch_; }

  MaskingShards advance(const MaskingShards& shards) const;
  EncapsulatedKey advance(const EncapsulatedKey& key) const;

  KeeperSecret finish();  // callable once

 private:
  EpochTransition(uint64_t from_epoch, Scalar s_old, Scalar s_new);

  uint64_t from_epoch_;
  Scalar s_old_;
  Scalar s_new_;
  bool finished_ = false;
};

// Convenience wrapper for a shard-only update (no encapsulated keys yet).
std::pair<MaskingShards, KeeperSecret> keeper_update_shards(KeeperSecret& retiring,
                                                            const MaskingShards& shards,
                                                            RandomSource& rng);

// k0 = q^(1/s_t) for the keeper's current epoch. Rejects the identity key.
EncryptionToken keeper_issue_token(const KeeperSecret& secret, const G2Element& user_public_key);

// Handover payload for a successor keeper. Confidential by contract; the
// caller supplies the channel.
class HandoverRecord {
 public:
  HandoverRecord(uint64_t epoch, Scalar time_key) : epoch_(epoch), s_(std::move(time_key)) {}
  uint64_t epoch() const { return epoch_; }

 private:
  friend KeeperSecret keeper_adopt(HandoverRecord&& record);
  uint64_t epoch_;
  Scalar s_;
};

using HandoverChannel = std::function<void(HandoverRecord&&)>;

// Emits the live time-key over the channel and erases the local copy;
// every later use of the retired secret raises StateError.
void keeper_rotate(KeeperSecret& retiring, const HandoverChannel& channel);

KeeperSecret keeper_adopt(HandoverRecord&& record);

// ---------------------------------------------------------------------------
// User
// ---------------------------------------------------------------------------

// Draws mu then v (in that order); publishes q = g2^mu.
UserKeypair user_keygen(std::shared_ptr<const bilinear::Group> group, RandomSource& rng);

struct EncryptionResult {
  EncryptedPayload payload;
  EncapsulatedKey key;  // k1 = k0^(v*k_b/mu); paired with the payload's block
};

// Splits the message into delta-byte shards (zero-padding the last),
// draws the session scalar k_b (one draw, then discarded) and masks shard
// i with the pad of pair(eps_i, k0^k_b). block_index only labels the
// resulting encapsulated key; chain placement happens at append time.
EncryptionResult user_encrypt(const UserKeypair& keypair, const EncryptionToken& token,
                              const MaskingShards& shards, BytesView message,
                              uint64_t block_index, RandomSource& rng);

// k2 = k1^(mu/v); valid until the next epoch update.
UnlockedKey user_unlock(const UserKeypair& keypair, const EncapsulatedKey& key);

SealedGrant user_seal_grant(const UnlockedKey& key, const G2Element& provider_public_key,
                            RandomSource& rng);

// ---------------------------------------------------------------------------
// Service Provider
// ---------------------------------------------------------------------------

ProviderKeypair provider_keygen(std::shared_ptr<const bilinear::Group> group, RandomSource& rng);

UnlockedKey provider_open_grant(const SealedGrant& grant, const ProviderKeypair& keypair);

// Unmasks every shard with pair(eps_i, k2) and checks the published
// digests. Epoch mismatches are not blocked here: a stale key simply
// produces shards that fail their digest checks, which raises an
// IntegrityError carrying the failing indices.
Bytes provider_decrypt(const std::vector<ShardCipher>& entries, uint64_t message_length,
                       const MaskingShards& shards, const UnlockedKey& key);

}  // namespace umsp::protocol
