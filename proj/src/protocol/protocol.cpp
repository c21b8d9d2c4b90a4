#include "umsp/protocol/protocol.hpp"

#include <algorithm>

namespace umsp::protocol {

using bilinear::Group;

SetupResult keeper_setup(std::shared_ptr<const Group> group, const SetupRequest& request,
                         RandomSource& rng) {
  const uint32_t delta = group->description().gt_bytes;
  if (request.block_bytes < delta)
    throw ValueError("block length must be at least one shard width (" + std::to_string(delta) +
                     " bytes)");
  if (request.pow_difficulty > kMaxPowDifficulty)
    throw ValueError("proof-of-work difficulty above cap");
  const auto shard_count = static_cast<uint32_t>((request.block_bytes + delta - 1) / delta);

  std::vector<bilinear::G1Element> shards;
  shards.reserve(shard_count);
  bilinear::G1Element g1 = group->g1_base();
  std::vector<Scalar> setup_exponents;
  setup_exponents.reserve(shard_count);
  for (uint32_t i = 0; i < shard_count; ++i) setup_exponents.push_back(group->random_scalar(rng));
  Scalar s0 = group->random_scalar(rng);
  for (uint32_t i = 0; i < shard_count; ++i)
    shards.push_back(group->exp(g1, group->scalar_mul(setup_exponents[i], s0)));
  // u_i leave scope here; only s_0 is retained

  LedgerParams params;
  params.group = group;
  params.shard_count = shard_count;
  params.shard_width = delta;
  params.hash_id = kHashId;
  params.warranty = request.warranty;
  params.pow_difficulty = request.pow_difficulty;

  return SetupResult{std::move(params), MaskingShards(0, std::move(shards)),
                     KeeperSecret(0, std::move(s0))};
}

EpochTransition::EpochTransition(uint64_t from_epoch, Scalar s_old, Scalar s_new)
    : from_epoch_(from_epoch), s_old_(std::move(s_old)), s_new_(std::move(s_new)) {}

EpochTransition::EpochTransition(const Group& group, KeeperSecret& retiring, RandomSource& rng)
    : EpochTransition(retiring.epoch(), Scalar{}, group.random_scalar(rng)) {
  s_old_ = retiring.take();
}

EpochTransition EpochTransition::with_time_key(KeeperSecret& retiring, Scalar next_key) {
  uint64_t epoch = retiring.epoch();
  Scalar s_old = retiring.take();
  EpochTransition t(epoch, std::move(s_old), std::move(next_key));
  return t;
}

MaskingShards EpochTransition::advance(const MaskingShards& shards) const {
  if (shards.epoch() != from_epoch_)
    throw StateError("masking shards are not at the transition's source epoch");
  if (shards.count() == 0) throw ValueError("empty shard list");
  const auto& group = shards.all().front().group();
  Scalar ratio = group->scalar_mul(s_new_, group->scalar_inv(s_old_));
  std::vector<bilinear::G1Element> next;
  next.reserve(shards.count());
  for (const auto& eps : shards.all()) next.push_back(group->exp(eps, ratio));
  return MaskingShards(from_epoch_ + 1, std::move(next));
}

EncapsulatedKey EpochTransition::advance(const EncapsulatedKey& key) const {
  if (key.epoch() != from_epoch_)
    throw StateError("encapsulated key is not at the transition's source epoch");
  const auto& group = key.value().group();
  Scalar ratio = group->scalar_mul(s_old_, group->scalar_inv(s_new_));
  return EncapsulatedKey(key.block(), from_epoch_ + 1, group->exp(key.value(), ratio));
}

KeeperSecret EpochTransition::finish() {
  if (finished_) throw StateError("epoch transition already finished");
  finished_ = true;
  return KeeperSecret(from_epoch_ + 1, std::move(s_new_));
}

std::pair<MaskingShards, KeeperSecret> keeper_update_shards(KeeperSecret& retiring,
                                                            const MaskingShards& shards,
                                                            RandomSource& rng) {
  if (shards.count() == 0) throw ValueError("empty shard list");
  const auto& group = shards.all().front().group();
  Scalar next = group->random_scalar(rng);
  auto transition = EpochTransition::with_time_key(retiring, std::move(next));
  MaskingShards advanced = transition.advance(shards);
  return {std::move(advanced), transition.finish()};
}

EncryptionToken keeper_issue_token(const KeeperSecret& secret, const G2Element& user_public_key) {
  const auto& group = user_public_key.group();
  if (group->is_identity(user_public_key))
    throw ValueError("refusing to issue a token for the identity public key");
  Scalar inv = group->scalar_inv(secret.time_key());
  return EncryptionToken(secret.epoch(), group->exp(user_public_key, inv));
}

void keeper_rotate(KeeperSecret& retiring, const HandoverChannel& channel) {
  if (!channel) throw ValueError("rotation requires a handover channel");
  uint64_t epoch = retiring.epoch();
  Scalar s = retiring.take();
  channel(HandoverRecord(epoch, std::move(s)));
}

KeeperSecret keeper_adopt(HandoverRecord&& record) {
  return KeeperSecret(record.epoch_, std::move(record.s_));
}

UserKeypair user_keygen(std::shared_ptr<const Group> group, RandomSource& rng) {
  Scalar mu = group->random_scalar(rng);
  Scalar v = group->random_scalar(rng);
  G2Element q = group->exp(group->g2_base(), mu);
  return UserKeypair(std::move(mu), std::move(v), std::move(q));
}

EncryptionResult user_encrypt(const UserKeypair& keypair, const EncryptionToken& token,
                              const MaskingShards& shards, BytesView message,
                              uint64_t block_index, RandomSource& rng) {
  if (message.empty()) throw ValueError("cannot encrypt an empty message");
  if (token.epoch() != shards.epoch())
    throw StateError("encryption token epoch " + std::to_string(token.epoch()) +
                     " is stale against shards epoch " + std::to_string(shards.epoch()));
  const auto& group = token.value().group();
  const uint32_t delta = group->description().gt_bytes;
  const size_t used = (message.size() + delta - 1) / delta;
  if (used > shards.count())
    throw ValueError("message needs " + std::to_string(used) + " shards but the block holds " +
                     std::to_string(shards.count()));

  Scalar session = group->random_scalar(rng);  // k_b; forgotten on return
  G2Element k0_session = group->exp(token.value(), session);

  EncryptedPayload payload;
  payload.epoch = token.epoch();
  payload.message_length = message.size();
  payload.entries.reserve(used);
  for (size_t i = 0; i < used; ++i) {
    Bytes piece(delta, 0);
    size_t offset = i * delta;
    size_t n = std::min<size_t>(delta, message.size() - offset);
    std::copy(message.begin() + static_cast<long>(offset),
              message.begin() + static_cast<long>(offset + n), piece.begin());
    Bytes pad = group->gt_to_pad(group->pair(shards.shard(i + 1), k0_session));
    ShardCipher entry;
    entry.plain_digest = sha256(piece);
    entry.cipher.resize(delta);
    for (size_t b = 0; b < delta; ++b) entry.cipher[b] = piece[b] ^ pad[b];
    payload.entries.push_back(std::move(entry));
  }

  // k1 = k0^(v * k_b / mu) = g2^(v * k_b / s_t)
  Scalar exponent =
      group->scalar_mul(group->scalar_mul(keypair.v(), session), group->scalar_inv(keypair.mu()));
  EncapsulatedKey key(block_index, token.epoch(), group->exp(token.value(), exponent));
  return EncryptionResult{std::move(payload), std::move(key)};
}

UnlockedKey user_unlock(const UserKeypair& keypair, const EncapsulatedKey& key) {
  const auto& group = key.value().group();
  Scalar exponent = group->scalar_mul(keypair.mu(), group->scalar_inv(keypair.v()));
  return UnlockedKey(key.block(), key.epoch(), group->exp(key.value(), exponent));
}

SealedGrant user_seal_grant(const UnlockedKey& key, const G2Element& provider_public_key,
                            RandomSource& rng) {
  const auto& group = key.value().group();
  Scalar r = group->random_scalar(rng);
  G2Element ephemeral = group->exp(group->g2_base(), r);
  G2Element masked = group->mul(key.value(), group->exp(provider_public_key, r));
  return SealedGrant(key.block(), key.epoch(), std::move(ephemeral), std::move(masked));
}

ProviderKeypair provider_keygen(std::shared_ptr<const Group> group, RandomSource& rng) {
  Scalar d = group->random_scalar(rng);
  G2Element pub = group->exp(group->g2_base(), d);
  return ProviderKeypair(std::move(d), std::move(pub));
}

UnlockedKey provider_open_grant(const SealedGrant& grant, const ProviderKeypair& keypair) {
  const auto& group = grant.masked_key().group();
  G2Element shared = group->exp(grant.ephemeral(), keypair.secret());
  G2Element k2 = group->mul(grant.masked_key(), group->inv(shared));
  return UnlockedKey(grant.block(), grant.epoch(), std::move(k2));
}

Bytes provider_decrypt(const std::vector<ShardCipher>& entries, uint64_t message_length,
                       const MaskingShards& shards, const UnlockedKey& key) {
  if (entries.empty()) throw ValueError("no ciphertext shards");
  if (entries.size() > shards.count()) throw ValueError("more ciphertext shards than masking shards");
  const auto& group = key.value().group();
  const uint32_t delta = group->description().gt_bytes;
  uint64_t max_len = static_cast<uint64_t>(entries.size()) * delta;
  if (message_length == 0 || message_length > max_len ||
      message_length <= max_len - delta)
    throw ValueError("message length inconsistent with shard count");

  Bytes out;
  out.reserve(entries.size() * delta);
  std::vector<size_t> failed;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].cipher.size() != delta) throw ValueError("ciphertext shard has wrong width");
    Bytes pad = group->gt_to_pad(group->pair(shards.shard(i + 1), key.value()));
    Bytes piece(delta);
    for (size_t b = 0; b < delta; ++b) piece[b] = entries[i].cipher[b] ^ pad[b];
    if (sha256(piece) != entries[i].plain_digest) failed.push_back(i + 1);
    out.insert(out.end(), piece.begin(), piece.end());
  }
  if (!failed.empty()) {
    std::string msg = "digest mismatch on shard(s)";
    for (size_t i : failed) msg += " " + std::to_string(i);
    msg += " (stale or tampered key material)";
    throw IntegrityError(msg, std::move(failed));
  }
  out.resize(message_length);
  return out;
}

}  // namespace umsp::protocol
