#include "umsp/ledger/ledger.hpp"

namespace umsp::ledger {

using protocol::EpochTransition;
using protocol::KeeperSecret;

static Warranty build_warranty(const LedgerParams& params, const WarrantyRequest& request,
                               const Digest32& digest) {
  switch (params.warranty) {
    case WarrantyKind::None:
      return Warranty{};
    case WarrantyKind::ProofOfWork:
      return make_pow_warranty(digest, params.pow_difficulty);
    case WarrantyKind::UserSignature:
    case WarrantyKind::ThirdPartySignature:
      if (!request.signer) throw ValueError("signature warranty requested without a signing key");
      return make_signature_warranty(params.warranty, *request.signer, digest);
  }
  throw ValueError("unknown warranty kind");
}

AppendResult append_block(const LedgerParams& params, Chain& chain, const VariableState& state,
                          AppendRequest request) {
  if (request.payload.epoch != state.epoch())
    throw StateError("payload encrypted at epoch " + std::to_string(request.payload.epoch) +
                     " but the ledger is at epoch " + std::to_string(state.epoch()));
  if (request.key.epoch() != state.epoch())
    throw StateError("encapsulated key epoch does not match the ledger epoch");
  if (request.payload.entries.size() > params.shard_count)
    throw ValueError("payload has more shards than the block length allows");
  if (request.payload.entries.empty()) throw ValueError("payload has no shards");

  const uint64_t index = chain.size() + 1;
  if (request.key.block() != index)
    throw StateError("encapsulated key labeled for block " + std::to_string(request.key.block()) +
                     " but the next block is " + std::to_string(index));

  // c_b = e(eps_ctl, k1): epoch-invariant because the update exponents cancel
  const auto& group = params.group;
  uint64_t ctl = control_index(index, params.shard_count);
  Bytes control =
      group->encode(group->pair(state.shards().shard(ctl), request.key.value()));

  Digest32 prev = chain.head_hash();
  Block block;
  if (chain.variant() == ChainVariant::Full) {
    DataBlock b;
    b.index = index;
    b.entries = std::move(request.payload.entries);
    b.control_shard = control;
    b.prev_hash = prev;
    b.digest = full_block_digest(b.entries, b.control_shard, b.prev_hash);
    b.warranty = build_warranty(params, request.warranty, b.digest);
    b.owner_key_ref = std::move(request.owner_key_ref);
    b.message_length = request.payload.message_length;
    block = std::move(b);
  } else {
    ShrunkBlock b;
    b.index = index;
    b.payload_digest = payload_digest(request.payload.entries);
    b.control_shard = control;
    b.prev_hash = prev;
    b.digest = shrunk_block_digest(b.payload_digest, b.control_shard, b.prev_hash);
    b.warranty = build_warranty(params, request.warranty, b.digest);
    if (request.payload_locator.empty())
      throw ValueError("shrunk chains need a payload locator");
    b.payload_locator = std::move(request.payload_locator);
    block = std::move(b);
  }

  chain.append(std::move(block));
  return AppendResult{index, state.with_key(std::move(request.key))};
}

std::pair<VariableState, KeeperSecret> update_epoch(const LedgerParams& params,
                                                    const VariableState& state,
                                                    KeeperSecret& secret, RandomSource& rng) {
  if (secret.epoch() != state.epoch())
    throw StateError("keeper secret epoch does not match the ledger epoch");
  EpochTransition transition(*params.group, secret, rng);
  MaskingShards shards = transition.advance(state.shards());
  std::map<uint64_t, protocol::EncapsulatedKey> keys;
  for (const auto& [idx, key] : state.keys()) keys.emplace(idx, transition.advance(key));
  return {VariableState(std::move(shards), std::move(keys)), transition.finish()};
}

}  // namespace umsp::ledger
