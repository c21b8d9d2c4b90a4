#pragma once

#include "umsp/ledger/audit.hpp"
#include "umsp/ledger/chain.hpp"
#include "umsp/protocol/protocol.hpp"

namespace umsp::ledger {

// Material for the block warranty; which parts are needed depends on
// params.warranty.
struct WarrantyRequest {
  const SigningKey* signer = nullptr;  // UserSignature / ThirdPartySignature
};

struct AppendRequest {
  EncryptedPayload payload;
  EncapsulatedKey key;
  WarrantyRequest warranty;
  std::optional<std::string> owner_key_ref;  // full chains
  std::string payload_locator;               // shrunk chains
};

struct AppendResult {
  uint64_t block_index;
  VariableState state;
};

// Builds block b = chain.size()+1: computes the control shard
// c_b = e(eps_ctl, k1) from the current shards, the block digests, and
// the warranty over d_b, then stores k1 in the variable state. The
// payload, key and state epochs must agree.
AppendResult append_block(const LedgerParams& params, Chain& chain, const VariableState& state,
                          AppendRequest request);

// Advances shards and every encapsulated key atomically with one fresh
// time-key; the retiring keeper secret is consumed.
std::pair<VariableState, protocol::KeeperSecret> update_epoch(const LedgerParams& params,
                                                              const VariableState& state,
                                                              protocol::KeeperSecret& secret,
                                                              RandomSource& rng);

}  // namespace umsp::ledger
