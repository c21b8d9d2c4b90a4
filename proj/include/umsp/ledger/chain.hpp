#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "umsp/ledger/warranty.hpp"
#include "umsp/protocol/types.hpp"

namespace umsp::ledger {

using protocol::EncapsulatedKey;
using protocol::EncryptedPayload;
using protocol::MaskingShards;
using protocol::ShardCipher;

inline constexpr Digest32 kGenesisHash{};  // 32 zero bytes

enum class ChainVariant : uint8_t { Full = 1, Shrunk = 2 };

// Immutable block holding the encrypted payload itself.
//
//   d_b = h(c_1 || h(m_1) || ... || c_Ib || h(m_Ib) || c_b || prev_hash)
//
// with every field length-prefixed. The control shard is stored as its
// canonical GT encoding; the consistency check compares encodings.
struct DataBlock {
  uint64_t index = 0;  // 1-based, contiguous
  std::vector<ShardCipher> entries;
  Bytes control_shard;
  Digest32 prev_hash{};
  Digest32 digest{};
  Warranty warranty;
  std::optional<std::string> owner_key_ref;
  uint64_t message_length = 0;
};

// Block variant keeping the payload off-ledger:
//   d_b0 = h(c_1 || h(m_1) || ... || c_Ib || h(m_Ib))
//   d_b1 = h(d_b0 || c_b || prev_hash)
struct ShrunkBlock {
  uint64_t index = 0;
  Digest32 payload_digest{};  // d_b0
  Bytes control_shard;
  Digest32 prev_hash{};
  Digest32 digest{};  // d_b1
  Warranty warranty;
  std::string payload_locator;
};

using Block = std::variant<DataBlock, ShrunkBlock>;

uint64_t block_index(const Block& b);
const Digest32& block_digest(const Block& b);

// digest helpers shared by block construction and audit
Bytes entries_bytes(const std::vector<ShardCipher>& entries);
Digest32 full_block_digest(const std::vector<ShardCipher>& entries, BytesView control_shard,
                           const Digest32& prev_hash);
Digest32 payload_digest(const std::vector<ShardCipher>& entries);
Digest32 shrunk_block_digest(const Digest32& payload_digest, BytesView control_shard,
                             const Digest32& prev_hash);

// canonical block bytes; the on-disk record body and the preimage of
// block_hash
Bytes encode_block_body(const Block& b);

// hash of a serialized block, the back-link target of its successor
Digest32 block_hash(const Block& b);

// Append-only sequence of blocks of one variant. Indices run 1..size()
// and the first block links to the all-zero genesis hash.
class Chain {
 public:
  explicit Chain(ChainVariant variant) : variant_(variant) {}

  // Decode path and tamper tests: accepts blocks as stored, without the
  // index/back-link validation append() enforces. audit_chain is the
  // place where violations become findings.
  static Chain from_blocks(ChainVariant variant, std::vector<Block> blocks);

  ChainVariant variant() const { return variant_; }
  size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }
  const std::vector<Block>& blocks() const { return blocks_; }

  const Block& block(uint64_t index) const {
    if (index < 1 || index > blocks_.size()) throw ValueError("block index out of range");
    return blocks_[index - 1];
  }

  Digest32 head_hash() const {
    return blocks_.empty() ? kGenesisHash : block_hash(blocks_.back());
  }

  void append(Block b);  // validates index and back-link

 private:
  ChainVariant variant_;
  std::vector<Block> blocks_;
};

// The keeper-maintained part of the ledger: current masking shards plus
// one encapsulated key per published block, all at the same epoch.
class VariableState {
 public:
  VariableState(MaskingShards shards, std::map<uint64_t, EncapsulatedKey> keys)
      : shards_(std::move(shards)), keys_(std::move(keys)) {
    for (const auto& [idx, key] : keys_) {
      if (key.epoch() != shards_.epoch())
        throw StateError("encapsulated key epoch differs from state epoch");
      if (key.block() != idx) throw StateError("encapsulated key stored under wrong index");
    }
  }

  explicit VariableState(MaskingShards shards) : VariableState(std::move(shards), {}) {}

  uint64_t epoch() const { return shards_.epoch(); }
  const MaskingShards& shards() const { return shards_; }
  const std::map<uint64_t, EncapsulatedKey>& keys() const { return keys_; }

  const EncapsulatedKey* key_for_block(uint64_t index) const {
    auto it = keys_.find(index);
    return it == keys_.end() ? nullptr : &it->second;
  }

  VariableState with_key(EncapsulatedKey key) const;

 private:
  MaskingShards shards_;
  std::map<uint64_t, EncapsulatedKey> keys_;
};

// control shard index for block b: wraps over 1..I so every shard slot
// is eventually covered
inline uint64_t control_index(uint64_t block_index, uint64_t shard_count) {
  return (block_index - 1) % shard_count + 1;
}

}  // namespace umsp::ledger
