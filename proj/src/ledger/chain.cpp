#include "umsp/ledger/chain.hpp"

#include "umsp/codec/records.hpp"

namespace umsp::ledger {

uint64_t block_index(const Block& b) {
  return std::visit([](const auto& blk) { return blk.index; }, b);
}

const Digest32& block_digest(const Block& b) {
  return std::visit([](const auto& blk) -> const Digest32& { return blk.digest; }, b);
}

static void append_field(Bytes& out, BytesView field) {
  uint8_t len[4];
  store_be32(static_cast<uint32_t>(field.size()), len);
  out.insert(out.end(), len, len + 4);
  out.insert(out.end(), field.begin(), field.end());
}

Bytes entries_bytes(const std::vector<ShardCipher>& entries) {
  Bytes out;
  for (const auto& e : entries) {
    append_field(out, e.cipher);
    append_field(out, BytesView(e.plain_digest.data(), e.plain_digest.size()));
  }
  return out;
}

Digest32 full_block_digest(const std::vector<ShardCipher>& entries, BytesView control_shard,
                           const Digest32& prev_hash) {
  Bytes data = entries_bytes(entries);
  append_field(data, control_shard);
  append_field(data, BytesView(prev_hash.data(), prev_hash.size()));
  return sha256(data);
}

Digest32 payload_digest(const std::vector<ShardCipher>& entries) {
  return sha256(entries_bytes(entries));
}

Digest32 shrunk_block_digest(const Digest32& payload_digest, BytesView control_shard,
                             const Digest32& prev_hash) {
  Bytes data;
  append_field(data, BytesView(payload_digest.data(), payload_digest.size()));
  append_field(data, control_shard);
  append_field(data, BytesView(prev_hash.data(), prev_hash.size()));
  return sha256(data);
}

// Canonical block bytes, shared with the on-disk chain records; the
// successor's prev_hash commits to every field, warranty included.
Bytes encode_block_body(const Block& b) {
  codec::ByteWriter w;
  if (const auto* full = std::get_if<DataBlock>(&b)) {
    w.u8(static_cast<uint8_t>(ChainVariant::Full));
    w.u64(full->index);
    w.u32(static_cast<uint32_t>(full->entries.size()));
    for (const auto& e : full->entries) {
      w.blob(e.cipher);
      w.digest(e.plain_digest);
    }
    w.blob(full->control_shard);
    w.digest(full->prev_hash);
    w.digest(full->digest);
    w.u64(full->message_length);
    w.u8(full->owner_key_ref ? 1 : 0);
    if (full->owner_key_ref) w.str(*full->owner_key_ref);
    w.u8(static_cast<uint8_t>(full->warranty.kind));
    w.blob(full->warranty.payload);
  } else {
    const auto& shrunk = std::get<ShrunkBlock>(b);
    w.u8(static_cast<uint8_t>(ChainVariant::Shrunk));
    w.u64(shrunk.index);
    w.digest(shrunk.payload_digest);
    w.blob(shrunk.control_shard);
    w.digest(shrunk.prev_hash);
    w.digest(shrunk.digest);
    w.str(shrunk.payload_locator);
    w.u8(static_cast<uint8_t>(shrunk.warranty.kind));
    w.blob(shrunk.warranty.payload);
  }
  return w.take();
}

Digest32 block_hash(const Block& b) { return sha256(encode_block_body(b)); }

Chain Chain::from_blocks(ChainVariant variant, std::vector<Block> blocks) {
  Chain chain(variant);
  for (const Block& b : blocks) {
    bool is_full = std::holds_alternative<DataBlock>(b);
    if ((variant == ChainVariant::Full) != is_full)
      throw ValueError("block variant does not match the chain variant");
  }
  chain.blocks_ = std::move(blocks);
  return chain;
}

void Chain::append(Block b) {
  uint64_t idx = block_index(b);
  if (idx != blocks_.size() + 1)
    throw StateError("appending block " + std::to_string(idx) + " but chain has " +
                     std::to_string(blocks_.size()) + " blocks");
  bool is_full = std::holds_alternative<DataBlock>(b);
  if ((variant_ == ChainVariant::Full) != is_full)
    throw StateError("block variant does not match the chain variant");
  Digest32 expect_prev = head_hash();
  const Digest32& got_prev =
      std::visit([](const auto& blk) -> const Digest32& { return blk.prev_hash; }, b);
  if (got_prev != expect_prev) throw StateError("block back-link does not match chain head");
  blocks_.push_back(std::move(b));
}

VariableState VariableState::with_key(EncapsulatedKey key) const {
  auto keys = keys_;
  uint64_t idx = key.block();
  keys.erase(idx);
  keys.emplace(idx, std::move(key));
  return VariableState(shards_, std::move(keys));
}

}  // namespace umsp::ledger
