#include "umsp/codec/codec.hpp"

#include <sstream>

namespace umsp::codec {

using bilinear::BackendId;
using bilinear::G2Element;
using bilinear::Scalar;
using ledger::Block;
using ledger::Chain;
using ledger::ChainVariant;
using ledger::DataBlock;
using ledger::ShrunkBlock;
using ledger::VariableState;
using protocol::EncapsulatedKey;
using protocol::MaskingShards;

namespace {

constexpr uint8_t kBlockRecord = 1;

Bytes mpz_bytes(const mpz_class& v) {
  if (v == 0) return Bytes{0};
  Bytes out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
  size_t count = 0;
  mpz_export(out.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(count);
  return out;
}

mpz_class mpz_from_bytes(BytesView b) {
  mpz_class v;
  if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  return v;
}

Digest32 digest_from(const Bytes& b, size_t offset) {
  if (b.size() != 32)
    throw DecodeError(DecodeError::Kind::BadValue, offset, "expected a 32-byte digest");
  Digest32 d;
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

ledger::Warranty read_warranty(ByteReader& r) {
  size_t at = r.offset();
  uint8_t kind = r.u8();
  if (kind > 3)
    throw DecodeError(DecodeError::Kind::BadValue, at,
                      "unknown warranty kind " + std::to_string(kind));
  ledger::Warranty w;
  w.kind = static_cast<WarrantyKind>(kind);
  w.payload = r.blob();
  return w;
}

void check_params_digest(const Digest32& stored, const Digest32& expected, size_t offset) {
  if (stored != expected)
    throw DecodeError(DecodeError::Kind::BadValue, offset,
                      "file references different ledger parameters");
}

}  // namespace

Bytes encode_params(const LedgerParams& params) {
  ByteWriter w;
  write_header(w, FileType::Params);
  const auto& desc = params.group->description();
  w.u8(static_cast<uint8_t>(desc.backend));
  w.blob(mpz_bytes(desc.order));
  w.u32(desc.scalar_bytes);
  w.u32(desc.g1_bytes);
  w.u32(desc.g2_bytes);
  w.u32(desc.gt_bytes);
  w.u32(params.shard_count);
  w.u32(params.shard_width);
  w.str(params.hash_id);
  w.blob(params.group->encode(params.group->g1_base()));
  w.blob(params.group->encode(params.group->g2_base()));
  w.u8(static_cast<uint8_t>(params.warranty));
  w.u32(params.pow_difficulty);
  w.checksum();
  return w.take();
}

LedgerParams decode_params(BytesView data) {
  ByteReader r(data);
  read_header(r, FileType::Params);
  size_t at = r.offset();
  uint8_t backend = r.u8();
  if (backend != 1 && backend != 2)
    throw DecodeError(DecodeError::Kind::BadValue, at, "unknown backend id");
  bilinear::GroupDescription desc;
  desc.backend = static_cast<BackendId>(backend);
  desc.order = mpz_from_bytes(r.blob());
  desc.scalar_bytes = r.u32();
  desc.g1_bytes = r.u32();
  desc.g2_bytes = r.u32();
  desc.gt_bytes = r.u32();

  LedgerParams params;
  params.group = bilinear::make_group(desc);
  params.shard_count = r.u32();
  params.shard_width = r.u32();
  params.hash_id = r.str();
  if (params.hash_id != kHashId)
    throw DecodeError(DecodeError::Kind::BadValue, at, "unsupported hash identifier");
  if (params.shard_width != desc.gt_bytes)
    throw DecodeError(DecodeError::Kind::BadValue, at, "shard width must equal GT width");
  if (params.shard_count == 0)
    throw DecodeError(DecodeError::Kind::BadValue, at, "shard count must be positive");
  Bytes g1 = r.blob();
  Bytes g2 = r.blob();
  if (!(params.group->decode_g1(g1) == params.group->g1_base()) ||
      !(params.group->decode_g2(g2) == params.group->g2_base()))
    throw DecodeError(DecodeError::Kind::BadValue, at, "generator mismatch");
  at = r.offset();
  uint8_t kind = r.u8();
  if (kind > 3) throw DecodeError(DecodeError::Kind::BadValue, at, "unknown warranty kind");
  params.warranty = static_cast<WarrantyKind>(kind);
  params.pow_difficulty = r.u32();
  if (params.pow_difficulty > kMaxPowDifficulty)
    throw DecodeError(DecodeError::Kind::BadValue, at, "pow difficulty above cap");
  r.checksum();
  r.expect_end();
  return params;
}

Digest32 params_digest(const LedgerParams& params) { return sha256(encode_params(params)); }

Bytes encode_chain_header(ChainVariant variant, const Digest32& params_digest) {
  ByteWriter w;
  write_header(w, FileType::Chain);
  w.u8(static_cast<uint8_t>(variant));
  w.digest(ledger::kGenesisHash);
  w.digest(params_digest);
  w.checksum();
  return w.take();
}

Bytes encode_block_record(const Block& block) {
  Bytes body = ledger::encode_block_body(block);
  ByteWriter w;
  w.u8(kBlockRecord);
  w.blob(body);
  w.checksum();
  return w.take();
}

Bytes encode_chain(const Chain& chain, const Digest32& params_digest) {
  Bytes out = encode_chain_header(chain.variant(), params_digest);
  for (const auto& block : chain.blocks()) {
    Bytes rec = encode_block_record(block);
    out.insert(out.end(), rec.begin(), rec.end());
  }
  return out;
}

namespace {

Block decode_block_body(BytesView body, const LedgerParams& params, size_t base_offset) {
  ByteReader r(body);
  size_t at = r.offset();
  uint8_t variant = r.u8();
  if (variant == static_cast<uint8_t>(ChainVariant::Full)) {
    DataBlock b;
    b.index = r.u64();
    uint32_t count = r.u32();
    if (count == 0 || count > params.shard_count)
      throw DecodeError(DecodeError::Kind::BadValue, base_offset + at,
                        "entry count out of range");
    b.entries.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
      protocol::ShardCipher e;
      size_t field_at = r.offset();
      e.cipher = r.blob();
      if (e.cipher.size() != params.shard_width)
        throw DecodeError(DecodeError::Kind::BadValue, base_offset + field_at,
                          "ciphertext shard has wrong width");
      e.plain_digest = r.digest();
      b.entries.push_back(std::move(e));
    }
    size_t ctl_at = r.offset();
    b.control_shard = r.blob();
    if (b.control_shard.size() != params.group->description().gt_bytes)
      throw DecodeError(DecodeError::Kind::BadValue, base_offset + ctl_at,
                        "control shard has wrong width");
    b.prev_hash = r.digest();
    b.digest = r.digest();
    b.message_length = r.u64();
    if (r.u8() != 0) b.owner_key_ref = r.str();
    b.warranty = read_warranty(r);
    r.expect_end();
    return b;
  }
  if (variant == static_cast<uint8_t>(ChainVariant::Shrunk)) {
    ShrunkBlock b;
    b.index = r.u64();
    b.payload_digest = r.digest();
    size_t ctl_at = r.offset();
    b.control_shard = r.blob();
    if (b.control_shard.size() != params.group->description().gt_bytes)
      throw DecodeError(DecodeError::Kind::BadValue, base_offset + ctl_at,
                        "control shard has wrong width");
    b.prev_hash = r.digest();
    b.digest = r.digest();
    b.payload_locator = r.str();
    b.warranty = read_warranty(r);
    r.expect_end();
    return b;
  }
  throw DecodeError(DecodeError::Kind::BadValue, base_offset + at, "unknown block variant");
}

}  // namespace

Chain decode_chain(BytesView data, const LedgerParams& params,
                   const Digest32& expected_params_digest) {
  // header region carries its own checksum; verify it in isolation
  constexpr size_t kHeaderLen = 4 + 1 + 1 + 1 + 32 + 32 + kChecksumBytes;
  if (data.size() < kHeaderLen)
    throw DecodeError(DecodeError::Kind::Truncated, data.size(),
                      "truncated input at offset " + std::to_string(data.size()) +
                          " (chain header needs " + std::to_string(kHeaderLen) + " bytes)");
  ByteReader hr(BytesView(data.data(), kHeaderLen));
  read_header(hr, FileType::Chain);
  size_t at = hr.offset();
  uint8_t variant = hr.u8();
  if (variant != 1 && variant != 2)
    throw DecodeError(DecodeError::Kind::BadValue, at, "unknown chain variant");
  Digest32 genesis = hr.digest();
  if (genesis != ledger::kGenesisHash)
    throw DecodeError(DecodeError::Kind::BadValue, at, "nonzero genesis hash");
  Digest32 stored_params = hr.digest();
  check_params_digest(stored_params, expected_params_digest, at);
  hr.checksum();

  std::vector<Block> blocks;
  size_t pos = kHeaderLen;
  while (pos < data.size()) {
    size_t rec_at = pos;
    try {
      ByteReader r(BytesView(data.data() + pos, data.size() - pos));
      uint8_t rectype = r.u8();
      if (rectype != kBlockRecord)
        throw DecodeError(DecodeError::Kind::BadValue, 0,
                          "unknown chain record type " + std::to_string(rectype));
      Bytes body = r.blob();
      r.checksum();
      Block block = decode_block_body(body, params, 5);
      bool is_full = std::holds_alternative<DataBlock>(block);
      if ((static_cast<ChainVariant>(variant) == ChainVariant::Full) != is_full)
        throw DecodeError(DecodeError::Kind::BadValue, 0,
                          "block variant differs from chain variant");
      blocks.push_back(std::move(block));
      pos += r.offset();
    } catch (const DecodeError& e) {
      throw DecodeError(e.kind(), rec_at + e.offset(),
                        std::string(e.what()) + " (block record " +
                            std::to_string(blocks.size() + 1) + ", file offset " +
                            std::to_string(rec_at + e.offset()) + ")");
    }
  }
  // index contiguity and back-links are audit findings, not decode errors
  return Chain::from_blocks(static_cast<ChainVariant>(variant), std::move(blocks));
}

Bytes encode_state(const VariableState& state, const Digest32& params_digest) {
  ByteWriter w;
  write_header(w, FileType::State);
  w.digest(params_digest);
  w.u64(state.epoch());
  const auto& group = state.shards().all().front().group();
  w.u32(static_cast<uint32_t>(state.shards().count()));
  for (const auto& eps : state.shards().all()) w.raw(group->encode(eps));
  w.u32(static_cast<uint32_t>(state.keys().size()));
  for (const auto& [idx, key] : state.keys()) {
    w.u64(idx);
    w.raw(group->encode(key.value()));
  }
  w.checksum();
  return w.take();
}

VariableState decode_state(BytesView data, const LedgerParams& params,
                           const Digest32& expected_params_digest) {
  ByteReader r(data);
  read_header(r, FileType::State);
  size_t at = r.offset();
  check_params_digest(r.digest(), expected_params_digest, at);
  uint64_t epoch = r.u64();
  uint32_t shard_count = r.u32();
  if (shard_count != params.shard_count)
    throw DecodeError(DecodeError::Kind::BadValue, at, "state shard count differs from params");
  const auto& group = params.group;
  std::vector<bilinear::G1Element> shards;
  shards.reserve(shard_count);
  for (uint32_t i = 0; i < shard_count; ++i) {
    size_t el_at = r.offset();
    Bytes enc = r.raw(group->description().g1_bytes);
    try {
      shards.push_back(group->decode_g1(enc));
    } catch (const DecodeError& e) {
      throw DecodeError(e.kind(), el_at, std::string(e.what()) + " (masking shard " +
                                              std::to_string(i + 1) + ")");
    }
  }
  uint32_t key_count = r.u32();
  std::map<uint64_t, EncapsulatedKey> keys;
  for (uint32_t i = 0; i < key_count; ++i) {
    uint64_t idx = r.u64();
    size_t el_at = r.offset();
    Bytes enc = r.raw(group->description().g2_bytes);
    G2Element k1;
    try {
      k1 = group->decode_g2(enc);
    } catch (const DecodeError& e) {
      throw DecodeError(e.kind(), el_at, std::string(e.what()) + " (encapsulated key for block " +
                                              std::to_string(idx) + ")");
    }
    if (keys.count(idx))
      throw DecodeError(DecodeError::Kind::BadValue, el_at, "duplicate encapsulated key index");
    keys.emplace(idx, EncapsulatedKey(idx, epoch, std::move(k1)));
  }
  r.checksum();
  r.expect_end();
  return VariableState(MaskingShards(epoch, std::move(shards)), std::move(keys));
}

Bytes encode_keeper_secret(const protocol::KeeperSecret& secret, const LedgerParams& params) {
  ByteWriter w;
  write_header(w, FileType::KeeperSecret);
  w.u64(secret.epoch());
  w.raw(params.group->scalar_to_bytes(secret.time_key()));
  w.checksum();
  return w.take();
}

protocol::KeeperSecret decode_keeper_secret(BytesView data, const LedgerParams& params) {
  ByteReader r(data);
  read_header(r, FileType::KeeperSecret);
  uint64_t epoch = r.u64();
  Bytes enc = r.raw(params.group->description().scalar_bytes);
  Scalar s = params.group->scalar_from_bytes(enc);
  r.checksum();
  r.expect_end();
  return protocol::KeeperSecret(epoch, std::move(s));
}

Bytes encode_user_public(const UserPublicRecord& rec) {
  ByteWriter w;
  write_header(w, FileType::UserPublic);
  w.blob(rec.q.group()->encode(rec.q));
  w.blob(rec.signing_public);
  w.checksum();
  return w.take();
}

UserPublicRecord decode_user_public(BytesView data, const LedgerParams& params) {
  ByteReader r(data);
  read_header(r, FileType::UserPublic);
  UserPublicRecord rec{params.group->decode_g2(r.blob()), r.blob()};
  if (rec.signing_public.size() != 32)
    throw DecodeError(DecodeError::Kind::BadValue, r.offset(), "signing key must be 32 bytes");
  r.checksum();
  r.expect_end();
  return rec;
}

Bytes encode_user_secret(const UserSecretRecord& rec, const LedgerParams& params) {
  ByteWriter w;
  write_header(w, FileType::UserSecret);
  w.blob(params.group->scalar_to_bytes(rec.mu));
  w.blob(params.group->scalar_to_bytes(rec.v));
  w.blob(rec.signing_seed);
  w.checksum();
  return w.take();
}

UserSecretRecord decode_user_secret(BytesView data, const LedgerParams& params) {
  ByteReader r(data);
  read_header(r, FileType::UserSecret);
  UserSecretRecord rec{params.group->scalar_from_bytes(r.blob()),
                       params.group->scalar_from_bytes(r.blob()), r.blob()};
  if (rec.signing_seed.size() != 32)
    throw DecodeError(DecodeError::Kind::BadValue, r.offset(), "signing seed must be 32 bytes");
  r.checksum();
  r.expect_end();
  return rec;
}

Bytes encode_provider_public(const ProviderPublicRecord& rec) {
  ByteWriter w;
  write_header(w, FileType::ProviderPublic);
  w.blob(rec.d.group()->encode(rec.d));
  w.checksum();
  return w.take();
}

ProviderPublicRecord decode_provider_public(BytesView data, const LedgerParams& params) {
  ByteReader r(data);
  read_header(r, FileType::ProviderPublic);
  ProviderPublicRecord rec{params.group->decode_g2(r.blob())};
  r.checksum();
  r.expect_end();
  return rec;
}

Bytes encode_provider_secret(const ProviderSecretRecord& rec, const LedgerParams& params) {
  ByteWriter w;
  write_header(w, FileType::ProviderSecret);
  w.blob(params.group->scalar_to_bytes(rec.d));
  w.checksum();
  return w.take();
}

ProviderSecretRecord decode_provider_secret(BytesView data, const LedgerParams& params) {
  ByteReader r(data);
  read_header(r, FileType::ProviderSecret);
  ProviderSecretRecord rec{params.group->scalar_from_bytes(r.blob())};
  r.checksum();
  r.expect_end();
  return rec;
}

Bytes encode_signer_public(const SignerPublicRecord& rec) {
  ByteWriter w;
  write_header(w, FileType::SignerPublic);
  w.blob(rec.signing_public);
  w.checksum();
  return w.take();
}

SignerPublicRecord decode_signer_public(BytesView data) {
  ByteReader r(data);
  read_header(r, FileType::SignerPublic);
  SignerPublicRecord rec{r.blob()};
  r.checksum();
  r.expect_end();
  return rec;
}

Bytes encode_signer_secret(const SignerSecretRecord& rec) {
  ByteWriter w;
  write_header(w, FileType::SignerSecret);
  w.blob(rec.signing_seed);
  w.checksum();
  return w.take();
}

SignerSecretRecord decode_signer_secret(BytesView data) {
  ByteReader r(data);
  read_header(r, FileType::SignerSecret);
  SignerSecretRecord rec{r.blob()};
  r.checksum();
  r.expect_end();
  return rec;
}

Bytes encode_grant(const protocol::SealedGrant& grant) {
  ByteWriter w;
  write_header(w, FileType::Grant);
  w.u64(grant.block());
  w.u64(grant.epoch());
  const auto& group = grant.ephemeral().group();
  w.blob(group->encode(grant.ephemeral()));
  w.blob(group->encode(grant.masked_key()));
  w.checksum();
  return w.take();
}

protocol::SealedGrant decode_grant(BytesView data, const LedgerParams& params) {
  ByteReader r(data);
  read_header(r, FileType::Grant);
  uint64_t block = r.u64();
  uint64_t epoch = r.u64();
  G2Element ephemeral = params.group->decode_g2(r.blob());
  G2Element masked = params.group->decode_g2(r.blob());
  r.checksum();
  r.expect_end();
  return protocol::SealedGrant(block, epoch, std::move(ephemeral), std::move(masked));
}

std::string describe_params(const LedgerParams& params) {
  const auto& desc = params.group->description();
  std::ostringstream out;
  out << "backend=" << bilinear::backend_name(desc.backend) << "\n";
  out << "order=0x" << desc.order.get_str(16) << "\n";
  out << "order_bits=" << mpz_sizeinbase(desc.order.get_mpz_t(), 2) << "\n";
  out << "shard_count=" << params.shard_count << "\n";
  out << "shard_width=" << params.shard_width << "\n";
  out << "hash=" << params.hash_id << "\n";
  out << "warranty=" << warranty_kind_name(params.warranty) << "\n";
  out << "pow_difficulty=" << params.pow_difficulty << "\n";
  return out.str();
}

std::string describe_state(const VariableState& state) {
  std::ostringstream out;
  out << "epoch=" << state.epoch() << "\n";
  const auto& group = state.shards().all().front().group();
  for (size_t i = 1; i <= state.shards().count(); ++i)
    out << "shard." << i << "=" << to_hex(group->encode(state.shards().shard(i))) << "\n";
  for (const auto& [idx, key] : state.keys())
    out << "key." << idx << "=" << to_hex(group->encode(key.value())) << "\n";
  return out.str();
}

std::string describe_block(const Block& block) {
  std::ostringstream out;
  std::visit(
      [&](const auto& b) {
        out << "index=" << b.index << "\n";
        out << "prev_hash=" << digest_hex(b.prev_hash) << "\n";
        out << "digest=" << digest_hex(b.digest) << "\n";
        out << "control_shard=" << to_hex(b.control_shard) << "\n";
        out << "warranty=" << warranty_kind_name(b.warranty.kind) << "\n";
        out << "warranty_payload=" << to_hex(b.warranty.payload) << "\n";
      },
      block);
  if (const auto* full = std::get_if<DataBlock>(&block)) {
    out << "message_length=" << full->message_length << "\n";
    if (full->owner_key_ref) out << "owner=" << *full->owner_key_ref << "\n";
    for (size_t i = 0; i < full->entries.size(); ++i) {
      out << "cipher." << (i + 1) << "=" << to_hex(full->entries[i].cipher) << "\n";
      out << "plain_digest." << (i + 1) << "=" << digest_hex(full->entries[i].plain_digest)
          << "\n";
    }
  } else {
    const auto& shrunk = std::get<ShrunkBlock>(block);
    out << "payload_digest=" << digest_hex(shrunk.payload_digest) << "\n";
    out << "locator=" << shrunk.payload_locator << "\n";
  }
  return out.str();
}

}  // namespace umsp::codec
