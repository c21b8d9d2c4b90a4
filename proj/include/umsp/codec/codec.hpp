#pragma once

#include "umsp/codec/records.hpp"
#include "umsp/ledger/chain.hpp"
#include "umsp/params.hpp"
#include "umsp/protocol/types.hpp"

namespace umsp::codec {

// Canonical, bit-exact serialization of every protocol and ledger
// object. decode(encode(x)) == x, and semantically equal objects encode
// to identical bytes. Group elements use their backend's canonical
// encodings; secrets only ever appear in the explicit *Secret records.

Bytes encode_params(const LedgerParams& params);
LedgerParams decode_params(BytesView data);
Digest32 params_digest(const LedgerParams& params);

Bytes encode_chain(const ledger::Chain& chain, const Digest32& params_digest);
ledger::Chain decode_chain(BytesView data, const LedgerParams& params,
                           const Digest32& expected_params_digest);

// chain file pieces, for append-only writes
Bytes encode_chain_header(ledger::ChainVariant variant, const Digest32& params_digest);
Bytes encode_block_record(const ledger::Block& block);

Bytes encode_state(const ledger::VariableState& state, const Digest32& params_digest);
ledger::VariableState decode_state(BytesView data, const LedgerParams& params,
                                   const Digest32& expected_params_digest);

Bytes encode_keeper_secret(const protocol::KeeperSecret& secret, const LedgerParams& params);
protocol::KeeperSecret decode_keeper_secret(BytesView data, const LedgerParams& params);

struct UserPublicRecord {
  bilinear::G2Element q;
  Bytes signing_public;  // ed25519, 32 bytes
};

struct UserSecretRecord {
  bilinear::Scalar mu;
  bilinear::Scalar v;
  Bytes signing_seed;  // 32 bytes
};

struct ProviderPublicRecord {
  bilinear::G2Element d;
};

struct ProviderSecretRecord {
  bilinear::Scalar d;
};

struct SignerPublicRecord {
  Bytes signing_public;
};

struct SignerSecretRecord {
  Bytes signing_seed;
};

Bytes encode_user_public(const UserPublicRecord& rec);
UserPublicRecord decode_user_public(BytesView data, const LedgerParams& params);
Bytes encode_user_secret(const UserSecretRecord& rec, const LedgerParams& params);
UserSecretRecord decode_user_secret(BytesView data, const LedgerParams& params);
Bytes encode_provider_public(const ProviderPublicRecord& rec);
ProviderPublicRecord decode_provider_public(BytesView data, const LedgerParams& params);
Bytes encode_provider_secret(const ProviderSecretRecord& rec, const LedgerParams& params);
ProviderSecretRecord decode_provider_secret(BytesView data, const LedgerParams& params);
Bytes encode_signer_public(const SignerPublicRecord& rec);
SignerPublicRecord decode_signer_public(BytesView data);
Bytes encode_signer_secret(const SignerSecretRecord& rec);
SignerSecretRecord decode_signer_secret(BytesView data);

Bytes encode_grant(const protocol::SealedGrant& grant);
protocol::SealedGrant decode_grant(BytesView data, const LedgerParams& params);

// Line-oriented hex mirror of the binary records, for human inspection.
std::string describe_params(const LedgerParams& params);
std::string describe_state(const ledger::VariableState& state);
std::string describe_block(const ledger::Block& block);

}  // namespace umsp::codec
