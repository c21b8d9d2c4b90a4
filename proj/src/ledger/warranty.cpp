#include "umsp/ledger/warranty.hpp"

#include <openssl/evp.h>

#include <memory>

namespace umsp::ledger {

namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

PkeyPtr private_key_from_seed(BytesView seed) {
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
  if (!key) throw Error("ed25519 private key construction failed");
  return key;
}

}  // namespace

SigningKey::SigningKey(BytesView seed32) : seed_(seed32.begin(), seed32.end()) {
  if (seed_.size() != 32) throw ValueError("signing key seed must be 32 bytes");
  PkeyPtr key = private_key_from_seed(seed_);
  size_t len = 32;
  pub_.resize(len);
  if (EVP_PKEY_get_raw_public_key(key.get(), pub_.data(), &len) != 1 || len != 32)
    throw Error("ed25519 public key extraction failed");
}

SigningKey SigningKey::generate(RandomSource& rng) { return SigningKey(rng.bytes(32)); }

Bytes SigningKey::sign(BytesView message) const {
  PkeyPtr key = private_key_from_seed(seed_);
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1)
    throw Error("ed25519 sign init failed");
  size_t len = 64;
  Bytes sig(len);
  if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1 ||
      len != 64)
    throw Error("ed25519 signing failed");
  return sig;
}

bool signature_verify(BytesView public_key, BytesView message, BytesView signature) {
  if (public_key.size() != 32 || signature.size() != 64) return false;
  PkeyPtr key(
      EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, public_key.data(), public_key.size()));
  if (!key) return false;
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1)
    return false;
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                          message.size()) == 1;
}

Warranty make_signature_warranty(WarrantyKind kind, const SigningKey& key, const Digest32& digest) {
  if (kind != WarrantyKind::UserSignature && kind != WarrantyKind::ThirdPartySignature)
    throw ValueError("not a signature warranty kind");
  Warranty w;
  w.kind = kind;
  w.payload = key.public_key();
  Bytes sig = key.sign(BytesView(digest.data(), digest.size()));
  w.payload.insert(w.payload.end(), sig.begin(), sig.end());
  return w;
}

Warranty make_pow_warranty(const Digest32& digest, uint32_t difficulty) {
  Warranty w;
  w.kind = WarrantyKind::ProofOfWork;
  w.payload.resize(8);
  store_be64(mine_pow(digest, difficulty), w.payload.data());
  return w;
}

static bool has_leading_zero_bits(const Digest32& d, uint32_t bits) {
  uint32_t full = bits / 8, rem = bits % 8;
  for (uint32_t i = 0; i < full; ++i)
    if (d[i] != 0) return false;
  if (rem != 0 && (d[full] >> (8 - rem)) != 0) return false;
  return true;
}

uint64_t mine_pow(const Digest32& digest, uint32_t difficulty) {
  if (difficulty > kMaxPowDifficulty) throw ValueError("proof-of-work difficulty above cap");
  uint64_t nonce = 0;
  while (!verify_pow(digest, nonce, difficulty)) ++nonce;
  return nonce;
}

bool verify_pow(const Digest32& digest, uint64_t nonce, uint32_t difficulty) {
  if (difficulty > kMaxPowDifficulty) throw ValueError("proof-of-work difficulty above cap");
  Bytes data(digest.begin(), digest.end());
  data.resize(40);
  store_be64(nonce, data.data() + 32);
  return has_leading_zero_bits(sha256(data), difficulty);
}

bool warranty_verify(const Warranty& warranty, const Digest32& digest, uint32_t pow_difficulty) {
  switch (warranty.kind) {
    case WarrantyKind::None:
      return warranty.payload.empty();
    case WarrantyKind::UserSignature:
    case WarrantyKind::ThirdPartySignature: {
      if (warranty.payload.size() != 96) return false;
      BytesView pub(warranty.payload.data(), 32);
      BytesView sig(warranty.payload.data() + 32, 64);
      return signature_verify(pub, BytesView(digest.data(), digest.size()), sig);
    }
    case WarrantyKind::ProofOfWork: {
      if (warranty.payload.size() != 8) return false;
      return verify_pow(digest, load_be64(warranty.payload.data()), pow_difficulty);
    }
  }
  return false;
}

}  // namespace umsp::ledger

namespace umsp {

std::string warranty_kind_name(WarrantyKind kind) {
  switch (kind) {
    case WarrantyKind::None:
      return "none";
    case WarrantyKind::UserSignature:
      return "sig";
    case WarrantyKind::ProofOfWork:
      return "pow";
    case WarrantyKind::ThirdPartySignature:
      return "third-party";
  }
  throw ValueError("unknown warranty kind");
}

WarrantyKind warranty_kind_from_name(const std::string& name) {
  if (name == "none") return WarrantyKind::None;
  if (name == "sig") return WarrantyKind::UserSignature;
  if (name == "pow") return WarrantyKind::ProofOfWork;
  if (name == "third-party") return WarrantyKind::ThirdPartySignature;
  throw ValueError("unknown warranty kind: " + name);
}

}  // namespace umsp
