#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "umsp/bilinear/group.hpp"

namespace umsp {

enum class WarrantyKind : uint8_t {
  None = 0,
  UserSignature = 1,
  ProofOfWork = 2,
  ThirdPartySignature = 3,
};

std::string warranty_kind_name(WarrantyKind kind);
WarrantyKind warranty_kind_from_name(const std::string& name);

inline constexpr uint32_t kMaxPowDifficulty = 32;

// Public protocol parameters, fixed at setup and shared by every party.
struct LedgerParams {
  std::shared_ptr<const bilinear::Group> group;
  uint32_t shard_count = 0;     // I, maximum shards per block
  uint32_t shard_width = 0;     // delta, bytes per shard (= GT encoding width)
  std::string hash_id;          // "sha-256"
  WarrantyKind warranty = WarrantyKind::UserSignature;
  uint32_t pow_difficulty = 0;  // leading zero bits, ProofOfWork blocks only
};

}  // namespace umsp
