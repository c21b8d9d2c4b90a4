#include "umsp/ledger/audit.hpp"

#include <sstream>

namespace umsp::ledger {

static std::string short_hex(BytesView b) {
  std::string h = to_hex(b);
  return h.size() > 16 ? h.substr(0, 16) + ".." : h;
}

static std::string short_hex(const Digest32& d) { return short_hex(BytesView(d.data(), d.size())); }

AuditReport audit_chain(const LedgerParams& params, const Chain& chain) {
  AuditReport report;
  Digest32 expect_prev = kGenesisHash;
  uint64_t expect_index = 1;

  for (const Block& block : chain.blocks()) {
    uint64_t idx = block_index(block);
    report.checks_run++;
    if (idx != expect_index) {
      report.findings.push_back({expect_index, "index", std::to_string(expect_index),
                                 std::to_string(idx)});
    }

    const Digest32& prev =
        std::visit([](const auto& b) -> const Digest32& { return b.prev_hash; }, block);
    report.checks_run++;
    if (prev != expect_prev)
      report.findings.push_back({expect_index, "back-link", short_hex(expect_prev), short_hex(prev)});

    if (const auto* full = std::get_if<DataBlock>(&block)) {
      report.checks_run++;
      if (full->entries.empty() || full->entries.size() > params.shard_count)
        report.findings.push_back({expect_index, "shard-count",
                                   "1.." + std::to_string(params.shard_count),
                                   std::to_string(full->entries.size())});
      Digest32 recomputed = full_block_digest(full->entries, full->control_shard, full->prev_hash);
      report.checks_run++;
      if (recomputed != full->digest)
        report.findings.push_back(
            {expect_index, "block-digest", short_hex(recomputed), short_hex(full->digest)});
      report.checks_run++;
      if (!warranty_verify(full->warranty, full->digest, params.pow_difficulty))
        report.findings.push_back({expect_index, "warranty",
                                   warranty_kind_name(full->warranty.kind) + " valid", "invalid"});
    } else {
      const auto& shrunk = std::get<ShrunkBlock>(block);
      Digest32 recomputed =
          shrunk_block_digest(shrunk.payload_digest, shrunk.control_shard, shrunk.prev_hash);
      report.checks_run++;
      if (recomputed != shrunk.digest)
        report.findings.push_back(
            {expect_index, "block-digest", short_hex(recomputed), short_hex(shrunk.digest)});
      report.checks_run++;
      if (!warranty_verify(shrunk.warranty, shrunk.digest, params.pow_difficulty))
        report.findings.push_back({expect_index, "warranty",
                                   warranty_kind_name(shrunk.warranty.kind) + " valid", "invalid"});
    }

    expect_prev = block_hash(block);
    expect_index++;
  }
  return report;
}

AuditReport audit_variable_state(const LedgerParams& params, const Chain& chain,
                                 const VariableState& state) {
  AuditReport report;
  const auto& group = params.group;

  report.checks_run++;
  if (state.shards().count() != params.shard_count)
    report.findings.push_back({0, "shard-count", std::to_string(params.shard_count),
                               std::to_string(state.shards().count())});

  for (const Block& block : chain.blocks()) {
    uint64_t idx = block_index(block);
    const Bytes& stored =
        std::visit([](const auto& b) -> const Bytes& { return b.control_shard; }, block);
    report.checks_run++;
    const auto* key = state.key_for_block(idx);
    if (!key) {
      report.findings.push_back({idx, "control-shard", "encapsulated key present", "missing"});
      continue;
    }
    uint64_t ctl = control_index(idx, params.shard_count);
    if (ctl > state.shards().count()) continue;  // already reported above
    Bytes recomputed = group->encode(group->pair(state.shards().shard(ctl), key->value()));
    if (recomputed != stored)
      report.findings.push_back(
          {idx, "control-shard", short_hex(recomputed), short_hex(stored)});
  }
  return report;
}

std::string render_report(const AuditReport& report) {
  std::ostringstream out;
  if (report.passed()) {
    out << "audit passed (" << report.checks_run << " checks)\n";
    return out.str();
  }
  out << "audit FAILED: " << report.findings.size() << " finding(s) in " << report.checks_run
      << " checks\n";
  for (const auto& f : report.findings) {
    out << "  block " << f.block << " [" << f.stage << "] expected " << f.expected << ", got "
        << f.actual << "\n";
  }
  return out.str();
}

}  // namespace umsp::ledger
