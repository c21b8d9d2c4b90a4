#pragma once

#include "umsp/ledger/chain.hpp"
#include "umsp/params.hpp"

namespace umsp::ledger {

// A single failed check. `stage` names what was being recomputed;
// expected/actual hold hex digests or short descriptions, whichever fits
// the stage.
struct AuditFinding {
  uint64_t block = 0;  // 0 = chain-level problem
  std::string stage;
  std::string expected;
  std::string actual;
};

struct AuditReport {
  std::vector<AuditFinding> findings;
  size_t checks_run = 0;

  bool passed() const { return findings.empty(); }
};

// Recomputes every block digest (d_b, or d_b0/d_b1 for shrunk chains),
// every back-link, index contiguity and every warranty. Read-only;
// failures are report entries, never exceptions.
AuditReport audit_chain(const LedgerParams& params, const Chain& chain);

// One pairing check per block: the stored control shard must equal
// e(eps_ctl, k1) under the current shards and keys. Missing keys are
// findings, not errors.
AuditReport audit_variable_state(const LedgerParams& params, const Chain& chain,
                                 const VariableState& state);

std::string render_report(const AuditReport& report);

}  // namespace umsp::ledger
