#pragma once

#include <filesystem>

#include "umsp/codec/store.hpp"
#include "umsp/ledger/ledger.hpp"

namespace umsp::test {

// The fixed-seed toy scenario behind the committed reference files:
// init (|B|=16, sig warranty), one user, three publishes of growing
// length, one epoch update. Any change to an encoding, a draw order or
// the scenario itself shows up as a byte difference.
inline void run_golden_scenario(const std::filesystem::path& dir) {
  using namespace umsp::ledger;
  using namespace umsp::protocol;

  DeterministicRandom rng(0xd1ce);
  auto g = bilinear::make_toy_group(101);
  auto setup = keeper_setup(g, {16, WarrantyKind::UserSignature, 0}, rng);
  LedgerParams params = setup.params;
  Chain chain(ChainVariant::Full);
  VariableState state{std::move(setup.shards)};
  KeeperSecret keeper = std::move(setup.secret);
  UserKeypair user = user_keygen(g, rng);
  SigningKey signer = SigningKey::generate(rng);

  codec::LedgerStore store(dir);
  store.create(params, chain, state, keeper);
  store.save_public("alice",
                    codec::encode_user_public({user.public_key(), signer.public_key()}));
  store.save_secret("alice",
                    codec::encode_user_secret({user.mu(), user.v(), signer.seed()}, params));

  for (int i = 0; i < 3; ++i) {
    EncryptionToken token = keeper_issue_token(keeper, user.public_key());
    auto enc =
        user_encrypt(user, token, state.shards(), rng.bytes(6 + 3ul * i), chain.size() + 1, rng);
    auto result = append_block(params, chain, state,
                               AppendRequest{std::move(enc.payload), std::move(enc.key),
                                             WarrantyRequest{&signer}, "alice", ""});
    state = std::move(result.state);
    store.append_block(chain.block(chain.size()));
    store.save_state(state);
  }
  auto advanced = update_epoch(params, state, keeper, rng);
  store.save_state(advanced.first);
  store.save_keeper_secret(advanced.second, params);
}

inline const char* const kGoldenFiles[] = {"params", "chain", "state", "keys/alice.pub",
                                           "secrets/alice", "secrets/keeper"};

}  // namespace umsp::test
