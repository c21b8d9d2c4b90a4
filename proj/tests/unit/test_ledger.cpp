#include <doctest.h>

#include "helpers.hpp"
#include "umsp/ledger/ledger.hpp"

using namespace umsp;
using namespace umsp::ledger;
using namespace umsp::protocol;
using namespace umsp::test;

namespace {

// a small working ledger on the toy backend
struct Scenario {
  LedgerParams params;
  std::optional<KeeperSecret> keeper;
  std::optional<VariableState> state;
  std::optional<Chain> chain;
  std::optional<UserKeypair> user;
  std::optional<SigningKey> signer;
  DeterministicRandom rng;
  std::vector<Bytes> messages;

  explicit Scenario(uint64_t seed, ChainVariant variant = ChainVariant::Full,
                    WarrantyKind warranty = WarrantyKind::UserSignature, uint32_t pow_bits = 0,
                    uint64_t block_bytes = 16)
      : rng(seed) {
    auto g = bilinear::make_toy_group(101);
    auto setup = keeper_setup(g, {block_bytes, warranty, pow_bits}, rng);
    params = setup.params;
    keeper.emplace(std::move(setup.secret));
    state.emplace(VariableState(std::move(setup.shards)));
    chain.emplace(variant);
    user.emplace(user_keygen(g, rng));
    signer.emplace(SigningKey::generate(rng));
  }

  uint64_t publish(size_t len) {
    Bytes msg = rng.bytes(len);
    messages.push_back(msg);
    EncryptionToken token = keeper_issue_token(*keeper, user->public_key());
    uint64_t next = chain->size() + 1;
    auto enc = user_encrypt(*user, token, state->shards(), msg, next, rng);
    AppendRequest req{std::move(enc.payload), std::move(enc.key), WarrantyRequest{&*signer},
                      "alice", "payload://" + std::to_string(next)};
    auto result = append_block(params, *chain, *state, std::move(req));
    state.emplace(std::move(result.state));
    return result.block_index;
  }

  void update() {
    auto [next_state, next_keeper] = update_epoch(params, *state, *keeper, rng);
    state.emplace(std::move(next_state));
    keeper.emplace(std::move(next_keeper));
  }
};

}  // namespace

TEST_CASE("append: genesis link, wrap-around control index, immediate auditability") {
  Scenario s(201);
  CHECK(s.params.shard_count == 4);
  for (int i = 0; i < 5; ++i) s.publish(5);

  const auto& first = std::get<DataBlock>(s.chain->block(1));
  CHECK(first.prev_hash == kGenesisHash);

  // block 5 wraps back to shard 1 (I = 4)
  CHECK(control_index(5, 4) == 1);
  CHECK(control_index(4, 4) == 4);
  const auto& b5 = std::get<DataBlock>(s.chain->block(5));
  auto g = s.params.group;
  Bytes expect =
      g->encode(g->pair(s.state->shards().shard(1), s.state->key_for_block(5)->value()));
  CHECK(b5.control_shard == expect);

  CHECK(audit_chain(s.params, *s.chain).passed());
  CHECK(audit_variable_state(s.params, *s.chain, *s.state).passed());
}

TEST_CASE("append: epoch and index mismatches are rejected") {
  Scenario s(202);
  s.publish(4);
  EncryptionToken token = keeper_issue_token(*s.keeper, s.user->public_key());
  auto enc = user_encrypt(*s.user, token, s.state->shards(), Bytes(4, 7), 2, s.rng);
  auto enc_wrong = user_encrypt(*s.user, token, s.state->shards(), Bytes(4, 7), 9, s.rng);

  // wrong block label
  AppendRequest bad{std::move(enc_wrong.payload), std::move(enc_wrong.key),
                    WarrantyRequest{&*s.signer}, std::nullopt, ""};
  CHECK_THROWS_AS(append_block(s.params, *s.chain, *s.state, std::move(bad)), StateError);

  // stale payload epoch after an update
  s.update();
  AppendRequest stale{std::move(enc.payload), std::move(enc.key), WarrantyRequest{&*s.signer},
                      std::nullopt, ""};
  CHECK_THROWS_AS(append_block(s.params, *s.chain, *s.state, std::move(stale)), StateError);
}

TEST_CASE("update_epoch: epoch advances by one and consistency survives") {
  Scenario s(203);
  for (int i = 0; i < 3; ++i) s.publish(9);
  CHECK(s.state->epoch() == 0);
  s.update();
  CHECK(s.state->epoch() == 1);
  CHECK(s.keeper->epoch() == 1);
  CHECK(audit_variable_state(s.params, *s.chain, *s.state).passed());

  for (int i = 0; i < 4; ++i) s.update();
  CHECK(s.state->epoch() == 5);
  CHECK(audit_variable_state(s.params, *s.chain, *s.state).passed());

  // re-grant after five updates still decrypts
  const auto& b2 = std::get<DataBlock>(s.chain->block(2));
  UnlockedKey fresh = user_unlock(*s.user, *s.state->key_for_block(2));
  Bytes out = provider_decrypt(b2.entries, b2.message_length, s.state->shards(), fresh);
  CHECK(out == s.messages[1]);
}

TEST_CASE("revocation through the ledger: stale unlock fails after update") {
  Scenario s(204);
  s.publish(10);
  UnlockedKey stale = user_unlock(*s.user, *s.state->key_for_block(1));
  uint64_t s_old = to_u64(s.keeper->time_key());
  s.update();
  const auto& b1 = std::get<DataBlock>(s.chain->block(1));
  if (to_u64(s.keeper->time_key()) != s_old) {
    CHECK_THROWS_AS(provider_decrypt(b1.entries, b1.message_length, s.state->shards(), stale),
                    IntegrityError);
  }
}

TEST_CASE("audit_chain: flipped ciphertext byte names the block and stage") {
  Scenario s(205);
  for (int i = 0; i < 5; ++i) s.publish(8);

  std::vector<Block> blocks = s.chain->blocks();
  std::get<DataBlock>(blocks[2]).entries[1].cipher[0] ^= 0x01;  // c_{3,2}
  Chain tampered = Chain::from_blocks(ChainVariant::Full, std::move(blocks));

  AuditReport report = audit_chain(s.params, tampered);
  REQUIRE_FALSE(report.passed());
  CHECK(report.findings.front().block == 3);
  CHECK(report.findings.front().stage == "block-digest");
}

TEST_CASE("audit_chain: reordering blocks is a link failure at the swap point") {
  Scenario s(206);
  for (int i = 0; i < 4; ++i) s.publish(6);
  std::vector<Block> blocks = s.chain->blocks();
  std::swap(blocks[1], blocks[2]);
  Chain reordered = Chain::from_blocks(ChainVariant::Full, std::move(blocks));

  AuditReport report = audit_chain(s.params, reordered);
  REQUIRE_FALSE(report.passed());
  CHECK(report.findings.front().block == 2);
  // position 2 holds block 3: both the index and the back-link trip
  bool saw_link = false;
  for (const auto& f : report.findings)
    if (f.stage == "back-link" && f.block == 2) saw_link = true;
  CHECK(saw_link);
}

TEST_CASE("audit_variable_state: tampering pins the predicted failing block set") {
  Scenario s(207);
  for (int i = 0; i < 8; ++i) s.publish(12);  // I = 4, control indices wrap twice
  s.update();

  auto g = s.params.group;
  SUBCASE("one tampered encapsulated key fails exactly its block") {
    std::map<uint64_t, EncapsulatedKey> keys = s.state->keys();
    const EncapsulatedKey k5 = keys.at(5);
    keys.erase(5);
    keys.emplace(5, EncapsulatedKey(5, k5.epoch(), g->exp(k5.value(), g->scalar_from_u64(3))));
    VariableState tampered(s.state->shards(), std::move(keys));
    AuditReport report = audit_variable_state(s.params, *s.chain, tampered);
    REQUIRE(report.findings.size() == 1);
    CHECK(report.findings[0].block == 5);
    CHECK(report.findings[0].stage == "control-shard");
  }

  SUBCASE("one tampered masking shard fails every block with its control index") {
    std::vector<bilinear::G1Element> shards;
    for (size_t i = 1; i <= 4; ++i) shards.push_back(s.state->shards().shard(i));
    shards[1] = g->exp(shards[1], g->scalar_from_u64(7));  // shard 2
    VariableState tampered(MaskingShards(s.state->epoch(), std::move(shards)), s.state->keys());
    AuditReport report = audit_variable_state(s.params, *s.chain, tampered);
    // blocks 2 and 6 use control index 2
    REQUIRE(report.findings.size() == 2);
    CHECK(report.findings[0].block == 2);
    CHECK(report.findings[1].block == 6);
  }

  SUBCASE("missing encapsulated key is reported") {
    std::map<uint64_t, EncapsulatedKey> keys = s.state->keys();
    keys.erase(3);
    VariableState tampered(s.state->shards(), std::move(keys));
    AuditReport report = audit_variable_state(s.params, *s.chain, tampered);
    REQUIRE(report.findings.size() == 1);
    CHECK(report.findings[0].block == 3);
    CHECK(report.findings[0].actual == "missing");
  }
}

TEST_CASE("control shards stay constant across five updates, both variants") {
  for (ChainVariant variant : {ChainVariant::Full, ChainVariant::Shrunk}) {
    Scenario s(variant == ChainVariant::Full ? 208 : 209, variant);
    for (int i = 0; i < 4; ++i) s.publish(10);
    for (int round = 0; round < 5; ++round) {
      s.update();
      CHECK(audit_variable_state(s.params, *s.chain, *s.state).passed());
      CHECK(audit_chain(s.params, *s.chain).passed());
    }
  }
}

TEST_CASE("append-only: earlier blocks are byte-stable under later appends") {
  Scenario s(210);
  s.publish(4);
  s.publish(4);
  Bytes before = encode_block_body(s.chain->block(1));
  s.publish(4);
  s.publish(4);
  CHECK(encode_block_body(s.chain->block(1)) == before);
  CHECK(audit_chain(s.params, *s.chain).passed());
}

TEST_CASE("shrunk and full chains agree on the payload digest") {
  Scenario full(211, ChainVariant::Full);
  Scenario shrunk(211, ChainVariant::Shrunk);  // same seed, same draws
  full.publish(13);
  shrunk.publish(13);
  const auto& fb = std::get<DataBlock>(full.chain->block(1));
  const auto& sb = std::get<ShrunkBlock>(shrunk.chain->block(1));
  CHECK(payload_digest(fb.entries) == sb.payload_digest);
  CHECK(sb.payload_locator == "payload://1");
}

TEST_CASE("proof of work: difficulty 0 is free, difficulty 8 takes a search") {
  Digest32 d = sha256(Bytes{1, 2, 3});
  CHECK(mine_pow(d, 0) == 0);
  CHECK(verify_pow(d, 0, 0));

  uint64_t nonce = mine_pow(d, 8);
  CHECK(verify_pow(d, nonce, 8));
  CHECK_FALSE(verify_pow(d, nonce + 1, 8));  // overwhelmingly likely

  CHECK_THROWS_AS(mine_pow(d, 33), ValueError);
  CHECK_THROWS_AS(verify_pow(d, 0, 200), ValueError);
}

TEST_CASE("pow-warranted chain audits clean and fails a harder target") {
  Scenario s(212, ChainVariant::Full, WarrantyKind::ProofOfWork, 8);
  s.publish(5);
  CHECK(audit_chain(s.params, *s.chain).passed());
  LedgerParams harder = s.params;
  harder.pow_difficulty = 24;
  CHECK_FALSE(audit_chain(harder, *s.chain).passed());
}

TEST_CASE("signature warranties bind the block digest") {
  DeterministicRandom rng(213);
  SigningKey key = SigningKey::generate(rng);
  Digest32 d = sha256(Bytes{9, 9, 9});
  Warranty w = make_signature_warranty(WarrantyKind::UserSignature, key, d);
  CHECK(warranty_verify(w, d, 0));

  Digest32 flipped = d;
  flipped[0] ^= 0x80;
  CHECK_FALSE(warranty_verify(w, flipped, 0));

  Warranty broken = w;
  broken.payload[40] ^= 1;  // inside the signature
  CHECK_FALSE(warranty_verify(broken, d, 0));

  Warranty none;
  CHECK(warranty_verify(none, d, 0));
  none.payload.push_back(0);
  CHECK_FALSE(warranty_verify(none, d, 0));
}

TEST_CASE("signing keys are deterministic in the seed") {
  Bytes seed(32, 0xab);
  SigningKey a{BytesView(seed)};
  SigningKey b{BytesView(seed)};
  CHECK(a.public_key() == b.public_key());
  Digest32 d = sha256(Bytes{1});
  BytesView msg(d.data(), d.size());
  CHECK(a.sign(msg) == b.sign(msg));
  CHECK(signature_verify(a.public_key(), msg, a.sign(msg)));
}
