#include <doctest.h>

#include "helpers.hpp"
#include "umsp/protocol/protocol.hpp"

using namespace umsp;
using namespace umsp::protocol;
using namespace umsp::test;

namespace {

SetupResult toy_setup(uint64_t seed, uint64_t block_bytes = 16) {
  auto g = bilinear::make_toy_group(101);
  DeterministicRandom rng(seed);
  return keeper_setup(g, SetupRequest{block_bytes, WarrantyKind::None, 0}, rng);
}

}  // namespace

TEST_CASE("keeper_setup: shard count is the ceiling of |B|/delta") {
  auto g = bilinear::make_toy_group(101);
  DeterministicRandom rng(1);
  // toy delta = 4 bytes
  CHECK(keeper_setup(g, {16, WarrantyKind::None, 0}, rng).params.shard_count == 4);
  CHECK(keeper_setup(g, {17, WarrantyKind::None, 0}, rng).params.shard_count == 5);
  CHECK(keeper_setup(g, {4, WarrantyKind::None, 0}, rng).params.shard_count == 1);
  CHECK_THROWS_AS(keeper_setup(g, {3, WarrantyKind::None, 0}, rng), ValueError);
}

TEST_CASE("keeper_setup: shards are g1^(u_i * s0), exponents replayable") {
  auto setup = toy_setup(77);
  const auto& g = *setup.params.group;
  DrawReplay replay(g, 77);
  std::vector<uint64_t> u;
  for (uint32_t i = 0; i < setup.params.shard_count; ++i) u.push_back(replay.next_u64());
  uint64_t s0 = replay.next_u64();
  CHECK(s0 == to_u64(setup.secret.time_key()));
  for (uint32_t i = 1; i <= setup.params.shard_count; ++i) {
    uint64_t expect = u[i - 1] * s0 % 101;
    CHECK(dlog_g1(g, setup.shards.shard(i)) == expect);
  }
  CHECK(setup.shards.epoch() == 0);
  CHECK(setup.secret.epoch() == 0);
}

TEST_CASE("keeper_issue_token: k0 = q^(1/s)") {
  auto setup = toy_setup(5);
  auto g = setup.params.group;
  DeterministicRandom rng(1000);
  UserKeypair user = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
  CHECK(token.epoch() == 0);

  uint64_t mu = to_u64(user.mu());
  uint64_t s_inv = to_u64(g->scalar_inv(setup.secret.time_key()));
  CHECK(dlog_g2(*g, token.value()) == mu * s_inv % 101);

  // pairing identity: e(g1^s, k0) == e(g1, q), no secrets needed
  auto lhs = g->pair(g->exp(g->g1_base(), setup.secret.time_key()), token.value());
  auto rhs = g->pair(g->g1_base(), user.public_key());
  CHECK(g->eq(lhs, rhs));

  // determinism
  EncryptionToken again = keeper_issue_token(setup.secret, user.public_key());
  CHECK(g->eq(again.value(), token.value()));

  CHECK_THROWS_AS(keeper_issue_token(setup.secret, g->g2_identity()), ValueError);
}

TEST_CASE("token/shard consistency holds on the production backend too") {
  auto g = bilinear::make_production_group();
  DeterministicRandom rng(9);
  auto setup = keeper_setup(g, {576, WarrantyKind::None, 0}, rng);
  UserKeypair user = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
  auto lhs = g->pair(g->exp(g->g1_base(), setup.secret.time_key()), token.value());
  auto rhs = g->pair(g->g1_base(), user.public_key());
  CHECK(g->eq(lhs, rhs));
}

TEST_CASE("shard update: two steps compose to the direct ratio") {
  auto setup = toy_setup(12);
  auto g = setup.params.group;

  Scalar s0 = g->scalar_from_mpz(setup.secret.time_key().value());
  Scalar s1 = g->scalar_from_u64(17);
  Scalar s2 = g->scalar_from_u64(59);

  auto t1 = EpochTransition::with_time_key(setup.secret, s1);
  MaskingShards shards1 = t1.advance(setup.shards);
  KeeperSecret k1 = t1.finish();
  auto t2 = EpochTransition::with_time_key(k1, s2);
  MaskingShards shards2 = t2.advance(shards1);

  // direct jump s0 -> s2
  KeeperSecret fresh0(0, s0);
  auto direct = EpochTransition::with_time_key(fresh0, s2);
  MaskingShards direct2 = direct.advance(setup.shards);

  for (uint32_t i = 1; i <= setup.params.shard_count; ++i)
    CHECK(g->eq(shards2.shard(i), direct2.shard(i)));
  CHECK(shards2.epoch() == 2);
  CHECK(direct2.epoch() == 1);  // epochs count steps; the values still match
}

TEST_CASE("shard update with an unchanged time-key is the identity") {
  auto setup = toy_setup(13);
  auto g = setup.params.group;
  Scalar same = g->scalar_from_mpz(setup.secret.time_key().value());
  auto t = EpochTransition::with_time_key(setup.secret, same);
  MaskingShards next = t.advance(setup.shards);
  for (uint32_t i = 1; i <= setup.params.shard_count; ++i)
    CHECK(g->eq(next.shard(i), setup.shards.shard(i)));
}

TEST_CASE("shard update cross-pairing check, both backends") {
  for (bool production : {false, true}) {
    auto g =
        production ? bilinear::make_production_group() : bilinear::make_toy_group(101);
    DeterministicRandom rng(production ? 21 : 22);
    auto setup = keeper_setup(g, {g->description().gt_bytes * 2ull, WarrantyKind::None, 0}, rng);
    Scalar s_old = g->scalar_from_mpz(setup.secret.time_key().value());
    auto t = EpochTransition(*g, setup.secret, rng);
    MaskingShards next = t.advance(setup.shards);
    KeeperSecret succ = t.finish();
    // pair(eps_new, g2^s_old) == pair(eps_old, g2^s_new)
    auto g2_old = g->exp(g->g2_base(), s_old);
    auto g2_new = g->exp(g->g2_base(), succ.time_key());
    for (uint32_t i = 1; i <= setup.params.shard_count; ++i) {
      CHECK(g->eq(g->pair(next.shard(i), g2_old), g->pair(setup.shards.shard(i), g2_new)));
    }
  }
}

TEST_CASE("encapsulated key update preserves the control pairing") {
  auto setup = toy_setup(31);
  auto g = setup.params.group;
  DeterministicRandom rng(32);
  DeterministicRandom msg_rng(33);
  UserKeypair user = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
  Bytes msg = msg_rng.bytes(10);
  auto enc = user_encrypt(user, token, setup.shards, msg, 1, rng);

  bilinear::GTElement control = g->pair(setup.shards.shard(1), enc.key.value());

  auto t = EpochTransition(*g, setup.secret, rng);
  MaskingShards shards1 = t.advance(setup.shards);
  EncapsulatedKey key1 = t.advance(enc.key);
  CHECK(key1.epoch() == 1);
  CHECK(g->eq(control, g->pair(shards1.shard(1), key1.value())));

  // toy accounting: exponent moves from v*k/s0 to v*k/s1
  KeeperSecret succ = t.finish();
  uint64_t v = to_u64(user.v());
  DrawReplay replay(*g, 32);
  replay.next();  // mu
  replay.next();  // v
  uint64_t k_b = replay.next_u64();
  uint64_t s1_inv = to_u64(g->scalar_inv(succ.time_key()));
  CHECK(dlog_g2(*g, key1.value()) == v * k_b % 101 * s1_inv % 101);
}

TEST_CASE("encapsulated key update then inverted update returns the original") {
  auto setup = toy_setup(41);
  auto g = setup.params.group;
  DeterministicRandom rng(42);
  UserKeypair user = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
  auto enc = user_encrypt(user, token, setup.shards, rng.bytes(6), 1, rng);

  Scalar s0 = g->scalar_from_mpz(setup.secret.time_key().value());
  Scalar s1 = g->scalar_from_u64(23);
  auto up = EpochTransition::with_time_key(setup.secret, s1);
  EncapsulatedKey advanced = up.advance(enc.key);
  KeeperSecret mid = up.finish();
  auto down = EpochTransition::with_time_key(mid, s0);
  EncapsulatedKey back = down.advance(advanced);
  CHECK(g->eq(back.value(), enc.key.value()));

  // epoch mismatch is a state error
  KeeperSecret fresh(0, s0);
  auto stale = EpochTransition::with_time_key(fresh, s1);
  CHECK_THROWS_AS(stale.advance(advanced), StateError);
}

TEST_CASE("keeper rotation hands over the live key and retires the old keeper") {
  auto setup = toy_setup(51);
  auto g = setup.params.group;
  DeterministicRandom rng(52);
  UserKeypair user = user_keygen(g, rng);

  uint64_t s_before = to_u64(setup.secret.time_key());
  std::optional<KeeperSecret> successor;
  keeper_rotate(setup.secret,
                [&](HandoverRecord&& rec) { successor = keeper_adopt(std::move(rec)); });
  REQUIRE(successor.has_value());
  CHECK(successor->epoch() == 0);
  CHECK(to_u64(successor->time_key()) == s_before);

  // the retired keeper refuses everything
  CHECK_FALSE(setup.secret.live());
  CHECK_THROWS_AS(keeper_issue_token(setup.secret, user.public_key()), StateError);
  CHECK_THROWS_AS(keeper_rotate(setup.secret, [](HandoverRecord&&) {}), StateError);

  // successor updates; consistency carries over
  EncryptionToken token = keeper_issue_token(*successor, user.public_key());
  auto enc = user_encrypt(user, token, setup.shards, Bytes{1, 2, 3}, 1, rng);
  bilinear::GTElement control = g->pair(setup.shards.shard(1), enc.key.value());
  auto t = EpochTransition(*g, *successor, rng);
  MaskingShards shards1 = t.advance(setup.shards);
  EncapsulatedKey key1 = t.advance(enc.key);
  CHECK(g->eq(control, g->pair(shards1.shard(1), key1.value())));
}

TEST_CASE("user_keygen publishes q = g2^mu") {
  auto g = bilinear::make_toy_group(101);
  DeterministicRandom rng(61);
  UserKeypair a = user_keygen(g, rng);
  UserKeypair b = user_keygen(g, rng);
  CHECK(dlog_g2(*g, a.public_key()) == to_u64(a.mu()));
  // pair(g1, q) == pair(g1, g2)^mu
  CHECK(g->eq(g->pair(g->g1_base(), a.public_key()), g->exp(g->gt_base(), a.mu())));
  CHECK_FALSE(g->eq(a.public_key(), b.public_key()));
  CHECK(g->eq(g->decode_g2(g->encode(a.public_key())), a.public_key()));
}

TEST_CASE("encrypt/decrypt round-trip at a fractional shard length") {
  for (bool production : {false, true}) {
    auto g =
        production ? bilinear::make_production_group() : bilinear::make_toy_group(101);
    DeterministicRandom rng(production ? 71 : 72);
    uint64_t delta = g->description().gt_bytes;
    auto setup = keeper_setup(g, {4 * delta, WarrantyKind::None, 0}, rng);
    UserKeypair user = user_keygen(g, rng);
    EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
    Bytes msg = rng.bytes(delta * 7 / 2);  // 3.5 shards
    auto enc = user_encrypt(user, token, setup.shards, msg, 1, rng);
    CHECK(enc.payload.entries.size() == 4);
    CHECK(enc.payload.message_length == msg.size());

    UnlockedKey k2 = user_unlock(user, enc.key);
    Bytes out = provider_decrypt(enc.payload.entries, enc.payload.message_length, setup.shards, k2);
    CHECK(out == msg);
  }
}

TEST_CASE("pad exponent is u_i * k_b * mu on the toy backend") {
  auto setup = toy_setup(81, 8);  // two shards
  auto g = setup.params.group;
  DeterministicRandom rng(82);
  UserKeypair user = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());

  Bytes zeros(8, 0);  // two all-zero shards: ciphertext equals the pad
  auto enc = user_encrypt(user, token, setup.shards, zeros, 1, rng);

  DrawReplay setup_replay(*g, 81);
  uint64_t u1 = setup_replay.next_u64();
  uint64_t u2 = setup_replay.next_u64();
  DrawReplay enc_replay(*g, 82);
  enc_replay.next();  // mu
  enc_replay.next();  // v
  uint64_t k_b = enc_replay.next_u64();
  uint64_t mu = to_u64(user.mu());

  for (size_t i = 0; i < 2; ++i) {
    uint64_t u = (i == 0) ? u1 : u2;
    bilinear::GTElement pad = g->decode_gt(enc.payload.entries[i].cipher);
    CHECK(dlog_gt(*g, pad) == u * k_b % 101 * mu % 101);
  }

  // explicit XOR form: c_1 = pad(pair(eps_1, k0^k_b))
  bilinear::GTElement expected_pad =
      g->pair(setup.shards.shard(1), g->exp(token.value(), g->scalar_from_u64(k_b)));
  CHECK(enc.payload.entries[0].cipher == g->gt_to_pad(expected_pad));
}

TEST_CASE("user_encrypt rejects oversized and empty messages and stale tokens") {
  auto setup = toy_setup(91, 8);
  auto g = setup.params.group;
  DeterministicRandom rng(92);
  UserKeypair user = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
  CHECK_THROWS_AS(user_encrypt(user, token, setup.shards, Bytes(9, 1), 1, rng), ValueError);
  CHECK_THROWS_AS(user_encrypt(user, token, setup.shards, Bytes{}, 1, rng), ValueError);

  // advance the shards; the old token is now stale
  auto t = EpochTransition(*g, setup.secret, rng);
  MaskingShards shards1 = t.advance(setup.shards);
  CHECK_THROWS_AS(user_encrypt(user, token, shards1, Bytes(4, 1), 1, rng), StateError);
}

TEST_CASE("unlock moves the exponent from v*k/s to mu*k/s") {
  auto setup = toy_setup(101);
  auto g = setup.params.group;
  DeterministicRandom rng(102);
  DeterministicRandom msg_rng(103);
  UserKeypair user = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
  auto enc = user_encrypt(user, token, setup.shards, msg_rng.bytes(5), 1, rng);

  UnlockedKey k2 = user_unlock(user, enc.key);
  UnlockedKey again = user_unlock(user, enc.key);
  CHECK(g->eq(k2.value(), again.value()));

  DrawReplay replay(*g, 102);
  uint64_t mu = replay.next_u64();
  replay.next();  // v
  uint64_t k_b = replay.next_u64();
  uint64_t s_inv = to_u64(g->scalar_inv(setup.secret.time_key()));
  CHECK(dlog_g2(*g, k2.value()) == mu * k_b % 101 * s_inv % 101);

  // unlock algebra: k2 == k1^(mu/v), checked directly
  Scalar ratio = g->scalar_mul(user.mu(), g->scalar_inv(user.v()));
  CHECK(g->eq(k2.value(), g->exp(enc.key.value(), ratio)));
}

TEST_CASE("decrypting with the wrong user's unlock fails every digest") {
  auto setup = toy_setup(111);
  auto g = setup.params.group;
  DeterministicRandom rng(112);
  UserKeypair owner = user_keygen(g, rng);
  UserKeypair thief = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, owner.public_key());
  Bytes msg = rng.bytes(12);
  auto enc = user_encrypt(owner, token, setup.shards, msg, 1, rng);

  UnlockedKey wrong = user_unlock(thief, enc.key);
  CHECK_THROWS_AS(
      provider_decrypt(enc.payload.entries, enc.payload.message_length, setup.shards, wrong),
      IntegrityError);
}

TEST_CASE("a flipped ciphertext bit is pinned to its shard") {
  auto setup = toy_setup(121);
  auto g = setup.params.group;
  DeterministicRandom rng(122);
  UserKeypair user = user_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
  Bytes msg = rng.bytes(16);  // 4 shards exactly
  auto enc = user_encrypt(user, token, setup.shards, msg, 1, rng);
  enc.payload.entries[2].cipher[1] ^= 0x10;  // damage shard 3

  UnlockedKey k2 = user_unlock(user, enc.key);
  try {
    provider_decrypt(enc.payload.entries, enc.payload.message_length, setup.shards, k2);
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    CHECK(e.failed_shards() == std::vector<size_t>{3});
  }
}

TEST_CASE("grants: seal/open round-trip, fresh ephemerals, wrong key detected") {
  auto setup = toy_setup(131);
  auto g = setup.params.group;
  DeterministicRandom rng(132);
  UserKeypair user = user_keygen(g, rng);
  ProviderKeypair provider = provider_keygen(g, rng);
  ProviderKeypair other = provider_keygen(g, rng);
  EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
  Bytes msg = rng.bytes(9);
  auto enc = user_encrypt(user, token, setup.shards, msg, 1, rng);
  UnlockedKey k2 = user_unlock(user, enc.key);

  SealedGrant grant = user_seal_grant(k2, provider.public_key(), rng);
  UnlockedKey opened = provider_open_grant(grant, provider);
  CHECK(g->eq(opened.value(), k2.value()));
  CHECK(opened.block() == k2.block());
  CHECK(opened.epoch() == k2.epoch());

  SealedGrant grant2 = user_seal_grant(k2, provider.public_key(), rng);
  CHECK_FALSE(g->eq(grant.ephemeral(), grant2.ephemeral()));
  CHECK_FALSE(g->eq(grant.masked_key(), grant2.masked_key()));

  // wrong provider secret: opens to a wrong key, caught by digests
  UnlockedKey wrong = provider_open_grant(grant, other);
  CHECK_FALSE(g->eq(wrong.value(), k2.value()));
  CHECK_THROWS_AS(
      provider_decrypt(enc.payload.entries, enc.payload.message_length, setup.shards, wrong),
      IntegrityError);

  // full round-trip through the provider
  Bytes out =
      provider_decrypt(enc.payload.entries, enc.payload.message_length, setup.shards, opened);
  CHECK(out == msg);
}

TEST_CASE("property: round-trip across randomized message lengths") {
  auto setup = toy_setup(141);
  auto g = setup.params.group;
  DeterministicRandom rng(142);
  uint64_t max_len = setup.params.shard_count * setup.params.shard_width;
  for (int trial = 0; trial < 200; ++trial) {
    size_t len = 1 + rng.bytes(2)[0] % max_len;
    Bytes msg = rng.bytes(len);
    UserKeypair user = user_keygen(g, rng);
    EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
    auto enc = user_encrypt(user, token, setup.shards, msg, 1, rng);
    UnlockedKey k2 = user_unlock(user, enc.key);
    Bytes out =
        provider_decrypt(enc.payload.entries, enc.payload.message_length, setup.shards, k2);
    REQUIRE(out == msg);
  }
}

TEST_CASE("property: toy revocation whenever the time-key changes, re-grant always") {
  auto g = bilinear::make_toy_group(101);
  DeterministicRandom rng(151);
  int revoked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto setup = keeper_setup(g, {8, WarrantyKind::None, 0}, rng);
    UserKeypair user = user_keygen(g, rng);
    EncryptionToken token = keeper_issue_token(setup.secret, user.public_key());
    Bytes msg = rng.bytes(7);
    auto enc = user_encrypt(user, token, setup.shards, msg, 1, rng);
    UnlockedKey stale = user_unlock(user, enc.key);

    uint64_t s_old = to_u64(setup.secret.time_key());
    auto t = EpochTransition(*g, setup.secret, rng);
    MaskingShards shards1 = t.advance(setup.shards);
    EncapsulatedKey key1 = t.advance(enc.key);
    KeeperSecret succ = t.finish();

    if (to_u64(succ.time_key()) != s_old) {
      ++revoked;
      CHECK_THROWS_AS(
          provider_decrypt(enc.payload.entries, enc.payload.message_length, shards1, stale),
          IntegrityError);
    }
    // re-grant: unlocking the updated key always works
    UnlockedKey fresh = user_unlock(user, key1);
    Bytes out = provider_decrypt(enc.payload.entries, enc.payload.message_length, shards1, fresh);
    REQUIRE(out == msg);
  }
  CHECK(revoked > 90);  // collisions of s are ~1% at p=101
}
