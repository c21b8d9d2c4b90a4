// Scenario driver for the masking-shards ledger: one process plays the
// keeper, users and providers against an on-disk ledger directory.
//
// Exit codes: 0 ok, 2 bad usage/parameters, 3 state errors (missing
// ledger or identity, stale epochs, retired keeper), 4 corrupt ledger
// files, 5 decryption digest mismatch (stale or tampered key material),
// 6 audit found problems.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "umsp/bilinear/toy.hpp"
#include "umsp/codec/store.hpp"
#include "umsp/ledger/ledger.hpp"

using namespace umsp;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitState = 3;
constexpr int kExitCorrupt = 4;
constexpr int kExitIntegrity = 5;
constexpr int kExitAuditFailed = 6;

constexpr const char* kThirdPartyName = "_warranty";

struct CommonOpts {
  std::string ledger_dir;
  std::optional<std::string> seed_hex;
  bool json = false;
};

// Deterministic seeds are a test-mode feature and stay toy-only; the
// production curve always uses system randomness.
std::unique_ptr<RandomSource> make_rng(const CommonOpts& opts, bilinear::BackendId backend) {
  if (opts.seed_hex) {
    if (backend != bilinear::BackendId::ToyInteger)
      throw ValueError("--seed is only permitted with the toy backend");
    return std::make_unique<DeterministicRandom>(from_hex(*opts.seed_hex));
  }
  return std::make_unique<SystemRandom>();
}

Bytes read_input_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValueError("cannot read input file: " + path);
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_output_file(const std::string& path, BytesView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValueError("cannot write output file: " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<long>(data.size()));
  if (!out.good()) throw ValueError("short write to output file: " + path);
}

struct UserIdentity {
  protocol::UserKeypair keypair;
  ledger::SigningKey signing;
};

UserIdentity load_user(const codec::LedgerStore& store, const LedgerParams& params,
                       const std::string& name) {
  if (!store.has_secret(name))
    throw StateError("no such user identity: " + name + " (run keygen first)");
  codec::UserSecretRecord sec = codec::decode_user_secret(store.load_secret(name), params);
  auto q = params.group->exp(params.group->g2_base(), sec.mu);
  return UserIdentity{protocol::UserKeypair(sec.mu, sec.v, q),
                      ledger::SigningKey(sec.signing_seed)};
}

protocol::ProviderKeypair load_provider(const codec::LedgerStore& store,
                                        const LedgerParams& params, const std::string& name) {
  if (!store.has_secret(name))
    throw StateError("no such provider identity: " + name + " (run keygen first)");
  codec::ProviderSecretRecord sec = codec::decode_provider_secret(store.load_secret(name), params);
  return protocol::ProviderKeypair(sec.d, params.group->exp(params.group->g2_base(), sec.d));
}

int cmd_init(const CommonOpts& opts, const std::string& backend_name, uint64_t block_bytes,
             const std::string& warranty_name, uint32_t pow_difficulty) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  if (store.exists()) throw StateError("directory already contains a ledger: " + opts.ledger_dir);

  auto backend = bilinear::backend_from_name(backend_name);
  auto group = backend == bilinear::BackendId::ToyInteger
                   ? bilinear::make_toy_group(bilinear::kToyDefaultOrder)
                   : bilinear::make_production_group();
  auto rng = make_rng(opts, backend);

  protocol::SetupRequest request{block_bytes, warranty_kind_from_name(warranty_name),
                                 pow_difficulty};
  auto setup = protocol::keeper_setup(group, request, *rng);
  ledger::Chain chain(ledger::ChainVariant::Full);
  ledger::VariableState state{std::move(setup.shards)};
  store.create(setup.params, chain, state, setup.secret);

  if (setup.params.warranty == WarrantyKind::ThirdPartySignature) {
    ledger::SigningKey signer = ledger::SigningKey::generate(*rng);
    store.save_public(kThirdPartyName, codec::encode_signer_public({signer.public_key()}));
    store.save_secret(kThirdPartyName, codec::encode_signer_secret({signer.seed()}));
  }

  const auto& desc = group->description();
  if (opts.json) {
    json out{{"backend", backend_name},
             {"order_bits", mpz_sizeinbase(desc.order.get_mpz_t(), 2)},
             {"shard_count", setup.params.shard_count},
             {"shard_width", setup.params.shard_width},
             {"warranty", warranty_name},
             {"pow_difficulty", pow_difficulty}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "initialized ledger in " << opts.ledger_dir << "\n"
              << "  backend:      " << backend_name << " (order "
              << mpz_sizeinbase(desc.order.get_mpz_t(), 2) << " bits)\n"
              << "  shards/block: " << setup.params.shard_count << " x "
              << setup.params.shard_width << " bytes\n"
              << "  warranty:     " << warranty_name;
    if (setup.params.warranty == WarrantyKind::ProofOfWork)
      std::cout << " (difficulty " << pow_difficulty << ")";
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_keygen(const CommonOpts& opts, const std::string& role, const std::string& name) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  LedgerParams params = store.load_params();
  if (store.has_secret(name) || store.has_public(name))
    throw StateError("identity already exists: " + name);
  auto rng = make_rng(opts, params.group->description().backend);

  if (role == "user") {
    protocol::UserKeypair keypair = protocol::user_keygen(params.group, *rng);
    ledger::SigningKey signing = ledger::SigningKey::generate(*rng);
    store.save_public(name,
                      codec::encode_user_public({keypair.public_key(), signing.public_key()}));
    store.save_secret(
        name, codec::encode_user_secret({keypair.mu(), keypair.v(), signing.seed()}, params));
  } else if (role == "provider") {
    protocol::ProviderKeypair keypair = protocol::provider_keygen(params.group, *rng);
    store.save_public(name, codec::encode_provider_public({keypair.public_key()}));
    store.save_secret(name, codec::encode_provider_secret({keypair.secret()}, params));
  } else {
    throw ValueError("role must be user or provider");
  }
  std::cout << "created " << role << " identity '" << name << "'\n";
  return kExitOk;
}

int cmd_publish(const CommonOpts& opts, const std::string& user_name, const std::string& path) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  LedgerParams params = store.load_params();
  ledger::Chain chain = store.load_chain(params);
  ledger::VariableState state = store.load_state(params);
  protocol::KeeperSecret keeper = store.load_keeper_secret(params);
  UserIdentity user = load_user(store, params, user_name);
  auto rng = make_rng(opts, params.group->description().backend);

  Bytes message = read_input_file(path);
  uint64_t capacity = uint64_t{params.shard_count} * params.shard_width;
  if (message.size() > capacity)
    throw ValueError("file is " + std::to_string(message.size()) +
                     " bytes but one block holds at most " + std::to_string(capacity) +
                     "; split the file");

  protocol::EncryptionToken token =
      protocol::keeper_issue_token(keeper, user.keypair.public_key());
  auto enc = protocol::user_encrypt(user.keypair, token, state.shards(), message,
                                    chain.size() + 1, *rng);

  ledger::WarrantyRequest warranty;
  std::optional<ledger::SigningKey> third_party;
  if (params.warranty == WarrantyKind::UserSignature) {
    warranty.signer = &user.signing;
  } else if (params.warranty == WarrantyKind::ThirdPartySignature) {
    codec::SignerSecretRecord rec =
        codec::decode_signer_secret(store.load_secret(kThirdPartyName));
    third_party.emplace(BytesView(rec.signing_seed));
    warranty.signer = &*third_party;
  }

  auto result = ledger::append_block(
      params, chain, state,
      ledger::AppendRequest{std::move(enc.payload), std::move(enc.key), warranty, user_name, ""});
  store.append_block(chain.block(result.block_index));
  store.save_state(result.state);

  std::cout << "published block " << result.block_index << " (" << message.size()
            << " bytes, epoch " << result.state.epoch() << ")\n";
  return kExitOk;
}

int cmd_update(const CommonOpts& opts) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  LedgerParams params = store.load_params();
  ledger::VariableState state = store.load_state(params);
  protocol::KeeperSecret keeper = store.load_keeper_secret(params);
  auto rng = make_rng(opts, params.group->description().backend);

  auto [next_state, next_keeper] = ledger::update_epoch(params, state, keeper, *rng);
  store.save_state(next_state);
  store.save_keeper_secret(next_keeper, params);
  std::cout << "updated to epoch " << next_state.epoch()
            << "; every outstanding unlocked key is now revoked\n";
  return kExitOk;
}

int cmd_grant(const CommonOpts& opts, const std::string& user_name, uint64_t block,
              const std::string& provider_name, const std::string& out_path) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  LedgerParams params = store.load_params();
  ledger::VariableState state = store.load_state(params);
  UserIdentity user = load_user(store, params, user_name);
  if (!store.has_public(provider_name))
    throw StateError("no such provider identity: " + provider_name);
  codec::ProviderPublicRecord provider =
      codec::decode_provider_public(store.load_public(provider_name), params);
  auto rng = make_rng(opts, params.group->description().backend);

  const protocol::EncapsulatedKey* key = state.key_for_block(block);
  if (!key) throw StateError("no encapsulated key for block " + std::to_string(block));

  protocol::UnlockedKey unlocked = protocol::user_unlock(user.keypair, *key);
  protocol::SealedGrant grant = protocol::user_seal_grant(unlocked, provider.d, *rng);
  write_output_file(out_path, codec::encode_grant(grant));
  std::cout << "sealed grant for block " << block << " at epoch " << grant.epoch() << " to '"
            << provider_name << "' -> " << out_path << "\n";
  return kExitOk;
}

int cmd_decrypt(const CommonOpts& opts, const std::string& provider_name, uint64_t block,
                const std::string& grant_path, const std::string& out_path) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  LedgerParams params = store.load_params();
  ledger::Chain chain = store.load_chain(params);
  ledger::VariableState state = store.load_state(params);
  protocol::ProviderKeypair provider = load_provider(store, params, provider_name);

  protocol::SealedGrant grant = codec::decode_grant(read_input_file(grant_path), params);
  if (grant.block() != block)
    throw ValueError("grant is for block " + std::to_string(grant.block()) + ", not " +
                     std::to_string(block));
  if (block < 1 || block > chain.size())
    throw StateError("block " + std::to_string(block) + " does not exist");
  const auto* data = std::get_if<ledger::DataBlock>(&chain.block(block));
  if (!data) throw StateError("block " + std::to_string(block) + " has no on-ledger payload");

  if (grant.epoch() != state.epoch())
    std::cerr << "warning: grant was unlocked at epoch " << grant.epoch()
              << " but the ledger is at epoch " << state.epoch()
              << "; expect digest failures if an update has revoked it\n";

  protocol::UnlockedKey key = protocol::provider_open_grant(grant, provider);
  Bytes message =
      protocol::provider_decrypt(data->entries, data->message_length, state.shards(), key);
  write_output_file(out_path, message);
  std::cout << "decrypted block " << block << " (" << message.size() << " bytes) -> " << out_path
            << "\n";
  return kExitOk;
}

json report_to_json(const ledger::AuditReport& report) {
  json findings = json::array();
  for (const auto& f : report.findings)
    findings.push_back(
        {{"block", f.block}, {"stage", f.stage}, {"expected", f.expected}, {"actual", f.actual}});
  return {{"passed", report.passed()}, {"checks", report.checks_run}, {"findings", findings}};
}

int cmd_audit(const CommonOpts& opts) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  LedgerParams params = store.load_params();
  ledger::Chain chain = store.load_chain(params);
  ledger::VariableState state = store.load_state(params);

  ledger::AuditReport chain_report = ledger::audit_chain(params, chain);
  ledger::AuditReport state_report = ledger::audit_variable_state(params, chain, state);

  if (opts.json) {
    json out{{"chain", report_to_json(chain_report)},
             {"variable_state", report_to_json(state_report)}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "static chain:   " << ledger::render_report(chain_report);
    std::cout << "variable state: " << ledger::render_report(state_report);
  }
  return (chain_report.passed() && state_report.passed()) ? kExitOk : kExitAuditFailed;
}

int cmd_rotate_keeper(const CommonOpts& opts) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  LedgerParams params = store.load_params();
  protocol::KeeperSecret keeper = store.load_keeper_secret(params);
  uint64_t epoch = keeper.epoch();

  // the secrets file is the confidential handover channel here: the
  // successor's copy replaces the retiring keeper's atomically
  protocol::keeper_rotate(keeper, [&](protocol::HandoverRecord&& rec) {
    protocol::KeeperSecret successor = protocol::keeper_adopt(std::move(rec));
    store.save_keeper_secret(successor, params);
  });
  std::cout << "keeper rotated at epoch " << epoch
            << "; previous keeper's copy of the time-key is erased\n";
  return kExitOk;
}

int cmd_export_secret(const CommonOpts& opts, const std::string& name) {
  codec::DirectoryLock lock(opts.ledger_dir);
  codec::LedgerStore store(opts.ledger_dir);
  LedgerParams params = store.load_params();
  const auto& group = params.group;

  if (name == "keeper") {
    protocol::KeeperSecret keeper = store.load_keeper_secret(params);
    std::cout << "epoch=" << keeper.epoch() << "\n"
              << "time_key=" << to_hex(group->scalar_to_bytes(keeper.time_key())) << "\n";
    return kExitOk;
  }
  if (!store.has_secret(name)) throw StateError("no such identity: " + name);
  Bytes raw = store.load_secret(name);
  if (raw.size() < 5) throw DecodeError(DecodeError::Kind::Truncated, raw.size(), "short record");
  codec::FileType type = static_cast<codec::FileType>(raw[4]);
  if (type == codec::FileType::UserSecret) {
    codec::UserSecretRecord rec = codec::decode_user_secret(raw, params);
    std::cout << "mu=" << to_hex(group->scalar_to_bytes(rec.mu)) << "\n"
              << "v=" << to_hex(group->scalar_to_bytes(rec.v)) << "\n"
              << "signing_seed=" << to_hex(rec.signing_seed) << "\n";
  } else if (type == codec::FileType::ProviderSecret) {
    codec::ProviderSecretRecord rec = codec::decode_provider_secret(raw, params);
    std::cout << "d=" << to_hex(group->scalar_to_bytes(rec.d)) << "\n";
  } else if (type == codec::FileType::SignerSecret) {
    codec::SignerSecretRecord rec = codec::decode_signer_secret(raw);
    std::cout << "signing_seed=" << to_hex(rec.signing_seed) << "\n";
  } else {
    throw ValueError("unrecognized secret record for " + name);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pad-encrypted public ledger with updating masking shards"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string backend = "production";
  uint64_t block_bytes = 0;
  std::string warranty = "sig";
  uint32_t pow_difficulty = 8;
  std::string role, name, user_name, provider_name, in_path, out_path, grant_path;
  uint64_t block = 0;

  auto add_common = [&](CLI::App* cmd, bool with_seed = true) {
    cmd->add_option("--ledger", opts.ledger_dir, "ledger directory")->required();
    cmd->add_flag("--json", opts.json, "machine-readable output");
    if (with_seed)
      cmd->add_option("--seed", opts.seed_hex,
                      "deterministic randomness seed, hex (toy backend only)");
  };

  CLI::App* init = app.add_subcommand("init", "set up a new ledger");
  add_common(init);
  init->add_option("--backend", backend, "production or toy")
      ->check(CLI::IsMember({"production", "toy"}));
  init->add_option("--block-bytes", block_bytes, "data block length |B| in bytes")->required();
  init->add_option("--warranty", warranty, "block warranty kind")
      ->check(CLI::IsMember({"sig", "pow", "third-party", "none"}));
  init->add_option("--pow-difficulty", pow_difficulty, "leading zero bits for pow warranties");

  CLI::App* keygen = app.add_subcommand("keygen", "create a user or provider identity");
  add_common(keygen);
  keygen->add_option("role", role, "user or provider")->required();
  keygen->add_option("name", name, "identity name")->required();

  CLI::App* publish = app.add_subcommand("publish", "encrypt a file into the next block");
  add_common(publish);
  publish->add_option("--user", user_name, "publishing user")->required();
  publish->add_option("file", in_path, "input file")->required();

  CLI::App* update = app.add_subcommand("update", "re-key the shards; revokes all grants");
  add_common(update);

  CLI::App* grant = app.add_subcommand("grant", "unlock a block key for a provider");
  add_common(grant);
  grant->add_option("--user", user_name, "owner of the block")->required();
  grant->add_option("--block", block, "block index")->required();
  grant->add_option("--provider", provider_name, "recipient provider")->required();
  grant->add_option("--out", out_path, "grant output file")->required();

  CLI::App* decrypt = app.add_subcommand("decrypt", "decrypt a block with a sealed grant");
  add_common(decrypt, false);
  decrypt->add_option("--provider", provider_name, "provider identity")->required();
  decrypt->add_option("--block", block, "block index")->required();
  decrypt->add_option("--grant", grant_path, "sealed grant file")->required();
  decrypt->add_option("--out", out_path, "plaintext output file")->required();

  CLI::App* audit = app.add_subcommand("audit", "verify the chain and the variable state");
  add_common(audit, false);

  CLI::App* rotate = app.add_subcommand("rotate-keeper", "hand the time-key to a successor");
  add_common(rotate, false);

  CLI::App* exps = app.add_subcommand("export-secret", "print secret material (explicit only)");
  add_common(exps, false);
  exps->add_option("name", name, "keeper, or an identity name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (init->parsed())
      return cmd_init(opts, backend, block_bytes, warranty, pow_difficulty);
    if (keygen->parsed()) return cmd_keygen(opts, role, name);
    if (publish->parsed()) return cmd_publish(opts, user_name, in_path);
    if (update->parsed()) return cmd_update(opts);
    if (grant->parsed()) return cmd_grant(opts, user_name, block, provider_name, out_path);
    if (decrypt->parsed())
      return cmd_decrypt(opts, provider_name, block, grant_path, out_path);
    if (audit->parsed()) return cmd_audit(opts);
    if (rotate->parsed()) return cmd_rotate_keeper(opts);
    if (exps->parsed()) return cmd_export_secret(opts, name);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity failure: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const DecodeError& e) {
    std::cerr << "corrupt ledger data: " << e.what() << "\n";
    return kExitCorrupt;
  } catch (const StateError& e) {
    std::cerr << "state error: " << e.what() << "\n";
    return kExitState;
  } catch (const ValueError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitState;
  }
}
