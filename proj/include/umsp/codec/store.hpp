#pragma once

#include <filesystem>
#include <optional>

#include "umsp/codec/codec.hpp"

namespace umsp::codec {

// On-disk ledger layout under one directory:
//   params            public protocol parameters
//   chain             append-only block record stream
//   state             variable ledger snapshot, replaced atomically
//   keys/<name>.pub   public key material
//   secrets/<name>    secret material (keeper, users, providers)
//
// Writes go through write-temp-then-rename; the chain file is the one
// file that grows by appends. Locking is advisory and belongs to the
// caller (the CLI holds an exclusive flock on <dir>/.lock).
class LedgerStore {
 public:
  explicit LedgerStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  bool exists() const { return std::filesystem::exists(dir_ / "params"); }

  // refuses to initialize over an existing ledger
  void create(const LedgerParams& params, const ledger::Chain& chain,
              const ledger::VariableState& state, const protocol::KeeperSecret& secret);

  LedgerParams load_params() const;
  Digest32 stored_params_digest() const;

  ledger::Chain load_chain(const LedgerParams& params) const;
  void append_block(const ledger::Block& block);

  ledger::VariableState load_state(const LedgerParams& params) const;
  void save_state(const ledger::VariableState& state);

  protocol::KeeperSecret load_keeper_secret(const LedgerParams& params) const;
  void save_keeper_secret(const protocol::KeeperSecret& secret, const LedgerParams& params);

  void save_public(const std::string& name, BytesView encoded);
  void save_secret(const std::string& name, BytesView encoded);
  Bytes load_public(const std::string& name) const;
  Bytes load_secret(const std::string& name) const;
  bool has_public(const std::string& name) const;
  bool has_secret(const std::string& name) const;

  std::filesystem::path chain_path() const { return dir_ / "chain"; }
  std::filesystem::path state_path() const { return dir_ / "state"; }
  std::filesystem::path params_path() const { return dir_ / "params"; }

 private:
  std::filesystem::path dir_;
};

Bytes read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, BytesView data);
void append_to_file(const std::filesystem::path& path, BytesView data);

// RAII advisory lock (flock) on <dir>/.lock
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace umsp::codec
