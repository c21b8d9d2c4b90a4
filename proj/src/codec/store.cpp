#include "umsp/codec/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>

namespace umsp::codec {

namespace fs = std::filesystem;

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

void write_file_atomic(const fs::path& path, BytesView data) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<long>(data.size()));
    if (!out.good()) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void append_to_file(const fs::path& path, BytesView data) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<long>(data.size()));
  if (!out.good()) throw Error("short append to " + path.string());
}

void LedgerStore::create(const LedgerParams& params, const ledger::Chain& chain,
                         const ledger::VariableState& state,
                         const protocol::KeeperSecret& secret) {
  if (exists()) throw StateError("directory already contains a ledger: " + dir_.string());
  fs::create_directories(dir_ / "keys");
  fs::create_directories(dir_ / "secrets");
  Bytes params_bytes = encode_params(params);
  Digest32 pd = sha256(params_bytes);
  write_file_atomic(params_path(), params_bytes);
  write_file_atomic(chain_path(), encode_chain(chain, pd));
  write_file_atomic(state_path(), encode_state(state, pd));
  save_keeper_secret(secret, params);
}

LedgerParams LedgerStore::load_params() const {
  if (!exists()) throw StateError("no ledger at " + dir_.string());
  return decode_params(read_file(params_path()));
}

Digest32 LedgerStore::stored_params_digest() const { return sha256(read_file(params_path())); }

ledger::Chain LedgerStore::load_chain(const LedgerParams& params) const {
  return decode_chain(read_file(chain_path()), params, stored_params_digest());
}

void LedgerStore::append_block(const ledger::Block& block) {
  append_to_file(chain_path(), encode_block_record(block));
}

ledger::VariableState LedgerStore::load_state(const LedgerParams& params) const {
  return decode_state(read_file(state_path()), params, stored_params_digest());
}

void LedgerStore::save_state(const ledger::VariableState& state) {
  write_file_atomic(state_path(), encode_state(state, stored_params_digest()));
}

protocol::KeeperSecret LedgerStore::load_keeper_secret(const LedgerParams& params) const {
  return decode_keeper_secret(load_secret("keeper"), params);
}

void LedgerStore::save_keeper_secret(const protocol::KeeperSecret& secret,
                                     const LedgerParams& params) {
  save_secret("keeper", encode_keeper_secret(secret, params));
}

static void check_name(const std::string& name) {
  if (name.empty() || name.find('/') != std::string::npos || name.find("..") != std::string::npos)
    throw ValueError("invalid identity name: " + name);
}

void LedgerStore::save_public(const std::string& name, BytesView encoded) {
  check_name(name);
  fs::create_directories(dir_ / "keys");
  write_file_atomic(dir_ / "keys" / (name + ".pub"), encoded);
}

void LedgerStore::save_secret(const std::string& name, BytesView encoded) {
  check_name(name);
  fs::create_directories(dir_ / "secrets");
  write_file_atomic(dir_ / "secrets" / name, encoded);
}

Bytes LedgerStore::load_public(const std::string& name) const {
  check_name(name);
  return read_file(dir_ / "keys" / (name + ".pub"));
}

Bytes LedgerStore::load_secret(const std::string& name) const {
  check_name(name);
  return read_file(dir_ / "secrets" / name);
}

bool LedgerStore::has_public(const std::string& name) const {
  return fs::exists(dir_ / "keys" / (name + ".pub"));
}

bool LedgerStore::has_secret(const std::string& name) const {
  return fs::exists(dir_ / "secrets" / name);
}

DirectoryLock::DirectoryLock(const fs::path& dir) {
  fs::create_directories(dir);
  fs::path lock = dir / ".lock";
  fd_ = ::open(lock.c_str(), O_CREAT | O_RDWR, 0600);
  if (fd_ < 0) throw Error("cannot open lock file " + lock.string());
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    throw Error("cannot lock " + lock.string());
  }
}

DirectoryLock::~DirectoryLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace umsp::codec
