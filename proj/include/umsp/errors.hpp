#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace umsp {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument or configuration (bad block size, bad difficulty, ...).
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& msg) : Error(msg) {}
};

// Operation attempted against an object in the wrong state: epoch
// mismatches, retired keepers, double rotation.
class StateError : public Error {
 public:
  explicit StateError(const std::string& msg) : Error(msg) {}
};

// Malformed byte input: truncated files, bad magic, unknown versions,
// group-element encodings that do not decode.
class DecodeError : public Error {
 public:
  enum class Kind {
    Truncated,
    BadMagic,
    UnknownVersion,
    BadChecksum,
    BadElement,
    BadValue,
    TrailingBytes,
  };

  DecodeError(Kind kind, size_t offset, const std::string& msg)
      : Error(msg), kind_(kind), offset_(offset) {}

  Kind kind() const { return kind_; }
  size_t offset() const { return offset_; }

 private:
  Kind kind_;
  size_t offset_;
};

// Decryption produced shards whose digests do not match the published
// ones. Carries the per-shard outcome; index entries are 1-based.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& msg, std::vector<size_t> failed_shards)
      : Error(msg), failed_shards_(std::move(failed_shards)) {}

  const std::vector<size_t>& failed_shards() const { return failed_shards_; }

 private:
  std::vector<size_t> failed_shards_;
};

}  // namespace umsp
