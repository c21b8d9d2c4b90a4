#pragma once

#include <string>

#include "umsp/bytes.hpp"
#include "umsp/errors.hpp"
#include "umsp/hash.hpp"

namespace umsp::codec {

// All multi-byte integers are big-endian. Variable-width fields carry a
// 32-bit length prefix. Every file and every chain record ends with an
// 8-byte checksum (truncated SHA-256 of everything before it) so that
// any bit flip is caught at decode time, including in fields that no
// digest or warranty covers.

inline constexpr uint8_t kMagic[4] = {'U', 'M', 'S', 'P'};
inline constexpr uint8_t kFormatVersion = 1;
inline constexpr size_t kChecksumBytes = 8;

enum class FileType : uint8_t {
  Params = 1,
  Chain = 2,
  State = 3,
  KeeperSecret = 4,
  UserPublic = 5,
  UserSecret = 6,
  ProviderPublic = 7,
  ProviderSecret = 8,
  Grant = 9,
  SignerPublic = 10,
  SignerSecret = 11,
};

class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u32(uint32_t v);
  void u64(uint64_t v);
  void raw(BytesView data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  void blob(BytesView data);
  void str(const std::string& s);
  void digest(const Digest32& d) { raw(BytesView(d.data(), d.size())); }

  // appends the truncated hash of everything written so far
  void checksum();

  const Bytes& data() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

class ByteReader {
 public:
  explicit ByteReader(BytesView data) : data_(data) {}

  uint8_t u8();
  uint32_t u32();
  uint64_t u64();
  Bytes raw(size_t n);
  Bytes blob();
  std::string str();
  Digest32 digest();

  // verifies the trailing checksum of the region [0, offset) and consumes it
  void checksum();

  size_t offset() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }
  void expect_end() const;

 private:
  void need(size_t n) const;
  BytesView data_;
  size_t pos_ = 0;
};

// file header = magic || file type || version
void write_header(ByteWriter& w, FileType type);
void read_header(ByteReader& r, FileType expected);

}  // namespace umsp::codec
