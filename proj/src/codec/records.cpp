#include "umsp/codec/records.hpp"

#include <cstring>

namespace umsp::codec {

void ByteWriter::u32(uint32_t v) {
  uint8_t b[4];
  store_be32(v, b);
  raw(BytesView(b, 4));
}

void ByteWriter::u64(uint64_t v) {
  uint8_t b[8];
  store_be64(v, b);
  raw(BytesView(b, 8));
}

void ByteWriter::blob(BytesView data) {
  u32(static_cast<uint32_t>(data.size()));
  raw(data);
}

void ByteWriter::str(const std::string& s) {
  blob(BytesView(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

void ByteWriter::checksum() {
  Digest32 d = sha256(buf_);
  buf_.insert(buf_.end(), d.begin(), d.begin() + kChecksumBytes);
}

void ByteReader::need(size_t n) const {
  if (pos_ + n > data_.size())
    throw DecodeError(DecodeError::Kind::Truncated, pos_,
                      "truncated input at offset " + std::to_string(pos_) + " (need " +
                          std::to_string(n) + " more bytes, have " +
                          std::to_string(data_.size() - pos_) + ")");
}

uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

uint32_t ByteReader::u32() {
  need(4);
  uint32_t v = load_be32(data_.data() + pos_);
  pos_ += 4;
  return v;
}

uint64_t ByteReader::u64() {
  need(8);
  uint64_t v = load_be64(data_.data() + pos_);
  pos_ += 8;
  return v;
}

Bytes ByteReader::raw(size_t n) {
  need(n);
  Bytes out(data_.begin() + static_cast<long>(pos_), data_.begin() + static_cast<long>(pos_ + n));
  pos_ += n;
  return out;
}

Bytes ByteReader::blob() {
  uint32_t n = u32();
  return raw(n);
}

std::string ByteReader::str() {
  Bytes b = blob();
  return std::string(b.begin(), b.end());
}

Digest32 ByteReader::digest() {
  need(32);
  Digest32 d;
  std::memcpy(d.data(), data_.data() + pos_, 32);
  pos_ += 32;
  return d;
}

void ByteReader::checksum() {
  Digest32 expect = sha256(BytesView(data_.data(), pos_));
  size_t at = pos_;
  Bytes stored = raw(kChecksumBytes);
  if (!std::equal(stored.begin(), stored.end(), expect.begin()))
    throw DecodeError(DecodeError::Kind::BadChecksum, at,
                      "checksum mismatch at offset " + std::to_string(at));
}

void ByteReader::expect_end() const {
  if (pos_ != data_.size())
    throw DecodeError(DecodeError::Kind::TrailingBytes, pos_,
                      "unexpected trailing bytes at offset " + std::to_string(pos_));
}

void write_header(ByteWriter& w, FileType type) {
  w.raw(BytesView(kMagic, 4));
  w.u8(static_cast<uint8_t>(type));
  w.u8(kFormatVersion);
}

void read_header(ByteReader& r, FileType expected) {
  Bytes magic = r.raw(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic))
    throw DecodeError(DecodeError::Kind::BadMagic, 0, "bad file magic");
  uint8_t type = r.u8();
  if (type != static_cast<uint8_t>(expected))
    throw DecodeError(DecodeError::Kind::BadValue, 4,
                      "wrong file type " + std::to_string(type) + ", expected " +
                          std::to_string(static_cast<int>(expected)));
  uint8_t version = r.u8();
  if (version != kFormatVersion)
    throw DecodeError(DecodeError::Kind::UnknownVersion, 5,
                      "unsupported format version " + std::to_string(version));
}

}  // namespace umsp::codec
