#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>

#include "umsp/bytes.hpp"
#include "umsp/errors.hpp"
#include "umsp/rng.hpp"

namespace umsp::bilinear {

enum class BackendId : uint8_t {
  ProductionCurve = 1,  // BLS12-381, type-3 pairing
  ToyInteger = 2,       // Z_p with pair(a,b) = a*b; test oracle only
};

std::string backend_name(BackendId id);
BackendId backend_from_name(const std::string& name);

// Public parameters of a backend: the prime order p shared by G1, G2 and
// GT, and the fixed canonical encoding widths (bytes) per element type.
struct GroupDescription {
  BackendId backend;
  mpz_class order;  // p, prime
  uint32_t scalar_bytes;
  uint32_t g1_bytes;
  uint32_t g2_bytes;
  uint32_t gt_bytes;

  bool operator==(const GroupDescription& other) const = default;
};

// Exponent in [0, p). Reduction and range checks happen at construction
// time, through the owning Group.
class Scalar {
 public:
  Scalar() = default;
  const mpz_class& value() const { return v_; }
  bool operator==(const Scalar& other) const { return v_ == other.v_; }

 private:
  friend class Group;
  explicit Scalar(mpz_class v) : v_(std::move(v)) {}
  mpz_class v_;
};

namespace detail {
// Backend-private element storage. Backends downcast; a mismatch between
// an element and the group asked to operate on it is a ValueError.
struct ElementRep {
  virtual ~ElementRep() = default;
};
}  // namespace detail

class Group;

template <int Tag>
class Element {
 public:
  Element() = default;
  bool valid() const { return static_cast<bool>(rep_); }
  const std::shared_ptr<const Group>& group() const { return group_; }

 private:
  friend class Group;
  Element(std::shared_ptr<const Group> g, std::shared_ptr<const detail::ElementRep> rep)
      : group_(std::move(g)), rep_(std::move(rep)) {}
  std::shared_ptr<const Group> group_;
  std::shared_ptr<const detail::ElementRep> rep_;
};

using G1Element = Element<1>;
using G2Element = Element<2>;
using GTElement = Element<3>;

// A prime-order bilinear group triple (G1, G2, GT) with a pairing
// e: G1 x G2 -> GT satisfying e(g1^a, g2^b) = e(g1, g2)^(a*b) and
// e(g1, g2) != 1. Elements are immutable values and safe to share across
// threads; all randomness comes from caller-supplied sources.
class Group : public std::enable_shared_from_this<Group> {
 public:
  virtual ~Group() = default;

  const GroupDescription& description() const { return desc_; }
  const mpz_class& order() const { return desc_.order; }

  // -- scalars ------------------------------------------------------------
  // Draws 2 + (n mod (p-2)) where n is scalar_bytes+8 big-endian bytes
  // from the source; never 0 or 1. The draw consumes exactly one such
  // chunk, so deterministic sources replay to identical scalars.
  Scalar random_scalar(RandomSource& rng) const;
  Scalar scalar_from_mpz(const mpz_class& v) const;  // reduced mod p
  Scalar scalar_from_u64(uint64_t v) const;
  Scalar scalar_inv(const Scalar& s) const;  // error on 0
  Scalar scalar_mul(const Scalar& a, const Scalar& b) const;
  Bytes scalar_to_bytes(const Scalar& s) const;  // fixed width big-endian
  Scalar scalar_from_bytes(BytesView data) const;

  // -- fixed generators ----------------------------------------------------
  G1Element g1_base() const;
  G2Element g2_base() const;
  GTElement gt_base() const;  // pair(g1_base, g2_base)
  G1Element g1_identity() const;
  G2Element g2_identity() const;
  GTElement gt_identity() const;

  // -- group operations ----------------------------------------------------
  G1Element exp(const G1Element& base, const Scalar& s) const;
  G2Element exp(const G2Element& base, const Scalar& s) const;
  GTElement exp(const GTElement& base, const Scalar& s) const;
  G2Element mul(const G2Element& a, const G2Element& b) const;
  G2Element inv(const G2Element& a) const;
  GTElement pair(const G1Element& a, const G2Element& b) const;

  bool eq(const G1Element& a, const G1Element& b) const;
  bool eq(const G2Element& a, const G2Element& b) const;
  bool eq(const GTElement& a, const GTElement& b) const;
  bool is_identity(const G1Element& a) const;
  bool is_identity(const G2Element& a) const;
  bool is_identity(const GTElement& a) const;

  // -- canonical encodings ---------------------------------------------------
  // Fixed-width, injective, and decode(encode(x)) == x. Decoding validates
  // membership and rejects non-canonical bytes.
  Bytes encode(const G1Element& a) const;
  Bytes encode(const G2Element& a) const;
  Bytes encode(const GTElement& a) const;
  G1Element decode_g1(BytesView data) const;
  G2Element decode_g2(BytesView data) const;
  GTElement decode_gt(BytesView data) const;

  // Pad bytes for XOR masking: the canonical GT encoding, width = gt_bytes.
  Bytes gt_to_pad(const GTElement& x) const;

 protected:
  explicit Group(GroupDescription desc) : desc_(std::move(desc)) {}

  using Rep = std::shared_ptr<const detail::ElementRep>;

  virtual Rep g1_base_rep() const = 0;
  virtual Rep g2_base_rep() const = 0;
  virtual Rep g1_identity_rep() const = 0;
  virtual Rep g2_identity_rep() const = 0;
  virtual Rep gt_identity_rep() const = 0;
  virtual Rep exp_g1(const detail::ElementRep& base, const mpz_class& s) const = 0;
  virtual Rep exp_g2(const detail::ElementRep& base, const mpz_class& s) const = 0;
  virtual Rep exp_gt(const detail::ElementRep& base, const mpz_class& s) const = 0;
  virtual Rep mul_g2(const detail::ElementRep& a, const detail::ElementRep& b) const = 0;
  virtual Rep inv_g2(const detail::ElementRep& a) const = 0;
  virtual Rep pair_rep(const detail::ElementRep& a, const detail::ElementRep& b) const = 0;
  virtual bool eq_rep(int tag, const detail::ElementRep& a, const detail::ElementRep& b) const = 0;
  virtual Bytes encode_rep(int tag, const detail::ElementRep& a) const = 0;
  virtual Rep decode_rep(int tag, BytesView data) const = 0;

  template <int Tag>
  Element<Tag> wrap(Rep rep) const {
    return Element<Tag>(shared_from_this(), std::move(rep));
  }

  template <int Tag>
  const detail::ElementRep& unwrap(const Element<Tag>& e) const;

 private:
  GroupDescription desc_;
};

// Factory helpers. The toy order must be a prime >= 5 (and < 2^31 so the
// 4-byte encodings stay canonical).
std::shared_ptr<const Group> make_production_group();
std::shared_ptr<const Group> make_toy_group(const mpz_class& p);
std::shared_ptr<const Group> make_group(const GroupDescription& desc);

inline bool operator==(const G1Element& a, const G1Element& b) {
  return a.group()->eq(a, b);
}
inline bool operator==(const G2Element& a, const G2Element& b) {
  return a.group()->eq(a, b);
}
inline bool operator==(const GTElement& a, const GTElement& b) {
  return a.group()->eq(a, b);
}

}  // namespace umsp::bilinear
