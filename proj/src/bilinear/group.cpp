#include "umsp/bilinear/group.hpp"

#include "umsp/bilinear/bls12_381.hpp"
#include "umsp/bilinear/toy.hpp"

namespace umsp::bilinear {

std::string backend_name(BackendId id) {
  switch (id) {
    case BackendId::ProductionCurve:
      return "production";
    case BackendId::ToyInteger:
      return "toy";
  }
  throw ValueError("unknown backend id");
}

BackendId backend_from_name(const std::string& name) {
  if (name == "production") return BackendId::ProductionCurve;
  if (name == "toy") return BackendId::ToyInteger;
  throw ValueError("unknown backend name: " + name);
}

template <int Tag>
const detail::ElementRep& Group::unwrap(const Element<Tag>& e) const {
  if (!e.valid()) throw ValueError("uninitialized group element");
  if (e.group().get() != this && !(e.group()->description() == desc_))
    throw ValueError("element belongs to a different group");
  return *e.rep_;
}

template const detail::ElementRep& Group::unwrap(const G1Element&) const;
template const detail::ElementRep& Group::unwrap(const G2Element&) const;
template const detail::ElementRep& Group::unwrap(const GTElement&) const;

Scalar Group::random_scalar(RandomSource& rng) const {
  Bytes draw = rng.bytes(desc_.scalar_bytes + 8);
  mpz_class n;
  mpz_import(n.get_mpz_t(), draw.size(), 1, 1, 1, 0, draw.data());
  mpz_class span = desc_.order - 2;
  return Scalar(2 + n % span);
}

Scalar Group::scalar_from_mpz(const mpz_class& v) const {
  mpz_class r = v % desc_.order;
  if (r < 0) r += desc_.order;
  return Scalar(r);
}

Scalar Group::scalar_from_u64(uint64_t v) const {
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return scalar_from_mpz(m);
}

Scalar Group::scalar_inv(const Scalar& s) const {
  if (s.value() == 0) throw ValueError("scalar 0 has no inverse");
  mpz_class r;
  mpz_invert(r.get_mpz_t(), s.value().get_mpz_t(), desc_.order.get_mpz_t());
  return Scalar(r);
}

Scalar Group::scalar_mul(const Scalar& a, const Scalar& b) const {
  return Scalar(mpz_class(a.value() * b.value() % desc_.order));
}

Bytes Group::scalar_to_bytes(const Scalar& s) const {
  Bytes out(desc_.scalar_bytes, 0);
  size_t count = 0;
  // big-endian, right-aligned in the fixed width
  Bytes tmp((mpz_sizeinbase(s.value().get_mpz_t(), 2) + 7) / 8);
  if (s.value() != 0) {
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, s.value().get_mpz_t());
    if (count > out.size()) throw ValueError("scalar exceeds encoding width");
    std::copy(tmp.begin(), tmp.begin() + static_cast<long>(count),
              out.end() - static_cast<long>(count));
  }
  return out;
}

Scalar Group::scalar_from_bytes(BytesView data) const {
  if (data.size() != desc_.scalar_bytes)
    throw DecodeError(DecodeError::Kind::BadValue, 0, "scalar encoding has wrong width");
  mpz_class v;
  mpz_import(v.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  if (v >= desc_.order)
    throw DecodeError(DecodeError::Kind::BadValue, 0, "scalar not reduced mod group order");
  return Scalar(v);
}

G1Element Group::g1_base() const { return wrap<1>(g1_base_rep()); }
G2Element Group::g2_base() const { return wrap<2>(g2_base_rep()); }
GTElement Group::gt_base() const { return pair(g1_base(), g2_base()); }
G1Element Group::g1_identity() const { return wrap<1>(g1_identity_rep()); }
G2Element Group::g2_identity() const { return wrap<2>(g2_identity_rep()); }
GTElement Group::gt_identity() const { return wrap<3>(gt_identity_rep()); }

G1Element Group::exp(const G1Element& base, const Scalar& s) const {
  return wrap<1>(exp_g1(unwrap(base), s.value()));
}
G2Element Group::exp(const G2Element& base, const Scalar& s) const {
  return wrap<2>(exp_g2(unwrap(base), s.value()));
}
GTElement Group::exp(const GTElement& base, const Scalar& s) const {
  return wrap<3>(exp_gt(unwrap(base), s.value()));
}
G2Element Group::mul(const G2Element& a, const G2Element& b) const {
  return wrap<2>(mul_g2(unwrap(a), unwrap(b)));
}
G2Element Group::inv(const G2Element& a) const { return wrap<2>(inv_g2(unwrap(a))); }

GTElement Group::pair(const G1Element& a, const G2Element& b) const {
  return wrap<3>(pair_rep(unwrap(a), unwrap(b)));
}

bool Group::eq(const G1Element& a, const G1Element& b) const {
  return eq_rep(1, unwrap(a), unwrap(b));
}
bool Group::eq(const G2Element& a, const G2Element& b) const {
  return eq_rep(2, unwrap(a), unwrap(b));
}
bool Group::eq(const GTElement& a, const GTElement& b) const {
  return eq_rep(3, unwrap(a), unwrap(b));
}
bool Group::is_identity(const G1Element& a) const { return eq(a, g1_identity()); }
bool Group::is_identity(const G2Element& a) const { return eq(a, g2_identity()); }
bool Group::is_identity(const GTElement& a) const { return eq(a, gt_identity()); }

Bytes Group::encode(const G1Element& a) const { return encode_rep(1, unwrap(a)); }
Bytes Group::encode(const G2Element& a) const { return encode_rep(2, unwrap(a)); }
Bytes Group::encode(const GTElement& a) const { return encode_rep(3, unwrap(a)); }

G1Element Group::decode_g1(BytesView data) const { return wrap<1>(decode_rep(1, data)); }
G2Element Group::decode_g2(BytesView data) const { return wrap<2>(decode_rep(2, data)); }
GTElement Group::decode_gt(BytesView data) const { return wrap<3>(decode_rep(3, data)); }

Bytes Group::gt_to_pad(const GTElement& x) const { return encode(x); }

std::shared_ptr<const Group> make_group(const GroupDescription& desc) {
  std::shared_ptr<const Group> g;
  switch (desc.backend) {
    case BackendId::ProductionCurve:
      g = make_production_group();
      break;
    case BackendId::ToyInteger:
      g = make_toy_group(desc.order);
      break;
    default:
      throw ValueError("unknown backend id");
  }
  if (!(g->description() == desc))
    throw ValueError("group description does not match backend parameters");
  return g;
}

}  // namespace umsp::bilinear
