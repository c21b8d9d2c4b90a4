#include "umsp/bilinear/toy.hpp"

namespace umsp::bilinear {

namespace {

struct ToyRep final : detail::ElementRep {
  explicit ToyRep(unsigned long v) : value(v) {}
  unsigned long value;  // residue mod p
};

const ToyRep& as_toy(const detail::ElementRep& rep) {
  auto* p = dynamic_cast<const ToyRep*>(&rep);
  if (!p) throw ValueError("element does not belong to the toy backend");
  return *p;
}

// Least primitive root of p, by search. p is small by construction.
unsigned long least_primitive_root(const mpz_class& p) {
  unsigned long pl = mpz_get_ui(p.get_mpz_t());
  mpz_class pm1 = p - 1;
  // distinct prime factors of p-1
  std::vector<mpz_class> factors;
  mpz_class rest = pm1, d = 2;
  while (d * d <= rest) {
    if (rest % d == 0) {
      factors.push_back(d);
      while (rest % d == 0) rest /= d;
    }
    ++d;
  }
  if (rest > 1) factors.push_back(rest);
  for (unsigned long g = 2; g < pl; ++g) {
    bool primitive = true;
    for (const auto& f : factors) {
      mpz_class e = pm1 / f, r;
      mpz_class base(g);
      mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
      if (r == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
  throw ValueError("no primitive root found");
}

class ToyGroup final : public Group {
 public:
  explicit ToyGroup(const mpz_class& p)
      : Group(GroupDescription{BackendId::ToyInteger, p, kToyScalarBytes, kToyElementBytes,
                               kToyElementBytes, kToyElementBytes}),
        p_(mpz_get_ui(p.get_mpz_t())),
        generator_(least_primitive_root(p)) {}

  unsigned long modulus() const { return p_; }

 protected:
  Rep g1_base_rep() const override { return std::make_shared<ToyRep>(generator_); }
  Rep g2_base_rep() const override { return std::make_shared<ToyRep>(generator_); }
  Rep g1_identity_rep() const override { return std::make_shared<ToyRep>(0); }
  Rep g2_identity_rep() const override { return std::make_shared<ToyRep>(0); }
  Rep gt_identity_rep() const override { return std::make_shared<ToyRep>(0); }

  Rep exp_g1(const detail::ElementRep& base, const mpz_class& s) const override {
    return scale(base, s);
  }
  Rep exp_g2(const detail::ElementRep& base, const mpz_class& s) const override {
    return scale(base, s);
  }
  Rep exp_gt(const detail::ElementRep& base, const mpz_class& s) const override {
    return scale(base, s);
  }

  Rep mul_g2(const detail::ElementRep& a, const detail::ElementRep& b) const override {
    return std::make_shared<ToyRep>((as_toy(a).value + as_toy(b).value) % p_);
  }

  Rep inv_g2(const detail::ElementRep& a) const override {
    unsigned long v = as_toy(a).value;
    return std::make_shared<ToyRep>(v == 0 ? 0 : p_ - v);
  }

  Rep pair_rep(const detail::ElementRep& a, const detail::ElementRep& b) const override {
    unsigned long long prod =
        static_cast<unsigned long long>(as_toy(a).value) * as_toy(b).value;
    return std::make_shared<ToyRep>(static_cast<unsigned long>(prod % p_));
  }

  bool eq_rep(int, const detail::ElementRep& a, const detail::ElementRep& b) const override {
    return as_toy(a).value == as_toy(b).value;
  }

  Bytes encode_rep(int, const detail::ElementRep& a) const override {
    Bytes out(kToyElementBytes);
    store_be32(static_cast<uint32_t>(as_toy(a).value), out.data());
    return out;
  }

  Rep decode_rep(int, BytesView data) const override {
    if (data.size() != kToyElementBytes)
      throw DecodeError(DecodeError::Kind::BadElement, 0, "toy element has wrong width");
    uint32_t v = load_be32(data.data());
    if (v >= p_)
      throw DecodeError(DecodeError::Kind::BadElement, 0, "toy element not reduced mod p");
    return std::make_shared<ToyRep>(v);
  }

 private:
  Rep scale(const detail::ElementRep& base, const mpz_class& s) const {
    mpz_class r = mpz_class(as_toy(base).value) * s % mpz_class(static_cast<unsigned long>(p_));
    return std::make_shared<ToyRep>(mpz_get_ui(r.get_mpz_t()));
  }

  unsigned long p_;
  unsigned long generator_;
};

}  // namespace

std::shared_ptr<const Group> make_toy_group(const mpz_class& p) {
  if (p < 5) throw ValueError("toy order must be at least 5");
  if (mpz_sizeinbase(p.get_mpz_t(), 2) > 31) throw ValueError("toy order must fit 31 bits");
  if (mpz_probab_prime_p(p.get_mpz_t(), 32) == 0) throw ValueError("toy order must be prime");
  return std::make_shared<ToyGroup>(p);
}

}  // namespace umsp::bilinear
