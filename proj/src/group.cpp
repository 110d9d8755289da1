#include "ringledger/group.hpp"

#include <algorithm>
#include <cassert>

#include "ringledger/sha256.hpp"

namespace ringledger {

std::string_view profile_name(Profile p) {
    switch (p) {
        case Profile::Toy: return "toy";
        case Profile::ToyLarge: return "toy-large";
        case Profile::Full: return "full";
    }
    return "?";
}

std::optional<Profile> profile_from_string(std::string_view s) {
    if (s == "toy") return Profile::Toy;
    if (s == "toy-large") return Profile::ToyLarge;
    if (s == "full") return Profile::Full;
    return std::nullopt;
}

bool is_registered_tag(std::string_view domain) {
    return domain == tags::ckd_mult || domain == tags::ckd_add ||
           domain == tags::stealth_shared || domain == tags::ring_challenge ||
           domain == tags::keyimage_base_fs || domain == tags::keyimage_base_fz;
}

mpz_class mpz_from_be(BytesView data) {
    mpz_class v;
    if (!data.empty()) {
        mpz_import(v.get_mpz_t(), data.size(), 1 /*most significant word first*/,
                   1 /*word = 1 byte*/, 1 /*big-endian within word*/, 0, data.data());
    }
    return v;
}

Bytes mpz_to_be(const mpz_class& v, std::size_t width) {
    Bytes out(width, 0);
    std::size_t count = 0;
    if (sgn(v) != 0) {
        std::size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
        assert(need <= width);
        mpz_export(out.data() + (width - need), &count, 1, 1, 1, 0, v.get_mpz_t());
        assert(count == need);
    }
    return out;
}

// 256-bit safe-prime pair: p = 2q+1, both prime, 4 generates the order-q
// subgroup of quadratic residues.
static const char* kFullP = "fba600b055bce908392ee5d52ebc098e6d9216e0347219504c3faaace72409cf";
static const char* kFullQ = "7dd300582ade74841c9772ea975e04c736c90b701a390ca8261fd556739204e7";

Group::Group(Profile profile, mpz_class p, mpz_class q, mpz_class g,
             std::size_t element_size, std::size_t scalar_size)
    : profile_(profile),
      p_(std::move(p)),
      q_(std::move(q)),
      g_{std::move(g)},
      element_size_(element_size),
      scalar_size_(scalar_size) {
    if (profile_ == Profile::Toy) {
        // Quadratic residues mod 23, ascending; index in this table is the
        // element's one-byte encoding.
        toy_table_ = {1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18};
        assert(toy_table_.size() == 11);
    }
}

const Group& Group::get(Profile profile) {
    static const Group toy(Profile::Toy, 23, 11, 4, 1, 1);
    static const Group toylarge(Profile::ToyLarge, 2000303, 1000151, 4, 4, 4);
    static const Group full(Profile::Full, mpz_class(kFullP, 16), mpz_class(kFullQ, 16), 4, 32, 32);
    switch (profile) {
        case Profile::Toy: return toy;
        case Profile::ToyLarge: return toylarge;
        case Profile::Full: return full;
    }
    return toy;
}

bool Group::is_member(const Element& x) const {
    if (sgn(x.v) <= 0 || cmp(x.v, p_) >= 0) return false;
    if (profile_ == Profile::Toy) {
        unsigned long r = mpz_get_ui(x.v.get_mpz_t());
        return std::binary_search(toy_table_.begin(), toy_table_.end(), r);
    }
    mpz_class t;
    mpz_powm(t.get_mpz_t(), x.v.get_mpz_t(), q_.get_mpz_t(), p_.get_mpz_t());
    return cmp(t, 1) == 0;
}

Element Group::add(const Element& a, const Element& b) const {
    mpz_class r = (a.v * b.v) % p_;
    return Element{r};
}

Element Group::scalar_mul(const Scalar& k, const Element& x) const {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), x.v.get_mpz_t(), k.v.get_mpz_t(), p_.get_mpz_t());
    return Element{r};
}

Element Group::base_mul(const Scalar& k) const {
    return scalar_mul(k, g_);
}

Scalar Group::scalar_from_u64(std::uint64_t v) const {
    mpz_class r = mpz_from_be(be64(v));
    r %= q_;
    return Scalar{r};
}

Scalar Group::scalar_add(const Scalar& a, const Scalar& b) const {
    mpz_class r = (a.v + b.v) % q_;
    return Scalar{r};
}

Scalar Group::scalar_sub(const Scalar& a, const Scalar& b) const {
    mpz_class r = (a.v - b.v) % q_;
    if (sgn(r) < 0) r += q_;
    return Scalar{r};
}

Scalar Group::scalar_mul_s(const Scalar& a, const Scalar& b) const {
    mpz_class r = (a.v * b.v) % q_;
    return Scalar{r};
}

Bytes Group::encode(const Element& x) const {
    assert(is_member(x));
    if (profile_ == Profile::Toy) {
        unsigned long r = mpz_get_ui(x.v.get_mpz_t());
        auto it = std::lower_bound(toy_table_.begin(), toy_table_.end(), r);
        return Bytes{static_cast<std::uint8_t>(it - toy_table_.begin())};
    }
    return mpz_to_be(x.v, element_size_);
}

Element Group::decode(BytesView data) const {
    if (data.size() != element_size_)
        throw Error(Err::BadEncoding, "element encoding must be " +
                                          std::to_string(element_size_) + " bytes");
    if (profile_ == Profile::Toy) {
        if (data[0] >= toy_table_.size())
            throw Error(Err::BadEncoding, "toy element index out of range");
        return Element{toy_table_[data[0]]};
    }
    Element x{mpz_from_be(data)};
    if (!is_member(x)) throw Error(Err::BadEncoding, "not a subgroup element");
    return x;
}

Bytes Group::encode_scalar(const Scalar& k) const {
    return mpz_to_be(k.v, scalar_size_);
}

Scalar Group::decode_scalar(BytesView data) const {
    if (data.size() != scalar_size_)
        throw Error(Err::BadEncoding, "scalar encoding must be " +
                                          std::to_string(scalar_size_) + " bytes");
    mpz_class v = mpz_from_be(data);
    if (cmp(v, q_) >= 0) throw Error(Err::BadEncoding, "scalar not reduced mod q");
    return Scalar{v};
}

Element Group::decode_hex(std::string_view h) const {
    auto raw = from_hex(h);
    if (!raw) throw Error(Err::BadEncoding, "bad hex");
    return decode(*raw);
}

Scalar Group::decode_scalar_hex(std::string_view h) const {
    auto raw = from_hex(h);
    if (!raw) throw Error(Err::BadEncoding, "bad hex");
    return decode_scalar(*raw);
}

Scalar Group::hash_to_scalar(std::string_view domain, BytesView data) const {
    if (!is_registered_tag(domain))
        throw Error(Err::UnknownDomainTag, std::string(domain));
    Sha256 h;
    h.update(domain);
    h.update(data);
    Digest d = h.finish();
    mpz_class v = mpz_from_be(BytesView(d.data(), d.size()));
    v %= q_;
    return Scalar{v};
}

Element Group::hash_to_element(std::string_view domain, BytesView data) const {
    if (!is_registered_tag(domain))
        throw Error(Err::UnknownDomainTag, std::string(domain));
    if (profile_ != Profile::Full) {
        // Toy construction: exponent is public, so the discrete log of the
        // output is known. Insecure by design; documented in README.
        return base_mul(hash_to_scalar(domain, data));
    }
    // Candidate i is the digest of (domain || data || i); it counts as a hit
    // when the 32 bytes decode as a canonical subgroup element. Roughly half
    // of all candidates are quadratic residues, so two tries is typical.
    for (unsigned i = 0; i < 256; ++i) {
        Sha256 h;
        h.update(domain);
        h.update(data);
        std::uint8_t ctr = static_cast<std::uint8_t>(i);
        h.update(BytesView(&ctr, 1));
        Digest d = h.finish();
        Element x{mpz_from_be(BytesView(d.data(), d.size()))};
        if (is_member(x)) return x;
    }
    throw Error(Err::HashToElementFailure, "no subgroup element after 256 increments");
}

Scalar Group::random_scalar(Rng& rng) const {
    std::size_t nbits = mpz_sizeinbase(q_.get_mpz_t(), 2);
    std::size_t nbytes = (nbits + 7) / 8;
    unsigned topmask = (nbits % 8 == 0) ? 0xff : ((1u << (nbits % 8)) - 1);
    for (;;) {
        Bytes buf = rng.bytes(nbytes);
        buf[0] &= static_cast<std::uint8_t>(topmask);
        mpz_class v = mpz_from_be(buf);
        if (cmp(v, q_) < 0) return Scalar{v};
    }
}

Scalar Group::random_nonzero_scalar(Rng& rng) const {
    for (;;) {
        Scalar k = random_scalar(rng);
        if (!k.is_zero()) return k;
    }
}

KeyPair Group::keygen(Rng& rng) const {
    Scalar sk = random_nonzero_scalar(rng);
    return KeyPair{sk, base_mul(sk)};
}

}  // namespace ringledger
