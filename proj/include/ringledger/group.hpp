#pragma once

#include <gmpxx.h>

#include <optional>
#include <string_view>
#include <vector>

#include "ringledger/bytes.hpp"
#include "ringledger/errors.hpp"
#include "ringledger/rng.hpp"

namespace ringledger {

enum class Profile { Toy, ToyLarge, Full };

std::string_view profile_name(Profile p);
std::optional<Profile> profile_from_string(std::string_view s);

/// Integer in [0, q). Always reduced; arithmetic goes through Group.
struct Scalar {
    mpz_class v;

    bool operator==(const Scalar& o) const { return cmp(v, o.v) == 0; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool is_zero() const { return sgn(v) == 0; }
};

/// Subgroup element, stored as its residue mod p.
struct Element {
    mpz_class v;

    bool operator==(const Element& o) const { return cmp(v, o.v) == 0; }
    bool operator!=(const Element& o) const { return !(*this == o); }
};

struct KeyPair {
    Scalar secret;
    Element pub;
};

namespace tags {
inline constexpr std::string_view ckd_mult = "ckd-mult";
inline constexpr std::string_view ckd_add = "ckd-add";
inline constexpr std::string_view stealth_shared = "stealth-shared";
inline constexpr std::string_view ring_challenge = "ring-challenge";
inline constexpr std::string_view keyimage_base_fs = "keyimage-base-fs";
inline constexpr std::string_view keyimage_base_fz = "keyimage-base-fz";
}  // namespace tags

bool is_registered_tag(std::string_view domain);

/// Prime-order subgroup of Z_p^* (p = 2q+1 safe prime), written additively:
/// add() is the group operation, scalar_mul() is exponentiation. Three fixed
/// instantiations:
///   Toy      p=23, q=11, g=4: hand-checkable, discrete log by table scan
///   ToyLarge q=1000151, p=2000303, g=4: statistical tests, still brute-forceable
///   Full     256-bit safe prime: realistic sizes; not for production use
class Group {
public:
    static const Group& get(Profile profile);

    Profile profile() const { return profile_; }
    const mpz_class& p() const { return p_; }
    const mpz_class& q() const { return q_; }
    const Element& generator() const { return g_; }
    Element identity() const { return Element{1}; }

    std::size_t element_size() const { return element_size_; }
    std::size_t scalar_size() const { return scalar_size_; }

    bool is_member(const Element& x) const;

    Element add(const Element& a, const Element& b) const;
    Element scalar_mul(const Scalar& k, const Element& x) const;
    Element base_mul(const Scalar& k) const;

    Scalar scalar_from_u64(std::uint64_t v) const;
    Scalar scalar_add(const Scalar& a, const Scalar& b) const;
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const;
    Scalar scalar_mul_s(const Scalar& a, const Scalar& b) const;

    Bytes encode(const Element& x) const;
    Element decode(BytesView data) const;  // throws BadEncoding
    Bytes encode_scalar(const Scalar& k) const;
    Scalar decode_scalar(BytesView data) const;  // throws BadEncoding
    std::string hex(const Element& x) const { return to_hex(encode(x)); }
    std::string hex_scalar(const Scalar& k) const { return to_hex(encode_scalar(k)); }
    Element decode_hex(std::string_view h) const;
    Scalar decode_scalar_hex(std::string_view h) const;

    /// digest(domain || data) big-endian, reduced mod q. Unknown tag throws.
    Scalar hash_to_scalar(std::string_view domain, BytesView data) const;

    /// Deterministic subgroup member. Toy profiles: g^hash_to_scalar(domain,data),
    /// which leaks the discrete log; fine for functional tests, useless against an
    /// adversary. Full: try-and-increment on the digest until it decodes as a
    /// subgroup element; throws after 256 increments.
    Element hash_to_element(std::string_view domain, BytesView data) const;

    Scalar random_scalar(Rng& rng) const;           // uniform [0, q)
    Scalar random_nonzero_scalar(Rng& rng) const;   // uniform [1, q)
    KeyPair keygen(Rng& rng) const;

private:
    Group(Profile profile, mpz_class p, mpz_class q, mpz_class g,
          std::size_t element_size, std::size_t scalar_size);

    Profile profile_;
    mpz_class p_;
    mpz_class q_;
    Element g_;
    std::size_t element_size_;
    std::size_t scalar_size_;
    std::vector<unsigned> toy_table_;  // sorted subgroup residues; Toy only
};

mpz_class mpz_from_be(BytesView data);
Bytes mpz_to_be(const mpz_class& v, std::size_t width);

}  // namespace ringledger
