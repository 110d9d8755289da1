#pragma once

#include <span>

#include "ringledger/group.hpp"

namespace ringledger {

/// Child-key derivation. Two methods over the same master key:
///   Mult: k(x) = k̂·H(enc(k̂·G) || x)      K(x) = H(enc(K̂) || x)·K̂
///   Add:  k(x) = k̂ + H(enc(k̂·G) || x)    K(x) = K̂ + H(enc(K̂) || x)·G
/// Public derivation reads no secret, and the diagram commutes:
/// ckd_public(K̂, x) = ckd_private(k̂, x)·G.
///
/// A derived zero key (identity public key) is an error, not a retry: the
/// caller picks a different index so derivation stays a pure function.

enum class CkdMethod { Mult, Add };

using MasterKeyPair = KeyPair;
using DerivationIndex = Bytes;  // non-empty raw bytes

Scalar ckd_private_mult(const Group& g, const Scalar& master, BytesView x);
Element ckd_public_mult(const Group& g, const Element& master_pub, BytesView x);
Scalar ckd_private_add(const Group& g, const Scalar& master, BytesView x);
Element ckd_public_add(const Group& g, const Element& master_pub, BytesView x);

Scalar ckd_private(const Group& g, CkdMethod m, const Scalar& master, BytesView x);
Element ckd_public(const Group& g, CkdMethod m, const Element& master_pub, BytesView x);

/// Folds the method over path left to right. DerivedZero failures carry the
/// 1-based depth of the level that produced zero.
KeyPair derive_chain(const Group& g, CkdMethod m, const MasterKeyPair& master,
                     std::span<const DerivationIndex> path);
Element derive_chain_public(const Group& g, CkdMethod m, const Element& master_pub,
                            std::span<const DerivationIndex> path);

}  // namespace ringledger
