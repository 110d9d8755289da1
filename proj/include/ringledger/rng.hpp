#pragma once

#include <cstdint>

#include "ringledger/bytes.hpp"
#include "ringledger/sha256.hpp"

namespace ringledger {

/// Deterministic byte stream: SHA-256 over seed || counter, one block at a time.
/// Same seed, same platform, same stream. Used everywhere randomness is needed
/// so that every run of the toolkit is reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    explicit Rng(BytesView seed);

    void fill(std::uint8_t* out, std::size_t n);
    Bytes bytes(std::size_t n);
    std::uint8_t byte();
    std::uint64_t next_u64();

    /// Uniform in [0, bound) via rejection on 64-bit draws. bound must be > 0.
    std::uint64_t uniform(std::uint64_t bound);

    /// Forks an independent stream labeled by purpose; the parent is untouched.
    Rng fork(std::string_view purpose) const;

private:
    Bytes seed_;
    std::uint64_t counter_ = 0;
    Digest block_{};
    std::size_t offset_;

    void refill();
};

}  // namespace ringledger
