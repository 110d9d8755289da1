#include "ringledger/rng.hpp"

#include <cstring>

namespace ringledger {

Rng::Rng(std::uint64_t seed) : Rng(BytesView(be64(seed))) {}

Rng::Rng(BytesView seed) : seed_(seed.begin(), seed.end()), offset_(block_.size()) {}

void Rng::refill() {
    Sha256 h;
    h.update(BytesView(seed_));
    h.update(BytesView(be64(counter_)));
    block_ = h.finish();
    ++counter_;
    offset_ = 0;
}

void Rng::fill(std::uint8_t* out, std::size_t n) {
    while (n > 0) {
        if (offset_ == block_.size()) refill();
        std::size_t take = std::min(n, block_.size() - offset_);
        std::memcpy(out, block_.data() + offset_, take);
        offset_ += take;
        out += take;
        n -= take;
    }
}

Bytes Rng::bytes(std::size_t n) {
    Bytes out(n);
    fill(out.data(), n);
    return out;
}

std::uint8_t Rng::byte() {
    std::uint8_t b;
    fill(&b, 1);
    return b;
}

std::uint64_t Rng::next_u64() {
    std::uint8_t buf[8];
    fill(buf, 8);
    std::uint64_t v = 0;
    for (std::uint8_t b : buf) v = (v << 8) | b;
    return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
    // Rejection sampling: discard draws above the largest multiple of bound.
    std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) return v % bound;
    }
}

Rng Rng::fork(std::string_view purpose) const {
    Bytes child = seed_;
    append(child, "/");
    append(child, purpose);
    return Rng(BytesView(child));
}

}  // namespace ringledger
