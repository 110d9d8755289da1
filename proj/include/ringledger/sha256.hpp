#pragma once

#include <array>

#include "ringledger/bytes.hpp"

namespace ringledger {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(BytesView data);

/// Incremental interface for multi-part inputs.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(BytesView data);
    Sha256& update(std::string_view s);
    Digest finish();

private:
    void* ctx_;
};

}  // namespace ringledger
