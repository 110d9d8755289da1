#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ringledger {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

inline void append(Bytes& out, BytesView more) {
    out.insert(out.end(), more.begin(), more.end());
}

inline void append(Bytes& out, std::string_view s) {
    out.insert(out.end(), s.begin(), s.end());
}

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

/// Big-endian fixed-width integer encodings.
Bytes be64(std::uint64_t v);
Bytes be32(std::uint32_t v);

/// Lowercase hex. decode returns nullopt on odd length or non-hex input.
std::string to_hex(BytesView data);
std::optional<Bytes> from_hex(std::string_view hex);

}  // namespace ringledger
