/**
 * Copyright 2026 The alterbft-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alterbft {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

using Epoch = std::uint64_t;

// Simulated time is integer microseconds since the start of a run.
using Duration = std::chrono::microseconds;
using SimTime = std::chrono::microseconds;

constexpr Duration from_ms(double ms) {
    return Duration{static_cast<std::int64_t>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5))};
}
constexpr double to_ms(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

struct ReplicaId {
    std::uint32_t index = 0;

    auto operator<=>(const ReplicaId&) const = default;
};

inline ReplicaId leader_of(Epoch e, std::uint32_t n) {
    return ReplicaId{static_cast<std::uint32_t>(e % n)};
}

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

struct BlockId {
    static constexpr std::size_t kSize = 32;
    std::array<std::uint8_t, kSize> digest{};

    auto operator<=>(const BlockId&) const = default;

    std::string hex() const { return to_hex(digest); }
    // First 8 hex chars, for debug output.
    std::string short_hex() const { return hex().substr(0, 8); }
    static BlockId from_hex(std::string_view hex);
};

inline constexpr std::size_t kSignatureSize = 64;
using Signature = std::array<std::uint8_t, kSignatureSize>;

enum class MessageClass : std::uint8_t { Small, Large };

inline std::string_view to_string(MessageClass c) { return c == MessageClass::Small ? "S" : "L"; }

// Type S iff the encoded message fits in the small-message threshold (inclusive).
inline MessageClass classify(std::size_t encoded_bytes, std::size_t small_threshold) {
    return encoded_bytes <= small_threshold ? MessageClass::Small : MessageClass::Large;
}

}  // namespace alterbft
