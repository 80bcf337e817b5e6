#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bleip/types.hpp"

namespace bleip::codec {

inline constexpr std::size_t kSegmentDataCapacity = 252;
inline constexpr std::size_t kSegmentOverhead = 4;  // length, type, 16-bit UUID
inline constexpr std::uint8_t kAdTypeServiceData16 = 0x16;
inline constexpr std::uint16_t kDefaultServiceUuid = 0xFEED;
inline constexpr std::size_t kMtu = 1280;
inline constexpr std::size_t kDefaultAuxCapacity = 245;
inline constexpr std::size_t kDefaultMaxChain = 10;

struct PayloadTooLarge : SimError {
    using SimError::SimError;
};
struct MalformedBlock : SimError {
    using SimError::SimError;
};
struct NoIpSegments : SimError {
    using SimError::SimError;
};
struct ChainOverflow : SimError {
    using SimError::SimError;
};
struct ReassemblyIncomplete : SimError {
    using SimError::SimError;
};

/// Encoded advertising-data block: a continuous list of chained AD segments
/// carrying [seq | ip payload]. Every segment except the last holds exactly
/// 252 data bytes.
struct AdBlock {
    std::vector<std::uint8_t> bytes;
    std::uint8_t seq = 0;
    std::size_t ip_len = 0;

    std::size_t size() const { return bytes.size(); }
    std::size_t segments() const { return (ip_len + 1 + kSegmentDataCapacity - 1) / kSegmentDataCapacity; }
};

struct Decoded {
    std::uint8_t seq = 0;
    std::vector<std::uint8_t> ip_payload;
};

/// How one AD block is fragmented into chained auxiliary frames: every frame
/// except the last is filled to aux capacity.
struct AuxPlan {
    std::vector<std::uint16_t> frame_sizes;

    std::size_t frames() const { return frame_sizes.size(); }
    std::size_t total() const
    {
        std::size_t s = 0;
        for (auto f : frame_sizes) s += f;
        return s;
    }
};

AdBlock encode(std::span<const std::uint8_t> ip_payload, std::uint8_t seq,
               std::uint16_t service_uuid = kDefaultServiceUuid,
               std::size_t mtu = kMtu);

Decoded decode(std::span<const std::uint8_t> block,
               std::uint16_t expected_uuid = kDefaultServiceUuid);

AuxPlan plan_aux(std::size_t block_size,
                 std::size_t aux_capacity = kDefaultAuxCapacity,
                 std::size_t max_chain = kDefaultMaxChain);

/// Concatenate the aux frames of one advertising event back into the AD
/// block. A missing frame makes the whole event unusable.
std::vector<std::uint8_t> reassemble(
    const std::vector<std::optional<std::vector<std::uint8_t>>>& frames);

}  // namespace bleip::codec
