#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bleip {

// All simulation time is integer microseconds since run start. At BLE 1 Mbit/s
// one byte takes exactly 8 us, so every air time is integral and arithmetic is
// exact.
using Instant = std::uint64_t;
using Dur = std::uint64_t;

inline constexpr Dur kUsPerMs = 1000;
inline constexpr Dur kUsPerSec = 1'000'000;

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidConfig : SimError {
    using SimError::SimError;
};

/// 6-octet BLE link layer address. One address is reserved as the
/// broadcast/multicast destination.
struct BleAddress {
    std::array<std::uint8_t, 6> octets{};

    auto operator<=>(const BleAddress&) const = default;

    static BleAddress from_index(std::uint32_t idx)
    {
        BleAddress a;
        a.octets[0] = 0x02;  // static random address prefix
        a.octets[1] = 0x00;
        a.octets[2] = static_cast<std::uint8_t>(idx >> 24);
        a.octets[3] = static_cast<std::uint8_t>(idx >> 16);
        a.octets[4] = static_cast<std::uint8_t>(idx >> 8);
        a.octets[5] = static_cast<std::uint8_t>(idx);
        return a;
    }

    static BleAddress broadcast()
    {
        BleAddress a;
        a.octets.fill(0xff);
        return a;
    }

    std::string to_string() const
    {
        static const char* hex = "0123456789abcdef";
        std::string s;
        for (std::size_t i = 0; i < 6; ++i) {
            if (i) s += ':';
            s += hex[octets[i] >> 4];
            s += hex[octets[i] & 0xf];
        }
        return s;
    }
};

inline constexpr unsigned kNumDataChannels = 37;
inline constexpr unsigned kFirstPrimaryChannel = 37;

/// BLE channel: Data(0..36) or Primary(37..39).
struct Channel {
    std::uint8_t index = 0;

    auto operator<=>(const Channel&) const = default;

    static Channel data(unsigned i)
    {
        if (i >= kNumDataChannels) throw SimError("data channel out of range");
        return Channel{static_cast<std::uint8_t>(i)};
    }

    static Channel primary(unsigned i)
    {
        if (i < 37 || i > 39) throw SimError("primary channel out of range");
        return Channel{static_cast<std::uint8_t>(i)};
    }

    bool is_primary() const { return index >= kFirstPrimaryChannel; }
};

}  // namespace bleip
