#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bleip/types.hpp"

namespace bleip {

enum class FrameKind : std::uint8_t { ExtInd, AuxAdv, AuxChain, ConnData, LegacyAdv };

inline constexpr Dur kPhyOverheadBytes = 10;  // preamble 1, access addr 4, header 2, CRC 3
inline constexpr Dur kBitUsPerByte = 8;       // 1 Mbit/s

/// On-air duration of one PDU at BLE 1 Mbit: (10 + payload) bytes * 8 us.
inline Dur air_time(std::size_t pdu_payload_len)
{
    if (pdu_payload_len > 255) throw SimError("PDU payload exceeds 255 bytes");
    return (kPhyOverheadBytes + pdu_payload_len) * kBitUsPerByte;
}

inline constexpr std::size_t kExtIndPduLen = 9;       // pointer packet payload
inline constexpr Dur kInterFrameGap = 150;            // between pointer copies / conn frames
inline constexpr Dur kAuxOffset = 300;                // last pointer end -> aux start
inline constexpr Dur kChainGap = 300;                 // between chained aux frames
inline constexpr Dur kChannelSwitchTime = 150;        // radio retune blind spot
inline constexpr std::size_t kLegacyNoisePduLen = 37;

using NodeId = std::uint32_t;
using FrameId = std::uint64_t;

struct RadioFrame {
    FrameId id = 0;
    NodeId sender = 0;
    Channel channel;
    Instant t_start = 0;
    Dur air = 0;
    FrameKind kind = FrameKind::LegacyAdv;
    std::optional<BleAddress> directed_to;
    std::uint32_t event_id = 0;
    std::uint8_t chain_index = 0;

    Instant t_end() const { return t_start + air; }
};

struct ResolveResult {
    std::vector<NodeId> delivered_to;
    bool collided = false;
};

/// Single collision domain shared by all radios. Any temporal overlap of two
/// frames on the same channel destroys both for every listener; there is no
/// capture effect and no path loss (all nodes are in range of each other).
///
/// Listener bookkeeping lives here as well: a node listens on at most one
/// channel at a time and receives a frame only if it held RX on the frame's
/// channel for the frame's entire duration. RX time is accumulated per node
/// for the radio utilization metrics.
class Medium {
public:
    explicit Medium(std::vector<BleAddress> node_addrs);

    /// Register a frame on the air. The caller must schedule resolve() at the
    /// frame's end time. Throws if the sender already has a frame in flight
    /// (a scheduling bug in the caller).
    FrameId transmit(const RadioFrame& frame);

    /// Deliver or destroy a frame at its end time.
    ResolveResult resolve(FrameId id, Instant now);

    /// Tune a node's receiver to a channel. `from` is when reception becomes
    /// effective (a retune costs kChannelSwitchTime of blind spot). Any
    /// previous listening interval is closed and accounted.
    void set_listen(NodeId node, Channel ch, Instant from);

    /// Radio leaves RX (transmission start or end of run).
    void stop_listen(NodeId node, Instant now);

    bool is_listening(NodeId node) const { return listeners_[node].active; }

    /// Total accumulated RX time; call stop_listen() for all nodes first to
    /// flush open intervals.
    Dur rx_time(NodeId node) const { return listeners_[node].rx_us; }

    std::uint64_t frames_transmitted() const { return transmitted_; }
    std::uint64_t frames_delivered() const { return delivered_; }
    std::uint64_t frames_collided() const { return collided_; }
    std::uint64_t frames_unheard() const { return unheard_; }

private:
    struct Listener {
        bool active = false;
        Channel ch;
        Instant since = 0;
        Dur rx_us = 0;
    };

    struct ActiveFrame {
        RadioFrame frame;
        bool collided = false;
    };

    std::vector<BleAddress> addrs_;
    std::vector<Listener> listeners_;
    std::vector<ActiveFrame> active_;
    FrameId next_id_ = 1;
    std::uint64_t transmitted_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t collided_ = 0;
    std::uint64_t unheard_ = 0;
};

}  // namespace bleip
