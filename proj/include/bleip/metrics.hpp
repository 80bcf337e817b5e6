#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bleip/types.hpp"

namespace bleip {

/// One CoAP-like PUT as observed by the experiment harness.
struct PutRecord {
    std::uint64_t id = 0;
    std::uint32_t producer = 0;
    std::uint64_t send_us = 0;
    std::optional<std::uint64_t> ack_us;  // empty = lost (infinite RTT)
    std::uint32_t hops = 0;               // route length producer -> consumer
};

struct NodeStats {
    std::uint64_t tx_us = 0;
    std::uint64_t rx_us = 0;
    std::uint64_t frames_tx = 0;
    std::uint64_t frames_rx = 0;
    std::uint64_t dropped_adv_events = 0;
    std::uint64_t queue_drops = 0;
    std::uint64_t duplicates = 0;         // link layer dedup hits
    std::uint64_t missed_pointers = 0;
    std::uint64_t aux_loss = 0;
    std::uint64_t conn_events_skipped = 0;
    std::uint64_t buffer_high_watermark = 0;
};

/// Append-only record of everything a run produced; all reports derive from it.
struct MetricsLog {
    std::uint64_t runtime_us = 0;
    std::vector<PutRecord> puts;
    std::vector<NodeStats> nodes;
    std::uint64_t frames_transmitted = 0;
    std::uint64_t frames_delivered = 0;
    std::uint64_t frames_collided = 0;
    std::uint64_t frames_unheard = 0;
    std::uint64_t ip_duplicates = 0;  // datagrams delivered twice to any IP layer
};

namespace metrics {

/// Acked / sent. Empty when no traffic was generated.
std::optional<double> pdr(const MetricsLog& log);

/// Monotone CDF of round trip times at the given resolution. The terminal
/// value equals pdr(): lost packets have infinite RTT and stay above every
/// finite bin.
std::vector<std::pair<Dur, double>> rtt_cdf(const MetricsLog& log, Dur resolution);

/// Percentile over successful RTTs only (lost packets are excluded from
/// percentile statistics). p in [0, 100]. Empty if nothing was acked.
std::optional<Dur> rtt_percentile(const MetricsLog& log, double p);

struct Utilization {
    double tx = 0.0;
    double rx = 0.0;
};

Utilization radio_utilization(const MetricsLog& log, std::uint32_t node);

/// battery_mAh / (duty * radio_current_mA), in hours.
double lifetime_hours(double duty, double radio_current_mA, double battery_mAh);

/// Total link layer frames transmitted by all nodes.
std::uint64_t frame_total(const MetricsLog& log);

}  // namespace metrics
}  // namespace bleip
