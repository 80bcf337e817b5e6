#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bleip/types.hpp"

namespace bleip {

enum class Mode { Adv, Conn };
enum class Topology { Star, Tree, Line };

/// Complete description of one run. Defaults mirror the reference testbed
/// configuration: 1 consumer + 14 producers, 1 h runtime, 50 ms advertising
/// interval with 2 retransmissions, [40:60] ms connection interval.
struct ScenarioConfig {
    Mode mode = Mode::Adv;
    Topology topology = Topology::Star;
    std::uint32_t producers = 14;
    std::uint64_t seed = 1;
    Dur duration_us = 3'600'000'000;

    // IP-BLE-Adv MAC
    Dur adv_interval_us = 50'000;
    std::uint32_t retransmissions = 2;
    Dur adv_jitter_max_us = 10'000;
    Dur setup_delay_us = 1'000;
    Dur scan_rotation_us = 30'000;
    std::uint32_t adv_instances = 10;
    std::uint32_t link_queue = 4;
    std::uint32_t aux_capacity = 245;
    std::uint32_t max_chain = 10;
    std::uint32_t service_uuid = 0xFEED;

    // 6BLEMesh baseline
    Dur conn_interval_lo_us = 40'000;
    Dur conn_interval_hi_us = 60'000;
    std::uint32_t conn_event_budget = 8;
    std::uint32_t conn_buffer_cap = 8900;

    // Traffic
    Dur producer_interval_us = 1'000'000;
    std::uint32_t put_payload = 100;
    std::uint32_t ack_payload = 8;
    Dur ack_timeout_us = 10'000'000;
    std::uint32_t per_hop_overhead = 10;
    std::uint32_t mtu = 1280;

    // Background noise: legacy advertisers outside the IP network
    std::uint32_t noise_advertisers = 0;
    Dur noise_interval_us = 100'000;
    std::uint32_t noise_pdu_len = 37;

    std::uint32_t node_count() const { return producers + 1; }

    /// Throws InvalidConfig with a human-readable reason.
    void validate() const;
};

/// Parse a flat TOML document (key = value pairs, '#' comments) into a
/// config. Unknown keys are rejected.
ScenarioConfig load_scenario(const std::string& toml_text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Set one field by its scenario-file key; used for sweep overrides. The
/// caller re-validates afterwards.
void apply_scenario_kv(ScenarioConfig& cfg, const std::string& key,
                       const std::string& value);

std::string mode_name(Mode m);
std::string topology_name(Topology t);

/// Parent link per node; node 0 is the consumer and has no parent
/// (parent[0] == 0). Star: all leaves on the consumer. Tree: binary levels
/// below the root (3 hops deep at the default 14 producers). Line: a chain
/// with the consumer at the edge.
std::vector<std::uint32_t> build_topology(Topology t, std::uint32_t producers);

/// Hop distance from each node to the consumer.
std::vector<std::uint32_t> hop_counts(const std::vector<std::uint32_t>& parents);

}  // namespace bleip
