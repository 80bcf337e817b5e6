#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bleip/adv_codec.hpp"
#include "bleip/dedup.hpp"
#include "bleip/medium.hpp"
#include "bleip/metrics.hpp"
#include "bleip/rng.hpp"
#include "bleip/scenario.hpp"
#include "bleip/types.hpp"

namespace bleip {

enum class DgramKind : std::uint8_t { DataPut, EmptyAck };

/// IPv6-level payload as the traffic app and router see it. The simulator
/// moves the encoded bytes over the air and this record alongside them.
struct IpDatagram {
    std::uint64_t id = 0;
    DgramKind kind = DgramKind::DataPut;
    BleAddress origin;
    BleAddress final_dest;
    std::uint32_t payload_len = 0;
    Instant created_at = 0;
    std::uint8_t hop_count = 0;
    std::uint64_t ack_ref = 0;  // PUT id this EmptyAck acknowledges
};

/// Deterministic discrete-event run of one scenario.
class Simulation {
public:
    explicit Simulation(ScenarioConfig cfg);

    MetricsLog run();

private:
    // ---- event queue ----------------------------------------------------
    struct Event {
        Instant t;
        std::uint64_t seq;
        std::function<void()> fn;
    };
    struct EventOrder {
        bool operator()(const Event& a, const Event& b) const
        {
            if (a.t != b.t) return a.t > b.t;
            return a.seq > b.seq;
        }
    };

    void schedule(Instant t, std::function<void()> fn);

    // ---- advertising MAC -------------------------------------------------
    struct AdvEventTx {
        std::uint32_t event_id = 0;
        NodeId sender = 0;
        std::optional<BleAddress> directed_to;
        Channel data_ch;
        std::vector<Instant> aux_starts;
        std::vector<std::uint16_t> aux_sizes;
        Instant chain_end = 0;
        std::vector<std::uint8_t> block;
        std::shared_ptr<const IpDatagram> dgram;
        std::uint8_t seq = 0;
    };

    struct AdvInstance {
        std::shared_ptr<const IpDatagram> dgram;
        std::optional<BleAddress> target;  // empty = undirected (multicast)
        std::uint8_t seq = 0;
        std::vector<std::uint8_t> block;
        codec::AuxPlan plan;
        std::uint32_t remaining = 0;  // retransmissions + 1 at creation
        bool active = false;          // events started (per-target serialization)
    };

    struct RxCommit {
        std::shared_ptr<AdvEventTx> ev;
        std::vector<bool> got;
        Instant until = 0;
    };

    struct PendingDgram {
        std::shared_ptr<const IpDatagram> dgram;
        std::optional<BleAddress> target;
    };

    struct Node {
        BleAddress addr;
        Rng rng;
        DedupTable dedup{32};
        // adv MAC
        std::uint8_t seq_counter = 0;
        std::vector<std::shared_ptr<AdvInstance>> instances;
        std::deque<PendingDgram> pending;
        Instant tx_until = 0;
        std::optional<RxCommit> commit;
        unsigned rotation = 0;
        // conn MAC
        std::uint64_t conn_buffered = 0;
        Instant busy_until = 0;
        // IP layer bookkeeping
        std::unordered_set<std::uint64_t> seen_dgrams;
    };

    void enqueue_ip_adv(NodeId n, std::shared_ptr<const IpDatagram> d,
                        std::optional<BleAddress> target);
    void maybe_start_instance(NodeId n, const std::shared_ptr<AdvInstance>& inst);
    void run_adv_event(NodeId n, const std::shared_ptr<AdvInstance>& inst);
    void consume_attempt(NodeId n, const std::shared_ptr<AdvInstance>& inst);
    void complete_instance(NodeId n, const std::shared_ptr<AdvInstance>& inst);
    void on_pointer(NodeId n, const std::shared_ptr<AdvEventTx>& ev);
    void finish_commit(NodeId n, const std::shared_ptr<AdvEventTx>& ev);
    void process_rx_payload(NodeId n, const std::shared_ptr<AdvEventTx>& ev);
    void rotate_scanner(NodeId n);
    void resume_scan(NodeId n);

    // ---- connection MAC --------------------------------------------------
    struct ConnChunk {
        std::uint16_t bytes = 0;
        std::shared_ptr<const IpDatagram> dgram;
        bool last = false;
    };

    struct Connection {
        NodeId coordinator = 0;
        NodeId subordinate = 0;
        Rng rng;
        std::uint32_t hop_increment = 5;
        std::uint8_t last_ch = 0;
        std::deque<ConnChunk> to_sub;    // coordinator -> subordinate
        std::deque<ConnChunk> to_coord;  // subordinate -> coordinator
        Instant next_anchor = 0;
        // running event state
        bool in_event = false;
        Channel ch;
        std::uint32_t pairs = 0;
        bool coord_turn = true;
        Instant event_deadline = 0;
    };

    void enqueue_ip_conn(NodeId n, std::size_t conn_idx,
                         std::shared_ptr<const IpDatagram> d);
    void conn_anchor(std::size_t ci);
    void conn_event_start(std::size_t ci);
    void conn_step(std::size_t ci);
    void conn_end_event(std::size_t ci);

    // ---- IP layer & traffic ----------------------------------------------
    void deliver_ip(NodeId n, const IpDatagram& d);
    void forward(NodeId n, IpDatagram d);
    void mac_enqueue(NodeId n, const IpDatagram& d, NodeId next_hop);
    void producer_tick(NodeId n);
    void consumer_on_put(NodeId n, const IpDatagram& d);
    void producer_on_ack(NodeId n, const IpDatagram& d);

    // ---- noise -----------------------------------------------------------
    void noise_tick(std::size_t idx);

    // ---- shared helpers --------------------------------------------------
    void transmit_frame(RadioFrame frame,
                        std::function<void(const ResolveResult&)> on_resolved);
    void finalize();
    NodeId node_of(const BleAddress& a) const;

    ScenarioConfig cfg_;
    std::vector<std::uint32_t> parents_;
    std::vector<std::uint32_t> hops_;
    std::vector<std::vector<NodeId>> next_hop_;  // [from][dest]
    std::vector<BleAddress> addrs_;              // IP nodes then noise nodes
    Medium medium_;
    MetricsLog log_;
    std::vector<Node> nodes_;
    std::vector<Connection> conns_;
    std::vector<std::vector<std::size_t>> node_conns_;
    std::vector<Rng> noise_rngs_;

    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::uint64_t next_event_seq_ = 0;
    Instant now_ = 0;
    Instant traffic_end_ = 0;
    Instant hard_end_ = 0;
    std::uint64_t next_dgram_id_ = 1;
    std::uint32_t next_adv_event_id_ = 1;
    std::unordered_map<std::uint64_t, std::size_t> put_index_;
};

/// Run one scenario to completion and return the complete log.
MetricsLog run_scenario(const ScenarioConfig& cfg);

/// One run per value of the named scenario parameter, seeds derived as
/// base seed + value index. Runs share nothing.
std::vector<MetricsLog> sweep_scenario(const ScenarioConfig& base,
                                       const std::string& param,
                                       const std::vector<std::string>& values);

}  // namespace bleip
