#include <algorithm>

#include "bleip/engine.hpp"

namespace bleip {

namespace {

constexpr std::size_t kConnFramePayload = 251;  // DLE enabled
constexpr std::size_t kConnLinkOverhead = 4;

}  // namespace

void Simulation::enqueue_ip_conn(NodeId n, std::size_t ci,
                                 std::shared_ptr<const IpDatagram> d)
{
    Connection& c = conns_[ci];
    Node& nd = nodes_[n];

    std::size_t total = d->payload_len + cfg_.per_hop_overhead + kConnLinkOverhead;
    if (nd.conn_buffered + total > cfg_.conn_buffer_cap) {
        log_.nodes[n].queue_drops += 1;  // BufferOverflow
        return;
    }
    nd.conn_buffered += total;
    log_.nodes[n].buffer_high_watermark =
        std::max<std::uint64_t>(log_.nodes[n].buffer_high_watermark, nd.conn_buffered);

    auto& fifo = (c.coordinator == n) ? c.to_sub : c.to_coord;
    std::size_t remaining = total;
    while (remaining > 0) {
        std::size_t sz = std::min(kConnFramePayload, remaining);
        remaining -= sz;
        fifo.push_back(ConnChunk{static_cast<std::uint16_t>(sz), d, remaining == 0});
    }
}

void Simulation::conn_anchor(std::size_t ci)
{
    Connection& c = conns_[ci];
    Dur interval = c.rng.uniform(cfg_.conn_interval_lo_us, cfg_.conn_interval_hi_us);
    c.next_anchor = now_ + interval;
    if (c.next_anchor < hard_end_) {
        schedule(c.next_anchor, [this, ci]() { conn_anchor(ci); });
    }

    c.event_deadline = c.next_anchor - kAuxOffset;
    c.ch = Channel::data((c.last_ch + c.hop_increment) % kNumDataChannels);
    c.last_ch = c.ch.index;
    conn_event_start(ci);
}

void Simulation::conn_event_start(std::size_t ci)
{
    Connection& c = conns_[ci];
    Node& coord = nodes_[c.coordinator];
    Node& sub = nodes_[c.subordinate];

    // The single radio serializes overlapping connection events at a node:
    // the later event starts late, or is skipped if the slot is gone.
    Instant start = std::max({now_, coord.busy_until, sub.busy_until});
    Dur empty_pair = 2 * air_time(0) + kInterFrameGap;
    if (start + empty_pair > c.event_deadline) {
        log_.nodes[c.coordinator].conn_events_skipped += 1;
        return;
    }
    if (start > now_) {
        schedule(start, [this, ci]() { conn_event_start(ci); });
        return;
    }

    c.in_event = true;
    c.pairs = 0;
    c.coord_turn = true;
    coord.busy_until = c.event_deadline;
    sub.busy_until = c.event_deadline;
    medium_.set_listen(c.coordinator, c.ch, now_);
    medium_.set_listen(c.subordinate, c.ch, now_);
    conn_step(ci);
}

void Simulation::conn_step(std::size_t ci)
{
    Connection& c = conns_[ci];

    if (c.pairs >= cfg_.conn_event_budget) {
        conn_end_event(ci);
        return;
    }
    // After the mandatory exchange the event closes as soon as both
    // directions are drained.
    if (c.coord_turn && c.pairs >= 1 && c.to_sub.empty() && c.to_coord.empty()) {
        conn_end_event(ci);
        return;
    }

    NodeId sender = c.coord_turn ? c.coordinator : c.subordinate;
    NodeId peer = c.coord_turn ? c.subordinate : c.coordinator;
    auto& fifo = c.coord_turn ? c.to_sub : c.to_coord;
    bool has_data = !fifo.empty();
    std::uint16_t chunk = has_data ? fifo.front().bytes : 0;
    Dur air = air_time(chunk);

    if (now_ + air > c.event_deadline) {
        conn_end_event(ci);
        return;
    }

    RadioFrame f;
    f.sender = sender;
    f.channel = c.ch;
    f.t_start = now_;
    f.air = air;
    f.kind = FrameKind::ConnData;
    f.directed_to = nodes_[peer].addr;

    medium_.stop_listen(sender, now_);
    transmit_frame(f, [this, ci, sender, peer, has_data](const ResolveResult& res) {
        Connection& c = conns_[ci];
        if (!c.in_event) return;

        medium_.set_listen(sender, c.ch, now_);

        bool delivered = std::find(res.delivered_to.begin(), res.delivered_to.end(),
                                   peer) != res.delivered_to.end();
        if (has_data && delivered) {
            // Ack/retry is abstracted: a chunk leaves the FIFO only once it
            // made it across.
            auto& fifo = c.coord_turn ? c.to_sub : c.to_coord;
            ConnChunk chunk = fifo.front();
            fifo.pop_front();
            nodes_[sender].conn_buffered -= chunk.bytes;
            if (chunk.last) deliver_ip(peer, *chunk.dgram);
        }

        if (!c.coord_turn) c.pairs += 1;
        c.coord_turn = !c.coord_turn;
        schedule(now_ + kInterFrameGap, [this, ci]() { conn_step(ci); });
    });
}

void Simulation::conn_end_event(std::size_t ci)
{
    Connection& c = conns_[ci];
    c.in_event = false;
    // Release the radio only if this event still owns the busy window. The
    // closing step can run a beat after the deadline, by which time another
    // connection may already have claimed the node for its own event.
    if (nodes_[c.coordinator].busy_until == c.event_deadline) {
        nodes_[c.coordinator].busy_until = now_;
    }
    if (nodes_[c.subordinate].busy_until == c.event_deadline) {
        nodes_[c.subordinate].busy_until = now_;
    }
    medium_.stop_listen(c.coordinator, now_);
    medium_.stop_listen(c.subordinate, now_);
}

}  // namespace bleip
