#include "bleip/engine.hpp"

#include <algorithm>

namespace bleip {

namespace {

std::vector<BleAddress> make_addresses(const ScenarioConfig& cfg)
{
    std::vector<BleAddress> addrs;
    for (std::uint32_t i = 0; i < cfg.node_count(); ++i) {
        addrs.push_back(BleAddress::from_index(i));
    }
    // Noise advertisers live outside the IP network but share the medium.
    for (std::uint32_t i = 0; i < cfg.noise_advertisers; ++i) {
        addrs.push_back(BleAddress::from_index(0x00100000u + i));
    }
    return addrs;
}

}  // namespace

Simulation::Simulation(ScenarioConfig cfg)
    : cfg_(std::move(cfg)),
      parents_(build_topology(cfg_.topology, cfg_.producers)),
      hops_(hop_counts(parents_)),
      addrs_(make_addresses(cfg_)),
      medium_(addrs_)
{
    cfg_.validate();

    std::uint32_t n = cfg_.node_count();
    nodes_.resize(n);
    log_.nodes.resize(n);
    node_conns_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        nodes_[i].addr = addrs_[i];
        nodes_[i].rng = Rng(cfg_.seed, i);
    }

    // Static next-hop tables from the topology's parent links.
    next_hop_.assign(n, std::vector<NodeId>(n));
    for (std::uint32_t from = 0; from < n; ++from) {
        for (std::uint32_t dest = 0; dest < n; ++dest) {
            if (from == dest) {
                next_hop_[from][dest] = dest;
                continue;
            }
            // Path of dest towards the root; if it passes through `from`,
            // the next hop is the child on that path, otherwise the parent.
            std::uint32_t cur = dest;
            std::uint32_t child = dest;
            bool through = false;
            while (cur != 0) {
                if (parents_[cur] == from) {
                    through = true;
                    child = cur;
                    break;
                }
                cur = parents_[cur];
            }
            next_hop_[from][dest] = through ? child : parents_[from];
        }
    }

    if (cfg_.mode == Mode::Conn) {
        for (std::uint32_t i = 1; i < n; ++i) {
            Connection c;
            c.coordinator = parents_[i];
            c.subordinate = i;
            c.rng = Rng(cfg_.seed, 1000 + conns_.size());
            c.hop_increment = static_cast<std::uint32_t>(c.rng.uniform(5, 16));
            c.last_ch = static_cast<std::uint8_t>(c.rng.uniform(0, kNumDataChannels - 1));
            conns_.push_back(c);
            node_conns_[c.coordinator].push_back(conns_.size() - 1);
            node_conns_[c.subordinate].push_back(conns_.size() - 1);
        }
    }

    for (std::uint32_t i = 0; i < cfg_.noise_advertisers; ++i) {
        noise_rngs_.emplace_back(cfg_.seed, 2000 + i);
    }
}

void Simulation::schedule(Instant t, std::function<void()> fn)
{
    if (t < now_) throw SimError("scheduled event in the past");
    queue_.push(Event{t, next_event_seq_++, std::move(fn)});
}

NodeId Simulation::node_of(const BleAddress& a) const
{
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].addr == a) return i;
    }
    throw SimError("unknown node address " + a.to_string());
}

void Simulation::transmit_frame(RadioFrame frame,
                                std::function<void(const ResolveResult&)> on_resolved)
{
    FrameId id = medium_.transmit(frame);
    if (frame.sender < log_.nodes.size()) {
        log_.nodes[frame.sender].frames_tx += 1;
        log_.nodes[frame.sender].tx_us += frame.air;
    }
    schedule(frame.t_end(), [this, id, cb = std::move(on_resolved)]() {
        ResolveResult res = medium_.resolve(id, now_);
        for (NodeId r : res.delivered_to) {
            if (r < log_.nodes.size()) log_.nodes[r].frames_rx += 1;
        }
        cb(res);
    });
}

MetricsLog Simulation::run()
{
    traffic_end_ = cfg_.duration_us;
    // The run continues for one ack-timeout after traffic stops so in-flight
    // packets settle before finalization.
    hard_end_ = cfg_.duration_us + cfg_.ack_timeout_us;

    if (cfg_.mode == Mode::Adv) {
        for (NodeId i = 0; i < nodes_.size(); ++i) {
            medium_.set_listen(i, Channel::primary(37), 0);
            schedule(cfg_.scan_rotation_us, [this, i]() { rotate_scanner(i); });
        }
    } else {
        for (std::size_t ci = 0; ci < conns_.size(); ++ci) {
            Instant first = conns_[ci].rng.uniform(0, (cfg_.conn_interval_lo_us +
                                                       cfg_.conn_interval_hi_us) / 2);
            schedule(first, [this, ci]() { conn_anchor(ci); });
        }
    }

    for (NodeId i = 1; i < nodes_.size(); ++i) {
        Instant phase = nodes_[i].rng.uniform(0, cfg_.producer_interval_us - 1);
        schedule(phase, [this, i]() { producer_tick(i); });
    }

    for (std::size_t j = 0; j < cfg_.noise_advertisers; ++j) {
        Instant phase = noise_rngs_[j].uniform(0, cfg_.noise_interval_us - 1);
        schedule(phase, [this, j]() { noise_tick(j); });
    }

    while (!queue_.empty()) {
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.t;
        ev.fn();
    }

    finalize();
    return log_;
}

void Simulation::finalize()
{
    Instant end = std::max(now_, hard_end_);
    log_.runtime_us = end;
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        medium_.stop_listen(i, end);
        log_.nodes[i].rx_us = medium_.rx_time(i);
    }

    log_.frames_transmitted = medium_.frames_transmitted();
    log_.frames_delivered = medium_.frames_delivered();
    log_.frames_collided = medium_.frames_collided();
    log_.frames_unheard = medium_.frames_unheard();
    if (log_.frames_transmitted !=
        log_.frames_delivered + log_.frames_collided + log_.frames_unheard) {
        throw SimError("frame conservation violated");
    }
}

// ---- IP layer & traffic ---------------------------------------------------

void Simulation::producer_tick(NodeId n)
{
    if (now_ >= traffic_end_) return;

    IpDatagram d;
    d.id = next_dgram_id_++;
    d.kind = DgramKind::DataPut;
    d.origin = nodes_[n].addr;
    d.final_dest = nodes_[0].addr;
    d.payload_len = cfg_.put_payload;
    d.created_at = now_;

    put_index_[d.id] = log_.puts.size();
    log_.puts.push_back(PutRecord{d.id, n, now_, std::nullopt, hops_[n]});

    mac_enqueue(n, d, next_hop_[n][0]);

    Dur itv = cfg_.producer_interval_us;
    Dur next = itv - itv / 2 + nodes_[n].rng.uniform(0, itv);  // itv +- 50%
    if (now_ + next < traffic_end_ + itv) {
        schedule(now_ + next, [this, n]() { producer_tick(n); });
    }
}

void Simulation::deliver_ip(NodeId n, const IpDatagram& d)
{
    if (!nodes_[n].seen_dgrams.insert(d.id).second) {
        log_.ip_duplicates += 1;
    }
    if (d.final_dest == nodes_[n].addr || d.final_dest == BleAddress::broadcast()) {
        if (d.kind == DgramKind::DataPut) {
            consumer_on_put(n, d);
        } else {
            producer_on_ack(n, d);
        }
        return;
    }
    forward(n, d);
}

void Simulation::forward(NodeId n, IpDatagram d)
{
    NodeId dest;
    try {
        dest = node_of(d.final_dest);
    } catch (const SimError&) {
        log_.nodes[n].queue_drops += 1;  // NoRoute
        return;
    }
    d.hop_count += 1;
    mac_enqueue(n, d, next_hop_[n][dest]);
}

void Simulation::mac_enqueue(NodeId n, const IpDatagram& d, NodeId next_hop)
{
    auto dgram = std::make_shared<const IpDatagram>(d);
    if (cfg_.mode == Mode::Adv) {
        std::optional<BleAddress> target;
        if (d.final_dest != BleAddress::broadcast()) target = nodes_[next_hop].addr;
        enqueue_ip_adv(n, dgram, target);
        return;
    }
    for (std::size_t ci : node_conns_[n]) {
        const Connection& c = conns_[ci];
        if ((c.coordinator == n && c.subordinate == next_hop) ||
            (c.subordinate == n && c.coordinator == next_hop)) {
            enqueue_ip_conn(n, ci, dgram);
            return;
        }
    }
    log_.nodes[n].queue_drops += 1;  // no connection to the next hop
}

void Simulation::consumer_on_put(NodeId n, const IpDatagram& d)
{
    if (n != 0) return;  // PUT addressed to a producer: not part of the model

    // Duplicate PUTs are acked again (the producer may have missed the
    // previous ACK) but the reception itself was already counted.
    IpDatagram ack;
    ack.id = next_dgram_id_++;
    ack.kind = DgramKind::EmptyAck;
    ack.origin = nodes_[n].addr;
    ack.final_dest = d.origin;
    ack.payload_len = cfg_.ack_payload;
    ack.created_at = now_;
    ack.ack_ref = d.id;

    NodeId dest = node_of(d.origin);
    mac_enqueue(n, ack, next_hop_[n][dest]);
}

void Simulation::producer_on_ack(NodeId n, const IpDatagram& d)
{
    auto it = put_index_.find(d.ack_ref);
    if (it == put_index_.end()) return;
    PutRecord& rec = log_.puts[it->second];
    if (rec.producer != n) return;
    if (rec.ack_us) return;
    if (now_ - rec.send_us > cfg_.ack_timeout_us) return;  // lost: infinite RTT
    rec.ack_us = now_;
}

// ---- noise ----------------------------------------------------------------

void Simulation::noise_tick(std::size_t idx)
{
    NodeId sender = static_cast<NodeId>(cfg_.node_count() + idx);
    Dur air = air_time(cfg_.noise_pdu_len);
    Instant t = now_;
    for (unsigned ch = 37; ch <= 39; ++ch) {
        RadioFrame f;
        f.sender = sender;
        f.channel = Channel::primary(ch);
        f.t_start = t;
        f.air = air;
        f.kind = FrameKind::LegacyAdv;
        schedule(t, [this, f]() { transmit_frame(f, [](const ResolveResult&) {}); });
        t += air + kInterFrameGap;
    }

    Instant next = now_ + cfg_.noise_interval_us +
                   noise_rngs_[idx].uniform(0, cfg_.adv_jitter_max_us);
    if (next < hard_end_) {
        schedule(next, [this, idx]() { noise_tick(idx); });
    }
}

MetricsLog run_scenario(const ScenarioConfig& cfg)
{
    Simulation sim(cfg);
    return sim.run();
}

std::vector<MetricsLog> sweep_scenario(const ScenarioConfig& base,
                                       const std::string& param,
                                       const std::vector<std::string>& values)
{
    std::vector<MetricsLog> logs;
    logs.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioConfig cfg = base;
        apply_scenario_kv(cfg, param, values[i]);
        cfg.seed = base.seed + i;
        cfg.validate();
        logs.push_back(run_scenario(cfg));
    }
    return logs;
}

}  // namespace bleip
