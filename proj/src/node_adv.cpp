#include <algorithm>

#include "bleip/engine.hpp"

namespace bleip {

namespace {

const std::array<unsigned, 3> kPrimaryRotation = {37, 38, 39};

}  // namespace

void Simulation::enqueue_ip_adv(NodeId n, std::shared_ptr<const IpDatagram> d,
                                std::optional<BleAddress> target)
{
    Node& nd = nodes_[n];

    if (nd.instances.size() >= cfg_.adv_instances) {
        if (nd.pending.size() >= cfg_.link_queue) {
            log_.nodes[n].queue_drops += 1;
            return;
        }
        nd.pending.push_back(PendingDgram{std::move(d), target});
        return;
    }

    auto inst = std::make_shared<AdvInstance>();
    inst->dgram = std::move(d);
    inst->target = target;
    inst->seq = nd.seq_counter++;
    inst->remaining = cfg_.retransmissions + 1;

    std::size_t ip_len = inst->dgram->payload_len + cfg_.per_hop_overhead;
    std::vector<std::uint8_t> payload(ip_len, 0);
    codec::AdBlock block = codec::encode(payload, inst->seq,
                                         static_cast<std::uint16_t>(cfg_.service_uuid),
                                         cfg_.mtu);
    inst->plan = codec::plan_aux(block.size(), cfg_.aux_capacity, cfg_.max_chain);
    inst->block = std::move(block.bytes);

    nd.instances.push_back(inst);
    maybe_start_instance(n, inst);
}

void Simulation::maybe_start_instance(NodeId n, const std::shared_ptr<AdvInstance>& inst)
{
    if (inst->active) return;
    // Events for the same link destination never interleave: with the
    // equality-only dedup scheme an interleaved older sequence number would
    // slip through as fresh data at the receiver.
    for (const auto& other : nodes_[n].instances) {
        if (other != inst && other->active && other->target == inst->target) return;
    }
    inst->active = true;
    schedule(now_ + cfg_.setup_delay_us,
             [this, n, inst]() { run_adv_event(n, inst); });
}

void Simulation::run_adv_event(NodeId n, const std::shared_ptr<AdvInstance>& inst)
{
    Node& nd = nodes_[n];

    // Busy receiving an aux chain: the controller cancels this advertising
    // event rather than preempt the reception.
    if (nd.commit && nd.commit->until > now_) {
        log_.nodes[n].dropped_adv_events += 1;
        consume_attempt(n, inst);
        return;
    }
    // Another instance is on air: events serialize on the single radio.
    if (nd.tx_until > now_) {
        schedule(nd.tx_until, [this, n, inst]() { run_adv_event(n, inst); });
        return;
    }

    auto ev = std::make_shared<AdvEventTx>();
    ev->event_id = next_adv_event_id_++;
    ev->sender = n;
    ev->directed_to = inst->target;
    ev->data_ch = Channel::data(static_cast<unsigned>(nd.rng.uniform(0, kNumDataChannels - 1)));
    ev->block = inst->block;
    ev->aux_sizes = inst->plan.frame_sizes;
    ev->dgram = inst->dgram;
    ev->seq = inst->seq;

    Dur ptr_air = air_time(kExtIndPduLen);
    Instant t = now_;
    std::array<Instant, 3> ptr_starts;
    for (int i = 0; i < 3; ++i) {
        ptr_starts[static_cast<std::size_t>(i)] = t;
        t += ptr_air + (i < 2 ? kInterFrameGap : 0);
    }
    Instant aux_t = t + kAuxOffset;
    for (std::uint16_t sz : ev->aux_sizes) {
        ev->aux_starts.push_back(aux_t);
        aux_t += air_time(sz) + kChainGap;
    }
    ev->chain_end = ev->aux_starts.back() + air_time(ev->aux_sizes.back());

    nd.tx_until = ev->chain_end;
    medium_.stop_listen(n, now_);

    for (int i = 0; i < 3; ++i) {
        RadioFrame f;
        f.sender = n;
        f.channel = Channel::primary(kPrimaryRotation[static_cast<std::size_t>(i)]);
        f.t_start = ptr_starts[static_cast<std::size_t>(i)];
        f.air = ptr_air;
        f.kind = FrameKind::ExtInd;
        f.directed_to = ev->directed_to;
        f.event_id = ev->event_id;
        schedule(f.t_start, [this, f, ev]() {
            transmit_frame(f, [this, ev](const ResolveResult& res) {
                for (NodeId r : res.delivered_to) on_pointer(r, ev);
            });
        });
    }
    for (std::size_t i = 0; i < ev->aux_starts.size(); ++i) {
        RadioFrame f;
        f.sender = n;
        f.channel = ev->data_ch;
        f.t_start = ev->aux_starts[i];
        f.air = air_time(ev->aux_sizes[i]);
        f.kind = i == 0 ? FrameKind::AuxAdv : FrameKind::AuxChain;
        f.directed_to = ev->directed_to;
        f.event_id = ev->event_id;
        f.chain_index = static_cast<std::uint8_t>(i);
        bool last = i + 1 == ev->aux_starts.size();
        schedule(f.t_start, [this, f, ev, i, last]() {
            transmit_frame(f, [this, ev, i, last](const ResolveResult& res) {
                for (NodeId r : res.delivered_to) {
                    Node& rx = nodes_[r];
                    if (rx.commit && rx.commit->ev->event_id == ev->event_id) {
                        rx.commit->got[i] = true;
                    }
                }
                // The chain is off the air; settle every receiver that
                // committed to this event, whether or not it heard the tail.
                if (last) {
                    for (NodeId r = 0; r < nodes_.size(); ++r) {
                        if (nodes_[r].commit &&
                            nodes_[r].commit->ev->event_id == ev->event_id) {
                            finish_commit(r, ev);
                        }
                    }
                }
            });
        });
    }

    // Back to scanning once the chain is off the air.
    schedule(ev->chain_end, [this, n]() {
        if (nodes_[n].tx_until > now_) return;  // another event already started
        resume_scan(n);
    });

    consume_attempt(n, inst);
}

void Simulation::consume_attempt(NodeId n, const std::shared_ptr<AdvInstance>& inst)
{
    inst->remaining -= 1;
    if (inst->remaining > 0) {
        Dur jitter = nodes_[n].rng.uniform(0, cfg_.adv_jitter_max_us);
        schedule(now_ + cfg_.adv_interval_us + jitter,
                 [this, n, inst]() { run_adv_event(n, inst); });
        return;
    }
    complete_instance(n, inst);
}

void Simulation::complete_instance(NodeId n, const std::shared_ptr<AdvInstance>& inst)
{
    Node& nd = nodes_[n];
    auto it = std::find(nd.instances.begin(), nd.instances.end(), inst);
    if (it != nd.instances.end()) nd.instances.erase(it);

    // Unblock the oldest instance that waited on this one's destination.
    for (const auto& other : nd.instances) {
        if (!other->active && other->target == inst->target) {
            maybe_start_instance(n, other);
            break;
        }
    }
    // Promote queued datagrams into the freed slot.
    while (!nd.pending.empty() && nd.instances.size() < cfg_.adv_instances) {
        PendingDgram p = nd.pending.front();
        nd.pending.pop_front();
        enqueue_ip_adv(n, p.dgram, p.target);
    }
}

void Simulation::on_pointer(NodeId n, const std::shared_ptr<AdvEventTx>& ev)
{
    Node& nd = nodes_[n];
    if (nd.commit) {
        if (nd.commit->ev->event_id == ev->event_id) return;  // second copy
        log_.nodes[n].missed_pointers += 1;
        return;
    }

    RxCommit c;
    c.ev = ev;
    c.got.assign(ev->aux_sizes.size(), false);
    c.until = ev->chain_end;
    nd.commit = std::move(c);

    medium_.stop_listen(n, now_);
    medium_.set_listen(n, ev->data_ch, now_ + kChannelSwitchTime);
    // The sender's last chained frame settles the commit once it resolves.
}

void Simulation::finish_commit(NodeId n, const std::shared_ptr<AdvEventTx>& ev)
{
    Node& nd = nodes_[n];
    if (!nd.commit || nd.commit->ev->event_id != ev->event_id) return;

    bool complete = std::all_of(nd.commit->got.begin(), nd.commit->got.end(),
                                [](bool b) { return b; });
    nd.commit.reset();
    if (complete) {
        process_rx_payload(n, ev);
    } else {
        log_.nodes[n].aux_loss += 1;
    }
    if (nd.tx_until <= now_) resume_scan(n);
}

void Simulation::process_rx_payload(NodeId n, const std::shared_ptr<AdvEventTx>& ev)
{
    // Rebuild the chain as the controller handed it over and run it through
    // the codec path.
    std::vector<std::optional<std::vector<std::uint8_t>>> frames;
    std::size_t off = 0;
    for (std::uint16_t sz : ev->aux_sizes) {
        frames.emplace_back(std::vector<std::uint8_t>(ev->block.begin() + off,
                                                      ev->block.begin() + off + sz));
        off += sz;
    }
    std::vector<std::uint8_t> block = codec::reassemble(frames);
    codec::Decoded dec;
    try {
        dec = codec::decode(block, static_cast<std::uint16_t>(cfg_.service_uuid));
    } catch (const SimError&) {
        log_.nodes[n].aux_loss += 1;
        return;
    }

    Node& nd = nodes_[n];
    if (nd.dedup.check_and_update(addrs_[ev->sender], dec.seq) == DedupVerdict::Duplicate) {
        log_.nodes[n].duplicates += 1;
        return;
    }
    deliver_ip(n, *ev->dgram);
}

void Simulation::rotate_scanner(NodeId n)
{
    Node& nd = nodes_[n];
    nd.rotation = (nd.rotation + 1) % 3;
    bool receiving = nd.commit && nd.commit->until > now_;
    if (nd.tx_until <= now_ && !receiving) {
        resume_scan(n);
    }
    Instant next = now_ + cfg_.scan_rotation_us;
    if (next < hard_end_) {
        schedule(next, [this, n]() { rotate_scanner(n); });
    }
}

void Simulation::resume_scan(NodeId n)
{
    Node& nd = nodes_[n];
    medium_.stop_listen(n, now_);
    medium_.set_listen(n, Channel::primary(kPrimaryRotation[nd.rotation]),
                       now_ + kChannelSwitchTime);
}

}  // namespace bleip
