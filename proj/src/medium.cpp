#include "bleip/medium.hpp"

#include <algorithm>

namespace bleip {

Medium::Medium(std::vector<BleAddress> node_addrs)
    : addrs_(std::move(node_addrs)), listeners_(addrs_.size())
{
}

FrameId Medium::transmit(const RadioFrame& frame)
{
    for (const auto& a : active_) {
        if (a.frame.sender == frame.sender && a.frame.t_end() > frame.t_start) {
            throw SimError("RadioBusy: node already transmitting");
        }
    }

    ActiveFrame af;
    af.frame = frame;
    af.frame.id = next_id_++;

    // Mark overlaps on the same channel; both frames are lost for everyone.
    for (auto& other : active_) {
        if (other.frame.channel == af.frame.channel &&
            other.frame.t_end() > af.frame.t_start) {
            other.collided = true;
            af.collided = true;
        }
    }
    active_.push_back(af);
    ++transmitted_;
    return af.frame.id;
}

ResolveResult Medium::resolve(FrameId id, Instant now)
{
    auto it = std::find_if(active_.begin(), active_.end(),
                           [id](const ActiveFrame& a) { return a.frame.id == id; });
    if (it == active_.end()) throw SimError("resolve: unknown frame id");
    ActiveFrame af = *it;
    active_.erase(it);

    if (af.frame.t_end() != now) throw SimError("resolve called before frame end");

    ResolveResult res;
    res.collided = af.collided;
    if (af.collided) {
        ++collided_;
        return res;
    }

    for (NodeId n = 0; n < listeners_.size(); ++n) {
        const Listener& l = listeners_[n];
        if (!l.active || l.ch != af.frame.channel) continue;
        if (l.since > af.frame.t_start) continue;  // tuned in mid-frame
        if (n == af.frame.sender) continue;
        if (af.frame.directed_to && *af.frame.directed_to != addrs_[n]) continue;
        res.delivered_to.push_back(n);
    }
    if (res.delivered_to.empty()) {
        ++unheard_;
    } else {
        ++delivered_;
    }
    return res;
}

void Medium::set_listen(NodeId node, Channel ch, Instant from)
{
    Listener& l = listeners_[node];
    if (l.active) {
        if (from < l.since) throw SimError("set_listen: time went backwards");
        l.rx_us += from - l.since;
    }
    l.active = true;
    l.ch = ch;
    l.since = from;
}

void Medium::stop_listen(NodeId node, Instant now)
{
    Listener& l = listeners_[node];
    if (!l.active) return;
    if (now > l.since) l.rx_us += now - l.since;
    l.active = false;
}

}  // namespace bleip
