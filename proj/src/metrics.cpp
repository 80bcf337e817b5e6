#include "bleip/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace bleip::metrics {

std::optional<double> pdr(const MetricsLog& log)
{
    if (log.puts.empty()) return std::nullopt;
    std::size_t acked = 0;
    for (const auto& p : log.puts) {
        if (p.ack_us) ++acked;
    }
    return static_cast<double>(acked) / static_cast<double>(log.puts.size());
}

std::vector<std::pair<Dur, double>> rtt_cdf(const MetricsLog& log, Dur resolution)
{
    std::vector<Dur> rtts;
    for (const auto& p : log.puts) {
        if (p.ack_us) rtts.push_back(*p.ack_us - p.send_us);
    }
    std::sort(rtts.begin(), rtts.end());

    std::vector<std::pair<Dur, double>> cdf;
    if (log.puts.empty()) return cdf;
    double total = static_cast<double>(log.puts.size());
    Dur max_rtt = rtts.empty() ? 0 : rtts.back();
    std::size_t i = 0;
    for (Dur t = 0; t <= max_rtt + resolution; t += resolution) {
        while (i < rtts.size() && rtts[i] <= t) ++i;
        cdf.emplace_back(t, static_cast<double>(i) / total);
        if (i == rtts.size() && t > max_rtt) break;
    }
    return cdf;
}

std::optional<Dur> rtt_percentile(const MetricsLog& log, double p)
{
    std::vector<Dur> rtts;
    for (const auto& rec : log.puts) {
        if (rec.ack_us) rtts.push_back(*rec.ack_us - rec.send_us);
    }
    if (rtts.empty()) return std::nullopt;
    std::sort(rtts.begin(), rtts.end());
    double rank = p / 100.0 * static_cast<double>(rtts.size() - 1);
    std::size_t idx = static_cast<std::size_t>(std::llround(std::ceil(rank)));
    if (idx >= rtts.size()) idx = rtts.size() - 1;
    return rtts[idx];
}

Utilization radio_utilization(const MetricsLog& log, std::uint32_t node)
{
    Utilization u;
    if (log.runtime_us == 0) return u;
    const NodeStats& s = log.nodes.at(node);
    u.tx = static_cast<double>(s.tx_us) / static_cast<double>(log.runtime_us);
    u.rx = static_cast<double>(s.rx_us) / static_cast<double>(log.runtime_us);
    return u;
}

double lifetime_hours(double duty, double radio_current_mA, double battery_mAh)
{
    if (duty <= 0.0 || radio_current_mA <= 0.0) {
        throw SimError("lifetime_hours: duty and current must be positive");
    }
    return battery_mAh / (duty * radio_current_mA);
}

std::uint64_t frame_total(const MetricsLog& log)
{
    std::uint64_t total = 0;
    for (const auto& n : log.nodes) total += n.frames_tx;
    return total;
}

}  // namespace bleip::metrics
