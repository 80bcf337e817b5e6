#include "bleip/csvio.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bleip/types.hpp"

namespace bleip::csvio {

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
    if (!out) throw SimError("cannot write " + path);
    return out;
}

std::uint64_t parse_u64(const std::string& s)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw SimError("bad integer in CSV: " + s);
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

void write_puts_csv(const MetricsLog& log, const std::string& path)
{
    auto out = open_out(path);
    out << "id,producer,send_us,ack_us,hops\n";
    for (const auto& p : log.puts) {
        out << p.id << ',' << p.producer << ',' << p.send_us << ',';
        if (p.ack_us) {
            out << *p.ack_us;
        } else {
            out << "LOST";
        }
        out << ',' << p.hops << '\n';
    }
}

void write_nodes_csv(const MetricsLog& log, const std::string& path)
{
    auto out = open_out(path);
    out << "node,tx_us,rx_us,frames_tx,frames_rx,dropped_adv_events,queue_drops,duplicates\n";
    for (std::size_t i = 0; i < log.nodes.size(); ++i) {
        const auto& n = log.nodes[i];
        out << i << ',' << n.tx_us << ',' << n.rx_us << ',' << n.frames_tx << ','
            << n.frames_rx << ',' << n.dropped_adv_events << ',' << n.queue_drops
            << ',' << n.duplicates << '\n';
    }
}

void write_summary_json(const MetricsLog& log, const std::string& path)
{
    nlohmann::ordered_json j;
    auto pdr = metrics::pdr(log);
    if (pdr) {
        j["pdr"] = *pdr;
    } else {
        j["pdr"] = "NoTraffic";
    }
    j["puts_sent"] = log.puts.size();
    j["runtime_us"] = log.runtime_us;
    nlohmann::ordered_json pct;
    for (double p : {50.0, 90.0, 99.0}) {
        std::string key = "p" + std::to_string(static_cast<int>(p));
        auto v = metrics::rtt_percentile(log, p);
        if (v) {
            pct[key] = *v;
        } else {
            pct[key] = nullptr;
        }
    }
    j["rtt_us"] = pct;
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (std::uint32_t i = 0; i < log.nodes.size(); ++i) {
        auto u = metrics::radio_utilization(log, i);
        nodes.push_back({{"node", i}, {"tx", u.tx}, {"rx", u.rx}});
    }
    j["utilization"] = nodes;

    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_cdf_csv(const MetricsLog& log, const std::string& path, Dur resolution)
{
    auto out = open_out(path);
    out << "t_us,fraction\n";
    char buf[64];
    for (const auto& [t, f] : metrics::rtt_cdf(log, resolution)) {
        std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%.9f\n",
                      static_cast<std::uint64_t>(t), f);
        out << buf;
    }
}

MetricsLog read_run_dir(const std::string& dir)
{
    MetricsLog log;

    std::ifstream puts(dir + "/puts.csv");
    if (!puts) throw SimError("cannot open " + dir + "/puts.csv");
    std::string line;
    std::getline(puts, line);  // header
    while (std::getline(puts, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 5) throw SimError("malformed puts.csv row: " + line);
        PutRecord r;
        r.id = parse_u64(f[0]);
        r.producer = static_cast<std::uint32_t>(parse_u64(f[1]));
        r.send_us = parse_u64(f[2]);
        if (f[3] != "LOST") r.ack_us = parse_u64(f[3]);
        r.hops = static_cast<std::uint32_t>(parse_u64(f[4]));
        log.puts.push_back(r);
    }

    std::ifstream nodes(dir + "/nodes.csv");
    if (nodes) {
        std::getline(nodes, line);
        while (std::getline(nodes, line)) {
            if (line.empty()) continue;
            auto f = split_csv_line(line);
            if (f.size() != 8) throw SimError("malformed nodes.csv row: " + line);
            NodeStats s;
            s.tx_us = parse_u64(f[1]);
            s.rx_us = parse_u64(f[2]);
            s.frames_tx = parse_u64(f[3]);
            s.frames_rx = parse_u64(f[4]);
            s.dropped_adv_events = parse_u64(f[5]);
            s.queue_drops = parse_u64(f[6]);
            s.duplicates = parse_u64(f[7]);
            log.nodes.push_back(s);
        }
    }
    return log;
}

}  // namespace bleip::csvio
