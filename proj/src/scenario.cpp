#include "bleip/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "bleip/adv_codec.hpp"

namespace bleip {

void ScenarioConfig::validate() const
{
    auto fail = [](const std::string& why) { throw InvalidConfig(why); };

    if (producers == 0) fail("at least one producer is required");
    if (duration_us == 0) fail("duration_us must be positive");
    if (adv_interval_us == 0) fail("adv_interval_us must be positive");
    if (producer_interval_us == 0) fail("producer_interval_us must be positive");
    if (conn_interval_lo_us == 0) fail("conn_interval_lo_us must be positive");
    if (conn_interval_lo_us > conn_interval_hi_us) {
        fail("conn_interval_lo_us exceeds conn_interval_hi_us");
    }
    if (scan_rotation_us == 0) fail("scan_rotation_us must be positive");
    if (ack_timeout_us == 0) fail("ack_timeout_us must be positive");
    if (adv_instances == 0) fail("adv_instances must be positive");
    if (aux_capacity == 0) fail("aux_capacity must be positive");
    if (max_chain == 0) fail("max_chain must be positive");
    if (conn_event_budget == 0) fail("conn_event_budget must be positive");
    if (service_uuid > 0xffff) fail("service_uuid must fit in 16 bits");
    if (mtu > codec::kMtu) fail("mtu exceeds 1280 bytes");
    if (put_payload + per_hop_overhead > mtu) {
        fail("put_payload plus per-hop overhead exceeds the MTU");
    }
    if (ack_payload + per_hop_overhead > mtu) {
        fail("ack_payload plus per-hop overhead exceeds the MTU");
    }
    if (noise_pdu_len > 255) fail("noise_pdu_len exceeds 255 bytes");

    // The full on-air block for the largest datagram must fit the aux chain.
    std::size_t ip_len = put_payload + per_hop_overhead;
    std::size_t segs = (ip_len + 1 + codec::kSegmentDataCapacity - 1) / codec::kSegmentDataCapacity;
    std::size_t block = codec::kSegmentOverhead * segs + ip_len + 1;
    if ((block + aux_capacity - 1) / aux_capacity > max_chain) {
        fail("put_payload does not fit in max_chain aux frames");
    }
}

std::string mode_name(Mode m)
{
    return m == Mode::Adv ? "adv" : "conn";
}

std::string topology_name(Topology t)
{
    switch (t) {
        case Topology::Star: return "star";
        case Topology::Tree: return "tree";
        case Topology::Line: return "line";
    }
    return "?";
}

std::vector<std::uint32_t> build_topology(Topology t, std::uint32_t producers)
{
    std::vector<std::uint32_t> parents(producers + 1, 0);
    switch (t) {
        case Topology::Star:
            for (std::uint32_t i = 1; i <= producers; ++i) parents[i] = 0;
            break;
        case Topology::Tree:
            // Binary levels below the root: nodes 1,2 at hop 1; 3..6 at
            // hop 2; 7..14 at hop 3; and so on.
            for (std::uint32_t i = 1; i <= producers; ++i) {
                parents[i] = (i - 1) / 2;
            }
            break;
        case Topology::Line:
            for (std::uint32_t i = 1; i <= producers; ++i) parents[i] = i - 1;
            break;
    }
    return parents;
}

std::vector<std::uint32_t> hop_counts(const std::vector<std::uint32_t>& parents)
{
    std::vector<std::uint32_t> hops(parents.size(), 0);
    for (std::uint32_t i = 1; i < parents.size(); ++i) {
        std::uint32_t n = i;
        std::uint32_t h = 0;
        while (n != 0) {
            n = parents[n];
            ++h;
            if (h > parents.size()) throw SimError("topology has a routing loop");
        }
        hops[i] = h;
    }
    return hops;
}

namespace {

// Minimal flat-TOML reader: `key = value` lines, '#' comments, integer,
// boolean and quoted string values. That is all a scenario file needs.
std::map<std::string, std::string> parse_flat_toml(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            return s.substr(b, e - b + 1);
        };
        std::string stripped = strip(line);
        if (stripped.empty()) continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfig("scenario line " + std::to_string(lineno) +
                                ": expected 'key = value'");
        }
        std::string key = strip(stripped.substr(0, eq));
        std::string val = strip(stripped.substr(eq + 1));
        if (key.empty() || val.empty()) {
            throw InvalidConfig("scenario line " + std::to_string(lineno) +
                                ": empty key or value");
        }
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') {
            val = val.substr(1, val.size() - 2);
        }
        if (kv.count(key)) {
            throw InvalidConfig("duplicate scenario key '" + key + "'");
        }
        kv[key] = val;
    }
    return kv;
}

std::uint64_t to_u64(const std::string& key, const std::string& val)
{
    std::uint64_t out = 0;
    const char* first = val.data();
    const char* last = val.data() + val.size();
    int base = 10;
    if (val.size() > 2 && val[0] == '0' && (val[1] == 'x' || val[1] == 'X')) {
        first += 2;
        base = 16;
    }
    auto [ptr, ec] = std::from_chars(first, last, out, base);
    if (ec != std::errc() || ptr != last) {
        throw InvalidConfig("scenario key '" + key + "': not an integer: " + val);
    }
    return out;
}

}  // namespace

void apply_scenario_kv(ScenarioConfig& cfg, const std::string& key,
                       const std::string& val)
{
    std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters;
    auto u64_field = [&](const std::string& name, auto& field) {
        setters[name] = [&field, name](const std::string& k, const std::string& v) {
            field = static_cast<std::remove_reference_t<decltype(field)>>(to_u64(k, v));
        };
    };

    setters["mode"] = [&cfg](const std::string&, const std::string& v) {
        if (v == "adv") cfg.mode = Mode::Adv;
        else if (v == "conn") cfg.mode = Mode::Conn;
        else throw InvalidConfig("mode must be \"adv\" or \"conn\", got: " + v);
    };
    setters["topology"] = [&cfg](const std::string&, const std::string& v) {
        if (v == "star") cfg.topology = Topology::Star;
        else if (v == "tree") cfg.topology = Topology::Tree;
        else if (v == "line") cfg.topology = Topology::Line;
        else throw InvalidConfig("topology must be star, tree or line, got: " + v);
    };
    u64_field("producers", cfg.producers);
    u64_field("seed", cfg.seed);
    u64_field("duration_us", cfg.duration_us);
    u64_field("adv_interval_us", cfg.adv_interval_us);
    u64_field("retransmissions", cfg.retransmissions);
    u64_field("adv_jitter_max_us", cfg.adv_jitter_max_us);
    u64_field("setup_delay_us", cfg.setup_delay_us);
    u64_field("scan_rotation_us", cfg.scan_rotation_us);
    u64_field("adv_instances", cfg.adv_instances);
    u64_field("link_queue", cfg.link_queue);
    u64_field("aux_capacity", cfg.aux_capacity);
    u64_field("max_chain", cfg.max_chain);
    u64_field("service_uuid", cfg.service_uuid);
    u64_field("conn_interval_lo_us", cfg.conn_interval_lo_us);
    u64_field("conn_interval_hi_us", cfg.conn_interval_hi_us);
    u64_field("conn_event_budget", cfg.conn_event_budget);
    u64_field("conn_buffer_cap", cfg.conn_buffer_cap);
    u64_field("producer_interval_us", cfg.producer_interval_us);
    u64_field("put_payload", cfg.put_payload);
    u64_field("ack_payload", cfg.ack_payload);
    u64_field("ack_timeout_us", cfg.ack_timeout_us);
    u64_field("per_hop_overhead", cfg.per_hop_overhead);
    u64_field("mtu", cfg.mtu);
    u64_field("noise_advertisers", cfg.noise_advertisers);
    u64_field("noise_interval_us", cfg.noise_interval_us);
    u64_field("noise_pdu_len", cfg.noise_pdu_len);

    auto it = setters.find(key);
    if (it == setters.end()) {
        throw InvalidConfig("unknown scenario key '" + key + "'");
    }
    it->second(key, val);
}

ScenarioConfig load_scenario(const std::string& toml_text)
{
    ScenarioConfig cfg;
    for (const auto& [key, val] : parse_flat_toml(toml_text)) {
        apply_scenario_kv(cfg, key, val);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw SimError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

}  // namespace bleip
