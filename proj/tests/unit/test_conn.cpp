#include <doctest.h>

#include <cmath>

#include "bleip/engine.hpp"
#include "bleip/metrics.hpp"

using namespace bleip;

namespace {

ScenarioConfig conn_star(std::uint32_t producers)
{
    ScenarioConfig cfg;
    cfg.mode = Mode::Conn;
    cfg.topology = Topology::Star;
    cfg.producers = producers;
    cfg.duration_us = 5'000'000;
    cfg.producer_interval_us = 1'000'000;
    cfg.seed = 21;
    return cfg;
}

}  // namespace

TEST_CASE("connections deliver losslessly on a quiet star")
{
    MetricsLog log = run_scenario(conn_star(3));
    REQUIRE(!log.puts.empty());
    CHECK(*metrics::pdr(log) == doctest::Approx(1.0));
    CHECK(log.ip_duplicates == 0);
    for (const auto& n : log.nodes) CHECK(n.queue_drops == 0);
}

TEST_CASE("an idle connection still exchanges empty polls")
{
    ScenarioConfig cfg = conn_star(1);
    cfg.duration_us = 1'000'000;
    cfg.producer_interval_us = 10'000'000;  // no put fits in the run
    cfg.ack_timeout_us = 1'000;             // keep the settle tail short
    MetricsLog log = run_scenario(cfg);

    CHECK(log.puts.empty());
    // Every connection event carries at least the coordinator poll and the
    // subordinate response, one empty frame each way. The [40:60] ms interval
    // gives roughly twenty events in a second.
    CHECK(log.nodes[0].frames_tx >= 10);
    CHECK(log.nodes[1].frames_tx >= 10);
    CHECK(log.nodes[0].frames_tx == log.nodes[1].frames_tx);
    // Empty data PDUs burn 80 us of air each.
    CHECK(log.nodes[0].tx_us == log.nodes[0].frames_tx * 80);
    CHECK(log.nodes[1].tx_us == log.nodes[1].frames_tx * 80);
}

TEST_CASE("large datagrams are fragmented and reassembled over a connection")
{
    ScenarioConfig cfg = conn_star(1);
    cfg.put_payload = 1270;  // 1280 bytes after the per-hop header: six frames
    cfg.duration_us = 2'000'000;
    MetricsLog log = run_scenario(cfg);

    REQUIRE(!log.puts.empty());
    CHECK(*metrics::pdr(log) == doctest::Approx(1.0));
}

TEST_CASE("buffer capacity bounds the outstanding bytes")
{
    // 1284 bytes buffered per datagram against an 8900 byte buffer: the
    // seventh concurrent datagram no longer fits.
    ScenarioConfig cfg = conn_star(1);
    cfg.put_payload = 1270;
    cfg.producer_interval_us = 1'000;
    cfg.duration_us = 60'000;
    MetricsLog log = run_scenario(cfg);

    REQUIRE(log.puts.size() > 10);
    CHECK(log.nodes[1].queue_drops > 0);
    CHECK(*metrics::pdr(log) < 1.0);

    std::size_t acked = 0;
    for (const auto& p : log.puts) {
        if (p.ack_us) ++acked;
    }
    // The buffered prefix survives and drains after traffic stops.
    CHECK(acked + log.nodes[1].queue_drops == log.puts.size());
}

TEST_CASE("link scheduling shares air time between connections")
{
    ScenarioConfig cfg = conn_star(4);
    cfg.duration_us = 20'000'000;
    MetricsLog log = run_scenario(cfg);

    CHECK(*metrics::pdr(log) == doctest::Approx(1.0));
    // Identical traffic on every leaf: frame counts even out across links.
    double lo = 1e18, hi = 0;
    for (std::uint32_t n = 1; n <= 4; ++n) {
        double f = static_cast<double>(log.nodes[n].frames_tx);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    CHECK(hi / lo < 1.3);
}

TEST_CASE("overlapping events start late instead of colliding")
{
    // Four links on one shared radio at the hub: many anchors overlap, yet
    // delivery stays lossless because delayed events shrink rather than clash.
    ScenarioConfig cfg = conn_star(4);
    cfg.conn_interval_lo_us = 15'000;
    cfg.conn_interval_hi_us = 35'000;
    cfg.duration_us = 10'000'000;
    MetricsLog log = run_scenario(cfg);

    CHECK(*metrics::pdr(log) == doctest::Approx(1.0));
    CHECK(log.frames_collided == 0);
}
