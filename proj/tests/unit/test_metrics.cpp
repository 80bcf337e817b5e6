#include <doctest.h>

#include "bleip/metrics.hpp"

using namespace bleip;

namespace {

PutRecord put(std::uint64_t id, std::uint64_t send, std::optional<std::uint64_t> ack)
{
    PutRecord p;
    p.id = id;
    p.producer = 1;
    p.send_us = send;
    p.ack_us = ack;
    p.hops = 1;
    return p;
}

}  // namespace

TEST_CASE("pdr counts acked over sent")
{
    MetricsLog log;
    CHECK_FALSE(metrics::pdr(log).has_value());

    log.puts = {put(1, 0, 100), put(2, 10, std::nullopt), put(3, 20, 300),
                put(4, 30, std::nullopt)};
    CHECK(*metrics::pdr(log) == doctest::Approx(0.5));

    log.puts = {put(1, 0, std::nullopt)};
    CHECK(*metrics::pdr(log) == doctest::Approx(0.0));
}

TEST_CASE("percentiles cover successful round trips only")
{
    MetricsLog log;
    CHECK_FALSE(metrics::rtt_percentile(log, 50).has_value());

    // RTTs 100..1000 us; two lost packets do not enter the percentile.
    for (std::uint64_t i = 1; i <= 10; ++i) log.puts.push_back(put(i, 0, i * 100));
    log.puts.push_back(put(11, 0, std::nullopt));
    log.puts.push_back(put(12, 0, std::nullopt));

    CHECK(*metrics::rtt_percentile(log, 0) == 100);
    CHECK(*metrics::rtt_percentile(log, 50) == 600);
    CHECK(*metrics::rtt_percentile(log, 100) == 1000);
    CHECK(*metrics::rtt_percentile(log, 90) == 1000);
}

TEST_CASE("cdf is monotone and tops out at the delivery ratio")
{
    MetricsLog log;
    log.puts = {put(1, 0, 1500), put(2, 0, 2500), put(3, 0, 7200),
                put(4, 0, std::nullopt)};
    auto cdf = metrics::rtt_cdf(log, 1000);
    REQUIRE(!cdf.empty());
    double prev = -1.0;
    for (const auto& [t, f] : cdf) {
        CHECK(f >= prev);
        prev = f;
    }
    // Lost packets have infinite round trip time: the curve saturates at pdr.
    CHECK(cdf.back().second == doctest::Approx(*metrics::pdr(log)));
    CHECK(cdf.back().second == doctest::Approx(0.75));

    // spot checks at the bin edges
    CHECK(cdf[1].second == doctest::Approx(0.0));   // t=1000, nothing yet
    CHECK(cdf[2].second == doctest::Approx(0.25));  // t=2000, first ack in
}

TEST_CASE("radio utilization is time on air over runtime")
{
    MetricsLog log;
    log.runtime_us = 1'000'000;
    log.nodes.resize(2);
    log.nodes[1].tx_us = 25'000;
    log.nodes[1].rx_us = 400'000;
    auto u = metrics::radio_utilization(log, 1);
    CHECK(u.tx == doctest::Approx(0.025));
    CHECK(u.rx == doctest::Approx(0.4));
}

TEST_CASE("battery lifetime closed forms")
{
    // 230 mAh coin cell, 4.6 mA radio draw.
    CHECK(metrics::lifetime_hours(1.0, 4.6, 230.0) == doctest::Approx(50.0));
    // 0.5% duty cycle stretches that to 10000 h, about 416 days.
    double h = metrics::lifetime_hours(0.005, 4.6, 230.0);
    CHECK(h == doctest::Approx(10000.0));
    CHECK(h / 24.0 == doctest::Approx(416.6667).epsilon(1e-4));
    CHECK_THROWS_AS(metrics::lifetime_hours(0.0, 4.6, 230.0), SimError);
}

TEST_CASE("frame total sums every node")
{
    MetricsLog log;
    log.nodes.resize(3);
    log.nodes[0].frames_tx = 5;
    log.nodes[1].frames_tx = 7;
    log.nodes[2].frames_tx = 11;
    CHECK(metrics::frame_total(log) == 23);
}
