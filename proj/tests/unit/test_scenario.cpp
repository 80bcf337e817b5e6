#include <doctest.h>

#include "bleip/scenario.hpp"

using namespace bleip;

TEST_CASE("defaults mirror the reference deployment")
{
    ScenarioConfig cfg;
    CHECK(cfg.mode == Mode::Adv);
    CHECK(cfg.topology == Topology::Star);
    CHECK(cfg.producers == 14);
    CHECK(cfg.adv_interval_us == 50'000);
    CHECK(cfg.retransmissions == 2);
    CHECK(cfg.adv_instances == 10);
    CHECK(cfg.link_queue == 4);
    CHECK(cfg.aux_capacity == 245);
    CHECK(cfg.max_chain == 10);
    CHECK(cfg.conn_interval_lo_us == 40'000);
    CHECK(cfg.conn_interval_hi_us == 60'000);
    CHECK(cfg.conn_buffer_cap == 8900);
    CHECK(cfg.mtu == 1280);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("scenario text parses into a config")
{
    ScenarioConfig cfg = load_scenario(R"(
# one hour baseline
mode = "conn"
topology = "line"
producers = 6
seed = 99
duration_us = 3600000000
conn_interval_lo_us = 15000
conn_interval_hi_us = 35000
service_uuid = 0xBEEF
)");
    CHECK(cfg.mode == Mode::Conn);
    CHECK(cfg.topology == Topology::Line);
    CHECK(cfg.producers == 6);
    CHECK(cfg.seed == 99);
    CHECK(cfg.conn_interval_lo_us == 15'000);
    CHECK(cfg.conn_interval_hi_us == 35'000);
    CHECK(cfg.service_uuid == 0xBEEF);
    // untouched keys keep their defaults
    CHECK(cfg.adv_interval_us == 50'000);
}

TEST_CASE("bad scenario text is rejected")
{
    CHECK_THROWS_AS(load_scenario("producers = "), InvalidConfig);
    CHECK_THROWS_AS(load_scenario("no_such_key = 1"), InvalidConfig);
    CHECK_THROWS_AS(load_scenario("producers = twelve"), InvalidConfig);
    CHECK_THROWS_AS(load_scenario("mode = \"both\""), InvalidConfig);
    CHECK_THROWS_AS(load_scenario("seed = 1\nseed = 2"), InvalidConfig);
    CHECK_THROWS_AS(load_scenario("producers 4"), InvalidConfig);
}

TEST_CASE("validation catches inconsistent parameters")
{
    ScenarioConfig cfg;
    cfg.producers = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);

    cfg = ScenarioConfig{};
    cfg.conn_interval_lo_us = 70'000;  // above hi
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);

    cfg = ScenarioConfig{};
    cfg.put_payload = 1280;  // overhead pushes it past the MTU
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);

    cfg = ScenarioConfig{};
    cfg.max_chain = 1;
    cfg.put_payload = 500;  // block no longer fits one aux frame
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);

    cfg = ScenarioConfig{};
    cfg.mtu = 2000;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}

TEST_CASE("single key override for sweeps")
{
    ScenarioConfig cfg;
    apply_scenario_kv(cfg, "retransmissions", "5");
    CHECK(cfg.retransmissions == 5);
    CHECK_THROWS_AS(apply_scenario_kv(cfg, "bogus", "1"), InvalidConfig);
}

TEST_CASE("topologies and hop counts")
{
    auto star = build_topology(Topology::Star, 4);
    CHECK(star == std::vector<std::uint32_t>{0, 0, 0, 0, 0});
    CHECK(hop_counts(star) == std::vector<std::uint32_t>{0, 1, 1, 1, 1});

    auto line = build_topology(Topology::Line, 4);
    CHECK(line == std::vector<std::uint32_t>{0, 0, 1, 2, 3});
    CHECK(hop_counts(line) == std::vector<std::uint32_t>{0, 1, 2, 3, 4});

    // 14 producers in a binary tree: 2 at one hop, 4 at two, 8 at three.
    auto tree = build_topology(Topology::Tree, 14);
    auto hops = hop_counts(tree);
    CHECK(tree[1] == 0);
    CHECK(tree[2] == 0);
    CHECK(tree[3] == 1);
    CHECK(tree[6] == 2);
    CHECK(tree[14] == 6);
    int h1 = 0, h2 = 0, h3 = 0;
    for (std::size_t i = 1; i < hops.size(); ++i) {
        if (hops[i] == 1) ++h1;
        if (hops[i] == 2) ++h2;
        if (hops[i] == 3) ++h3;
    }
    CHECK(h1 == 2);
    CHECK(h2 == 4);
    CHECK(h3 == 8);
}
