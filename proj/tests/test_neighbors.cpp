#include "fixtures.hpp"
#include "oracles.hpp"
#include "vanet/neighbors.hpp"
#include "vanet/simengine.hpp"

#include <gtest/gtest.h>

using namespace vanet;
using fixtures::vehicle;

namespace {

Beacon beacon(std::uint32_t id, Position p = {}, SimTime t = 0.0) {
    return Beacon{node_id(id), p, {}, t};
}

}  // namespace

TEST(BeaconScheduler, PeriodNotElapsed) {
    BeaconScheduler s{{}};
    const std::vector<VehicleState> vs{vehicle(0, {0, 0})};
    EXPECT_EQ(s.emit(vs, 0.0).size(), 1U);
    EXPECT_EQ(s.emit(vs, 0.4).size(), 0U);
}

TEST(BeaconScheduler, ExactPeriodicity) {
    BeaconScheduler s{{}};
    const std::vector<VehicleState> vs{vehicle(0, {0, 0}), vehicle(1, {5, 0})};
    std::size_t total = 0;
    for (int k = 0; k <= 10; ++k) {
        total += s.emit(vs, k * 0.1).size();
    }
    EXPECT_EQ(total, 3U * vs.size());
}

TEST(BeaconScheduler, EveryVehicleEmitsInitially) {
    BeaconScheduler s{{}};
    std::vector<VehicleState> vs;
    for (std::uint32_t i = 0; i < 100; ++i) vs.push_back(vehicle(i, {double(i), 0}, {1, 0}));
    const auto out = s.emit(vs, 0.0);
    ASSERT_EQ(out.size(), 100U);
    EXPECT_EQ(out[7].pos, vs[7].pos);
    EXPECT_EQ(out[7].vel, vs[7].vel);
    EXPECT_EQ(out[7].timestamp, 0.0);
}

TEST(DeliverBeacon, Examples) {
    NeighborTable t{node_id(0)};
    t = deliver_beacon(t, beacon(1, {10, 0}), 0.0);
    EXPECT_EQ(t.size(), 1U);
    t = deliver_beacon(t, beacon(1, {20, 0}), 0.5);
    EXPECT_EQ(t.size(), 1U);
    EXPECT_EQ(t.find(node_id(1))->last_pos, (Position{20, 0}));
    EXPECT_EQ(t.find(node_id(1))->last_heard, 0.5);
    t = deliver_beacon(t, beacon(0, {0, 0}), 0.5);
    EXPECT_EQ(t.size(), 1U);
    EXPECT_FALSE(t.contains(node_id(0)));
}

TEST(PurgeStale, Examples) {
    const BeaconConfig cfg{};
    NeighborTable t{node_id(0)};
    t.deliver(beacon(1), 0.0);
    EXPECT_TRUE(purge_stale(t, 1.5, cfg).contains(node_id(1)));
    EXPECT_FALSE(purge_stale(t, 1.6, cfg).contains(node_id(1)));
    EXPECT_TRUE(purge_stale(NeighborTable{node_id(0)}, 3.0, cfg).empty());
}

TEST(PurgeStale, BoundaryUnderAccumulatedTime) {
    // 15 ticks of 0.1 do not sum to exactly 1.5.
    const BeaconConfig cfg{};
    NeighborTable t{node_id(0)};
    t.deliver(beacon(1), 0.0);
    double now = 0.0;
    for (int k = 0; k < 15; ++k) now += 0.1;
    EXPECT_TRUE(purge_stale(t, now, cfg).contains(node_id(1)));
}

TEST(PurgeStale, InvariantAfterPurge) {
    Rng rng{31};
    const BeaconConfig cfg{0.5, 3};
    for (int trial = 0; trial < 200; ++trial) {
        NeighborTable t{node_id(0)};
        for (std::uint32_t i = 1; i < 30; ++i) t.deliver(beacon(i), rng.uniform(0, 10));
        const double now = 10.0;
        t.purge(now, cfg);
        for (const auto& [id, e] : t) EXPECT_LE(now - e.last_heard, cfg.timeout() + 1e-9);
        EXPECT_FALSE(t.contains(t.owner()));
    }
}

TEST(BeaconConfig, Validation) {
    EXPECT_NO_THROW(validate(BeaconConfig{}));
    EXPECT_THROW(validate(BeaconConfig{0.0, 3}), std::invalid_argument);
    EXPECT_THROW(validate(BeaconConfig{0.5, 0}), std::invalid_argument);
}

TEST(NeighborTable, VersionTracksChanges) {
    NeighborTable t{node_id(0)};
    const auto v0 = t.version();
    t.deliver(beacon(1), 0.0);
    EXPECT_GT(t.version(), v0);
    const auto v1 = t.version();
    t.purge(0.1, {});
    EXPECT_EQ(t.version(), v1);
    EXPECT_TRUE(t.erase(node_id(1)));
    EXPECT_GT(t.version(), v1);
    EXPECT_FALSE(t.erase(node_id(1)));
}

TEST(NeighborTable, StaticTablesConvergeToDiscQuery) {
    Rng rng{32};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<VehicleState> vs;
        for (std::uint32_t i = 0; i < 60; ++i) {
            vs.push_back(vehicle(i, {rng.uniform(0, 1000), rng.uniform(0, 1000)}));
        }
        std::vector<NeighborTable> tables;
        for (const auto& v : vs) tables.emplace_back(v.id);
        BeaconScheduler sched{{}};
        for (int k = 0; k <= 5; ++k) {
            const double now = k * 0.1;
            deliver_beacons(tables, vs, sched.emit(vs, now), 250.0, now);
        }
        for (std::size_t i = 0; i < vs.size(); ++i) {
            std::set<NodeId> got;
            for (const auto& [id, e] : tables[i]) got.insert(id);
            EXPECT_EQ(got, oracle::disc_query(vs, i, 250.0));
        }
    }
}
