#include "fixtures.hpp"
#include "oracles.hpp"
#include "vanet/ebgr.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace vanet;
using fixtures::entry;
using fixtures::table_of;
using fixtures::vehicle;

TEST(Closeness, Examples) {
    EXPECT_NEAR(closeness(100, 200), 0.5, 1e-9);
    EXPECT_NEAR(closeness(150, 150), 0.0, 1e-9);
    EXPECT_NEAR(closeness(300, 200), -0.5, 1e-9);
    EXPECT_THROW(closeness(10, 0), std::domain_error);
}

TEST(DirectionAlignment, Examples) {
    EXPECT_NEAR(direction_alignment({20, 0}, {0, 0}, {100, 0}), 1.0, 1e-9);
    EXPECT_NEAR(direction_alignment({-20, 0}, {0, 0}, {100, 0}), -1.0, 1e-9);
    const double dot_oracle = (10.0 * 100.0) / (std::hypot(10.0, 10.0) * 100.0);
    EXPECT_NEAR(direction_alignment({10, 10}, {0, 0}, {100, 0}), dot_oracle, 1e-9);
    EXPECT_NEAR(direction_alignment({10, 10}, {0, 0}, {100, 0}), std::sqrt(0.5), 1e-4);
    EXPECT_EQ(direction_alignment({0, 0}, {0, 0}, {100, 0}), 0.0);
    EXPECT_EQ(direction_alignment({5, 0}, {3, 3}, {3, 3}), 0.0);
}

TEST(DirectionAlignment, VelocityScalingKeepsDmi) {
    Rng rng{21};
    for (int i = 0; i < 1000; ++i) {
        const Position p = fixtures::point_near(rng, {0, 0}, 250);
        const Position d = fixtures::point_near(rng, {0, 0}, 2000);
        const Velocity v = fixtures::velocity(rng, 25);
        const double k = rng.uniform(0.01, 10);
        EXPECT_NEAR(direction_alignment({k * v.vx, k * v.vy}, p, d), direction_alignment(v, p, d),
                    1e-9);
    }
}

TEST(LinkLifetime, Examples) {
    EXPECT_NEAR(link_lifetime({0, 0}, {0, 0}, {0, 0}, {10, 0}, 250), 25.0, 1e-9);
    EXPECT_NEAR(link_lifetime({0, 0}, {5, 0}, {240, 0}, {15, 0}, 250), 1.0, 1e-9);
    EXPECT_EQ(link_lifetime({0, 0}, {7, 3}, {100, 0}, {7, 3}, 250), kInfiniteLifetime);
    EXPECT_NEAR(link_lifetime({0, 0}, {0, 0}, {-200, 0}, {10, 0}, 250), 45.0, 1e-9);
    const double sim = oracle::simulated_lifetime({0, 0}, {0, 0}, {-200, 0}, {10, 0}, 250);
    EXPECT_NEAR(sim, 45.0, 2e-3);
}

TEST(LinkLifetime, OutOfRangePairHasNoLifetime) {
    EXPECT_EQ(link_lifetime({0, 0}, {0, 0}, {300, 0}, {-10, 0}, 250), 0.0);
}

TEST(LinkLifetime, BoundaryPairLeavingAtOnce) {
    EXPECT_NEAR(link_lifetime({0, 0}, {0, 0}, {250, 0}, {1, 0}, 250), 0.0, 1e-12);
    EXPECT_NEAR(link_lifetime({0, 0}, {0, 0}, {250, 0}, {-1, 0}, 250), 500.0, 1e-9);
}

TEST(LinkLifetime, MatchesQuadraticOracle) {
    Rng rng{22};
    for (int i = 0; i < 5000; ++i) {
        const Position pi = fixtures::point_near(rng, {0, 0}, 250);
        const Position pj{0, 0};
        const Velocity vi = fixtures::velocity(rng, 25);
        const Velocity vj = fixtures::velocity(rng, 25);
        const double a = link_lifetime(pi, vi, pj, vj, 250);
        const double b = oracle::quadratic_lifetime(pi, vi, pj, vj, 250);
        ASSERT_NEAR(a, b, 1e-6 * std::max(1.0, b));
        ASSERT_GE(a, 0.0);
    }
}

TEST(LinkStability, Examples) {
    EXPECT_NEAR(link_stability(12.5, 25), 0.5, 1e-9);
    EXPECT_EQ(link_stability(30, 25), 1.0);
    EXPECT_EQ(link_stability(25, 25), 1.0);
    EXPECT_EQ(link_stability(kInfiniteLifetime, 25), 1.0);
    EXPECT_EQ(link_stability(0, 25), 0.0);
}

TEST(LinkStability, AlwaysInUnitInterval) {
    Rng rng{23};
    for (int i = 0; i < 2000; ++i) {
        const double ls = link_stability(rng.uniform(0, 200), rng.uniform(0.1, 60));
        ASSERT_GE(ls, 0.0);
        ASSERT_LE(ls, 1.0);
    }
}

TEST(PotentialScore, Examples) {
    const PotentialFactors f{};
    EXPECT_NEAR(potential_score(0.5, 1.0, 1.0, f), 0.85, 1e-9);
    EXPECT_NEAR(potential_score(0, 0, 0, f), 0.0, 1e-9);
    EXPECT_NEAR(potential_score(1, 1, 1, f), 1.0, 1e-9);
    EXPECT_NEAR(potential_score(1, 1, 1, {0.2, 0.25, 0.55}), 1.0, 1e-9);
}

TEST(PotentialFactors, Constraints) {
    EXPECT_NO_THROW(validate(PotentialFactors{}));
    auto message = [](PotentialFactors f) {
        try {
            validate(f);
        } catch (const ConfigError& e) {
            return std::string{e.what()};
        }
        return std::string{};
    };
    EXPECT_EQ(message({0.4, 0.4, 0.2}), "lambda must exceed rho");
    EXPECT_EQ(message({0.2, 0.45, 0.35}), "lambda must exceed omega");
    EXPECT_EQ(message({0.2, 0.2, 0.5}), "rho + omega + lambda must equal 1");
    EXPECT_EQ(message({0.0, 0.4, 0.6}), "rho, omega and lambda must all be positive");
}

TEST(RingBounds, Validation) {
    EXPECT_NO_THROW(validate(RingBounds{}));
    EXPECT_THROW(validate(RingBounds{250, 200, 200, 100, 50}), ConfigError);
    EXPECT_THROW(validate(RingBounds{250, 200, 150, 100, 0}), ConfigError);
    EbgrConfig cfg;
    cfg.stability.radio_range = 300;
    EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(ClassifyRing, Examples) {
    const RingBounds rb{};
    EXPECT_EQ(classify_ring(220, rb), Ring::mtr_l1);
    EXPECT_EQ(classify_ring(200, rb), Ring::mtr_l1);
    EXPECT_EQ(classify_ring(30, rb), Ring::inner);
    EXPECT_EQ(classify_ring(260, rb), Ring::out_of_range);
    EXPECT_EQ(classify_ring(250, rb), Ring::out_of_range);
    EXPECT_EQ(classify_ring(150, rb), Ring::l1_l2);
    EXPECT_EQ(classify_ring(100, rb), Ring::l2_l3);
    EXPECT_EQ(classify_ring(50, rb), Ring::l3_l4);
    EXPECT_EQ(classify_ring(0, rb), Ring::inner);
    EXPECT_THROW(classify_ring(-1, rb), std::invalid_argument);
}

TEST(ClassifyRing, TotalAndDisjointBelowMtr) {
    const RingBounds rb{};
    Rng rng{24};
    for (int i = 0; i < 20000; ++i) {
        const double d = rng.uniform(0, 300);
        const int expect = oracle::ring_of(d, rb);
        EXPECT_EQ(static_cast<int>(classify_ring(d, rb)), expect) << d;
        if (d < rb.mtr) EXPECT_LE(expect, 5);
    }
    for (double d : {0.0, 50.0, 100.0, 150.0, 200.0, 249.999999}) {
        EXPECT_EQ(static_cast<int>(classify_ring(d, rb)), oracle::ring_of(d, rb));
    }
}

TEST(SelectNextHop, EmptyTableCarries) {
    const auto cur = vehicle(0, {0, 0}, {10, 0});
    EXPECT_EQ(select_next_hop(cur, NeighborTable{node_id(0)}, node_id(9), {1000, 0}, {}),
              RoutingDecision{Carry{}});
}

TEST(SelectNextHop, SingleNeighborClearsThreshold) {
    const auto cur = vehicle(0, {0, 0}, {10, 0});
    const auto n = entry(1, {220, 0}, {10, 0});
    // DC = 1 - 780/1000, DMI = 1, LS = 1 (equal velocities).
    const double hand = 0.3 * 0.22 + 0.3 * 1.0 + 0.4 * 1.0;
    const EbgrConfig cfg{};
    EXPECT_NEAR(score_neighbor(cur, n, {1000, 0}, cfg), hand, 1e-12);
    EXPECT_NEAR(carry_threshold(cur, {1000, 0}, cfg.factors), 0.3, 1e-12);
    EXPECT_EQ(select_next_hop(cur, table_of(0, {n}), node_id(9), {1000, 0}, cfg),
              RoutingDecision{Forward{node_id(1)}});
}

TEST(SelectNextHop, RingPriorityBeatsRawScore) {
    // Threshold omega * 1/3 = 0.1.
    const Velocity v{1.0, std::sqrt(8.0)};
    const auto cur = vehicle(0, {0, 0}, v);
    const Position dest{1000, 0};
    const auto outer = entry(1, {220, 0});
    const auto inner = entry(2, {120, 0}, v);
    EbgrConfig cfg;
    const double s_outer = score_neighbor(cur, outer, dest, cfg);
    const double s_inner = score_neighbor(cur, inner, dest, cfg);
    const double threshold = carry_threshold(cur, dest, cfg.factors);
    ASSERT_NEAR(threshold, 0.1, 1e-12);
    ASSERT_GT(s_inner, s_outer);
    ASSERT_GT(s_outer, threshold);
    const auto t = table_of(0, {outer, inner});
    EXPECT_EQ(select_next_hop(cur, t, node_id(9), dest, cfg), RoutingDecision{Forward{node_id(1)}});
    cfg.mode = SelectionMode::global_argmax;
    EXPECT_EQ(select_next_hop(cur, t, node_id(9), dest, cfg), RoutingDecision{Forward{node_id(2)}});
}

TEST(SelectNextHop, FallsThroughRingBelowThreshold) {
    const auto cur = vehicle(0, {0, 0}, {10, 0});
    const Position dest{1000, 0};
    // Ring 1 member heading away fast: low DMI and short lifetime.
    const auto weak = entry(1, {230, 0}, {-25, 0});
    const auto strong = entry(2, {60, 0}, {10, 0});
    const EbgrConfig cfg{};
    ASSERT_LE(score_neighbor(cur, weak, dest, cfg), carry_threshold(cur, dest, cfg.factors));
    EXPECT_EQ(select_next_hop(cur, table_of(0, {weak, strong}), node_id(9), dest, cfg),
              RoutingDecision{Forward{node_id(2)}});
}

TEST(SelectNextHop, DestinationInTableIsChosen) {
    const auto cur = vehicle(0, {0, 0}, {10, 0});
    const auto dst = entry(7, {-100, 0}, {-25, 0});
    const auto other = entry(1, {220, 0}, {10, 0});
    EXPECT_EQ(select_next_hop(cur, table_of(0, {dst, other}), node_id(7), {-100, 0}, {}),
              RoutingDecision{Forward{node_id(7)}});
}

TEST(SelectNextHop, TiesGoToLowestId) {
    const auto cur = vehicle(0, {0, 0}, {0, 0});
    const auto a = entry(5, {0, 220}, {0, 0});
    const auto b = entry(3, {0, -220}, {0, 0});
    EXPECT_EQ(select_next_hop(cur, table_of(0, {a, b}), node_id(9), {1000, 0},
                              EbgrConfig{.require_progress = false}),
              RoutingDecision{Forward{node_id(3)}});
}

TEST(SelectNextHop, ProgressFilter) {
    const auto cur = vehicle(0, {0, 0}, {0, 0});
    const auto back = entry(1, {-220, 0}, {0, 0});
    EbgrConfig cfg;
    EXPECT_EQ(select_next_hop(cur, table_of(0, {back}), node_id(9), {1000, 0}, cfg),
              RoutingDecision{Carry{}});
    cfg.require_progress = false;
    EXPECT_EQ(select_next_hop(cur, table_of(0, {back}), node_id(9), {1000, 0}, cfg),
              RoutingDecision{Forward{node_id(1)}});
}

namespace {

struct Instance {
    VehicleState current;
    NeighborTable table;
    std::vector<oracle::Neighbor> neighbors;
    NodeId dest;
    Position dest_pos;
};

Instance random_instance(Rng& rng, double mtr) {
    Instance in;
    in.current = vehicle(0, {500, 500}, fixtures::velocity(rng, 25));
    in.table = NeighborTable{node_id(0)};
    const auto n = rng.below(12);
    for (std::uint32_t k = 1; k <= n; ++k) {
        // Some neighbours beyond MTR to exercise the out-of-range branch.
        const Position p = fixtures::point_near(rng, in.current.pos, mtr * 1.05);
        const Velocity v = fixtures::velocity(rng, 25);
        in.table.insert(entry(k, p, v));
        in.neighbors.push_back({node_id(k), p, v});
    }
    in.dest = node_id(100);
    if (n > 0 && rng.below(6) == 0) {
        in.dest = node_id(static_cast<std::uint32_t>(1 + rng.below(n)));
        in.dest_pos = in.neighbors[to_index(in.dest) - 1].pos;
    } else {
        in.dest_pos = fixtures::point_near(rng, in.current.pos, 1500);
    }
    return in;
}

}  // namespace

class OracleAgreement : public ::testing::TestWithParam<std::tuple<SelectionMode, bool>> {};

TEST_P(OracleAgreement, MatchesBruteForce) {
    EbgrConfig cfg;
    cfg.mode = std::get<0>(GetParam());
    cfg.require_progress = std::get<1>(GetParam());
    Rng rng{25};
    int forwards = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto in = random_instance(rng, cfg.rings.mtr);
        const auto got = select_next_hop(in.current, in.table, in.dest, in.dest_pos, cfg);
        const auto want = oracle::next_hop(in.current.pos, in.current.vel, in.neighbors, in.dest,
                                           in.dest_pos, cfg);
        if (want) {
            ++forwards;
            ASSERT_EQ(got, RoutingDecision{Forward{*want}}) << "instance " << i;
            ASSERT_LT(distance(in.current.pos, in.table.find(*want)->last_pos), cfg.rings.mtr);
        } else {
            ASSERT_EQ(got, RoutingDecision{Carry{}}) << "instance " << i;
        }
    }
    EXPECT_GT(forwards, 500);
}

INSTANTIATE_TEST_SUITE_P(Modes, OracleAgreement,
                         ::testing::Combine(::testing::Values(SelectionMode::ring_priority,
                                                              SelectionMode::global_argmax),
                                            ::testing::Bool()));

TEST(SelectNextHop, RingPriorityProperty) {
    // Whenever some ring-k member clears the threshold, the chosen hop is
    // never from a ring further in.
    EbgrConfig cfg;
    Rng rng{26};
    for (int i = 0; i < 2000; ++i) {
        const auto in = random_instance(rng, cfg.rings.mtr);
        const auto got = select_next_hop(in.current, in.table, in.dest, in.dest_pos, cfg);
        if (!is_forward(got) || std::get<Forward>(got).next_hop == in.dest) continue;
        const auto* chosen = in.table.find(std::get<Forward>(got).next_hop);
        const int chosen_ring = oracle::ring_of(distance(in.current.pos, chosen->last_pos), cfg.rings);
        const double threshold = carry_threshold(in.current, in.dest_pos, cfg.factors);
        for (const auto& [id, e] : in.table) {
            const int r = oracle::ring_of(distance(in.current.pos, e.last_pos), cfg.rings);
            if (r >= chosen_ring || r > 5) continue;
            if (!(distance(e.last_pos, in.dest_pos) < distance(in.current.pos, in.dest_pos))) continue;
            EXPECT_LE(score_neighbor(in.current, e, in.dest_pos, cfg), threshold);
        }
    }
}

TEST(SelectNextHop, Deterministic) {
    Rng rng{27};
    for (int i = 0; i < 200; ++i) {
        const auto in = random_instance(rng, 250);
        EXPECT_EQ(select_next_hop(in.current, in.table, in.dest, in.dest_pos, {}),
                  select_next_hop(in.current, in.table, in.dest, in.dest_pos, {}));
    }
}
