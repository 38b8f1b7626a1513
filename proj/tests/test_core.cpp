#include "fixtures.hpp"
#include "vanet/core.hpp"

#include <gtest/gtest.h>

using namespace vanet;

TEST(Distance, Examples) {
    EXPECT_NEAR(distance({0, 0}, {3, 4}), 5.0, 1e-9);
    EXPECT_NEAR(distance({7, 2}, {7, 2}), 0.0, 1e-9);
    EXPECT_NEAR(distance({0, 0}, {250, 0}), 250.0, 1e-9);
}

TEST(Distance, IsAMetric) {
    Rng rng{11};
    for (int i = 0; i < 2000; ++i) {
        const Position a{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)};
        const Position b{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)};
        const Position c{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)};
        EXPECT_GE(distance(a, b), 0.0);
        EXPECT_EQ(distance(a, b), distance(b, a));
        EXPECT_EQ(distance(a, a), 0.0);
        EXPECT_GT(distance(a, b), 0.0);
        EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-9);
    }
}

TEST(Cosine, Examples) {
    EXPECT_NEAR(cosine_between({10, 0}, {5, 0}), 1.0, 1e-9);
    EXPECT_NEAR(cosine_between({10, 0}, {0, 5}), 0.0, 1e-9);
    EXPECT_EQ(cosine_between({0, 0}, {5, 5}), 0.0);
    EXPECT_EQ(cosine_between({3, 1}, {0, 0}), 0.0);
}

TEST(Cosine, BoundedAndScaleInvariant) {
    Rng rng{12};
    for (int i = 0; i < 5000; ++i) {
        const Velocity v{rng.uniform(-30, 30), rng.uniform(-30, 30)};
        const Vec2 d{rng.uniform(-500, 500), rng.uniform(-500, 500)};
        const double c = cosine_between(v, d);
        ASSERT_GE(c, -1.0);
        ASSERT_LE(c, 1.0);
        const double k = rng.uniform(1e-3, 1e3);
        EXPECT_NEAR(cosine_between({k * v.vx, k * v.vy}, d), c, 1e-9);
    }
    // Parallel vectors whose rounding would push the cosine past 1.
    EXPECT_LE(cosine_between({1e-300, 1e-300}, {1e300, 1e300}), 1.0);
    EXPECT_LE(cosine_between({0.1, 0.7}, {0.1 * 3, 0.7 * 3}), 1.0);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
    auto a = Rng::stream(5, 1);
    auto b = Rng::stream(5, 1);
    auto c = Rng::stream(5, 2);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        EXPECT_NE(x, c.next());
    }
}

TEST(Rng, BelowStaysInRange) {
    Rng rng{3};
    std::array<int, 7> hist{};
    for (int i = 0; i < 7000; ++i) {
        const auto k = rng.below(7);
        ASSERT_LT(k, 7U);
        ++hist[k];
    }
    for (int h : hist) EXPECT_GT(h, 800);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}
