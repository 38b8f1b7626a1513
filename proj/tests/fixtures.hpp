#pragma once

#include "vanet/core.hpp"
#include "vanet/mobility.hpp"
#include "vanet/neighbors.hpp"
#include "vanet/random.hpp"

#include <cmath>
#include <numbers>

namespace fixtures {

using namespace vanet;

inline VehicleState vehicle(std::uint32_t id, Position pos, Velocity vel = {}) {
    VehicleState v;
    v.id = node_id(id);
    v.pos = pos;
    v.vel = vel;
    return v;
}

inline NeighborEntry entry(std::uint32_t id, Position pos, Velocity vel = {}) {
    return NeighborEntry{node_id(id), pos, vel, 0.0};
}

inline NeighborTable table_of(std::uint32_t owner, std::initializer_list<NeighborEntry> es) {
    NeighborTable t{node_id(owner)};
    for (const auto& e : es) t.insert(e);
    return t;
}

/// Random point at distance < `radius` from `centre`.
inline Position point_near(Rng& rng, Position centre, double radius) {
    const double r = radius * std::sqrt(rng.uniform01());
    const double a = 2.0 * std::numbers::pi * rng.uniform01();
    return {centre.x + r * std::cos(a), centre.y + r * std::sin(a)};
}

/// Random velocity with speed in [0, max_speed].
inline Velocity velocity(Rng& rng, double max_speed) {
    const double s = rng.uniform(0.0, max_speed);
    const double a = 2.0 * std::numbers::pi * rng.uniform01();
    return {s * std::cos(a), s * std::sin(a)};
}

}  // namespace fixtures
