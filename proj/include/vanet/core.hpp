#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <variant>

namespace vanet {

/// Free 2-D vector (displacements, relative velocities).
struct Vec2 {
    double x{0.0};
    double y{0.0};

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double k, Vec2 v) { return {k * v.x, k * v.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Planar position in meters.
struct Position {
    double x{0.0};
    double y{0.0};

    friend constexpr bool operator==(Position, Position) = default;
};

/// Velocity in meters/second.
struct Velocity {
    double vx{0.0};
    double vy{0.0};

    constexpr Vec2 vec() const { return {vx, vy}; }
    double speed() const { return std::hypot(vx, vy); }
    friend constexpr bool operator==(Velocity, Velocity) = default;
};

constexpr Vec2 operator-(Position a, Position b) { return {a.x - b.x, a.y - b.y}; }
constexpr Position operator+(Position p, Vec2 d) { return {p.x + d.x, p.y + d.y}; }
constexpr Vec2 operator*(Velocity v, double t) { return {v.vx * t, v.vy * t}; }

/// Per-vehicle identity, stable for a run.
enum class NodeId : std::uint32_t {};

constexpr std::uint32_t to_index(NodeId id) { return static_cast<std::uint32_t>(id); }
constexpr NodeId node_id(std::uint32_t i) { return static_cast<NodeId>(i); }

/// Seconds since run start.
using SimTime = double;

/// Euclidean distance between two positions.
inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Cosine of the angle between a velocity and a displacement. Zero-length
/// inputs give 0.0 (neutral alignment) so no NaN reaches a score.
double cosine_between(Velocity v, Vec2 d);

/// Outcome of every next-hop function.
struct Forward {
    NodeId next_hop;
    friend constexpr bool operator==(Forward, Forward) = default;
};
struct Carry {
    friend constexpr bool operator==(Carry, Carry) = default;
};
using RoutingDecision = std::variant<Forward, Carry>;

inline bool is_forward(const RoutingDecision& d) { return std::holds_alternative<Forward>(d); }

}  // namespace vanet

template <>
struct std::hash<vanet::NodeId> {
    std::size_t operator()(vanet::NodeId id) const noexcept {
        return std::hash<std::uint32_t>{}(vanet::to_index(id));
    }
};
