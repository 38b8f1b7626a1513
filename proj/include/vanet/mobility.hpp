#pragma once

// Lane-structured grid mobility: vehicles drive along lanes of a
// Manhattan road grid with individual speeds, keep a security distance to
// the vehicle ahead, overtake when a neighbouring lane is clear and pick
// their turn at each crossing by shortest road distance to a trip target.

#include "vanet/core.hpp"
#include "vanet/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace vanet {

class MobilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Heading : std::uint8_t { north, east, south, west };

const char* to_string(Heading h);
Heading reverse(Heading h);

enum class Axis : std::uint8_t { horizontal, vertical };

struct RoadRef {
    Axis axis{Axis::horizontal};
    std::uint32_t index{0};

    friend constexpr bool operator==(RoadRef, RoadRef) = default;
};

/// Road grid plus the shortest-path tables used for turn decisions.
class RoadNetwork {
public:
    RoadNetwork() = default;

    double width() const { return width_; }
    double height() const { return height_; }
    const std::vector<double>& horizontal_roads() const { return horizontal_; }
    const std::vector<double>& vertical_roads() const { return vertical_; }
    std::uint32_t lanes_per_direction() const { return lanes_; }
    double lane_width() const { return lane_width_; }

    /// Coordinate of the road centre line across its axis (y for
    /// horizontal roads, x for vertical ones).
    double road_coordinate(RoadRef r) const;
    /// Length of a road, i.e. the extent of its longitudinal axis.
    double road_length(RoadRef r) const;
    /// Position on a lane centre line at longitudinal offset `s`.
    Position lane_point(RoadRef r, Heading h, std::uint32_t lane, double s) const;
    /// Point on a road centre line.
    Position road_point(RoadRef r, double s) const;

    /// Shortest road distance from the crossing of horizontal road `hi` and
    /// vertical road `vi`, leaving in direction `h`, to a point at offset
    /// `target_s` on road `target`.
    double distance_via(std::uint32_t hi, std::uint32_t vi, Heading h, RoadRef target,
                        double target_s) const;

    /// Total centre-line length of all roads.
    double total_road_length() const;

    friend RoadNetwork build_road_network(double width, double height, std::uint32_t h_count,
                                          std::uint32_t v_count, std::uint32_t lanes,
                                          double lane_width);

private:
    struct RoadNode {
        std::uint32_t node;
        double s;
    };

    std::uint32_t intersection_node(std::uint32_t hi, std::uint32_t vi) const {
        return hi * static_cast<std::uint32_t>(vertical_.size()) + vi;
    }
    const std::vector<RoadNode>& nodes_on(RoadRef r) const;
    double node_to_target(std::uint32_t node, RoadRef target, double target_s) const;

    double width_{0.0};
    double height_{0.0};
    std::vector<double> horizontal_;
    std::vector<double> vertical_;
    std::uint32_t lanes_{1};
    double lane_width_{3.5};

    std::uint32_t node_count_{0};
    std::vector<double> dist_;  // node_count_ x node_count_
    std::vector<std::vector<RoadNode>> horizontal_nodes_;
    std::vector<std::vector<RoadNode>> vertical_nodes_;
};

/// Evenly spaced grid: road k (1-based) of n sits at extent/(n+1)*k.
RoadNetwork build_road_network(double width, double height, std::uint32_t h_count,
                               std::uint32_t v_count, std::uint32_t lanes = 1,
                               double lane_width = 3.5);

struct VehicleState {
    NodeId id{};
    Position pos;
    Velocity vel;
    std::uint32_t lane{0};
    RoadRef road;
    Heading heading{Heading::east};
    Position trip_target;
    RoadRef target_road;
    double max_speed{0.0};

    double speed() const { return vel.speed(); }
};

struct MobilityConfig {
    double security_distance{10.0};
    bool overtaking_enabled{true};
    double speed_min{0.0};
    double speed_max{25.0};
    double tick{0.1};
};

/// Hard cap on vehicle speed in m/s.
inline constexpr double kSpeedCap = 25.0;

void validate(const MobilityConfig& cfg);

/// Places `n` vehicles uniformly over the total lane length, one per
/// security-distance slot. Throws MobilityError when they do not fit.
std::vector<VehicleState> spawn_vehicles(const RoadNetwork& net, std::size_t n,
                                         const MobilityConfig& cfg, std::uint64_t seed);

/// Advances every vehicle by one tick.
std::vector<VehicleState> step(std::span<const VehicleState> states, const RoadNetwork& net,
                               const MobilityConfig& cfg, Rng& rng);

/// Heading to take at the crossing nearest to the vehicle. Returns the
/// current heading if the vehicle's target is at that crossing.
Heading choose_direction(const VehicleState& v, const RoadNetwork& net);

/// Longitudinal coordinate of a vehicle along its road.
double longitudinal(const VehicleState& v);

/// Writes one CSV line per vehicle: time,id,x,y,vx,vy.
void write_trace_rows(std::ostream& os, SimTime now, std::span<const VehicleState> states);

}  // namespace vanet
