#pragma once

// Edge-node based greedy routing: neighbours are bucketed into distance
// rings around the forwarder and scored by a weighted sum of progress
// toward the destination, heading alignment and predicted link stability.

#include "vanet/core.hpp"
#include "vanet/mobility.hpp"
#include "vanet/neighbors.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace vanet {

/// Concentric forwarding rings, outermost first.
struct RingBounds {
    double mtr{250.0};
    double l1{200.0};
    double l2{150.0};
    double l3{100.0};
    double l4{50.0};
};

/// Weights of closeness, direction and stability in the potential score.
struct PotentialFactors {
    double rho{0.3};
    double omega{0.3};
    double lambda{0.4};
};

struct StabilityConfig {
    double sigma{25.0};         // route validity time, seconds
    double radio_range{250.0};  // meters
};

enum class SelectionMode : std::uint8_t {
    ring_priority,  // outermost non-empty ring whose best score clears the threshold
    global_argmax,  // best score over every ring
};

struct EbgrConfig {
    PotentialFactors factors;
    StabilityConfig stability;
    RingBounds rings;
    SelectionMode mode{SelectionMode::ring_priority};
    /// Only neighbours strictly closer to the destination than the forwarder
    /// are candidates. Without it the stability term lets backward
    /// neighbours clear the threshold and packets bounce between nodes.
    bool require_progress{true};
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void validate(const RingBounds& rb);
void validate(const PotentialFactors& f);
void validate(const StabilityConfig& sc, const RingBounds& rb);
void validate(const EbgrConfig& cfg);

/// 1 - d_i/d_c. Throws std::domain_error when d_c <= 0: the forwarder is
/// already at the destination and must deliver instead of scoring.
double closeness(double d_i, double d_c);

/// Cosine between a neighbour's velocity and its bearing to the destination.
double direction_alignment(Velocity v_i, Position loc_i, Position loc_d);

inline constexpr double kInfiniteLifetime = std::numeric_limits<double>::infinity();

/// Time until nodes i and j, moving at constant velocity, are farther apart
/// than `range`. kInfiniteLifetime for equal velocities; 0 if they are
/// already out of range.
double link_lifetime(Position pos_i, Velocity vel_i, Position pos_j, Velocity vel_j, double range);

/// min(lifetime / sigma, 1).
double link_stability(double lifetime, double sigma);

double potential_score(double dc, double dmi, double ls, const PotentialFactors& f);

enum class Ring : std::uint8_t {
    mtr_l1 = 1,  // [l1, mtr)
    l1_l2 = 2,   // [l2, l1)
    l2_l3 = 3,   // [l3, l2)
    l3_l4 = 4,   // [l4, l3)
    inner = 5,   // [0, l4)
    out_of_range = 6,
};

/// Half-open ring classification. Throws std::invalid_argument for d < 0.
Ring classify_ring(double d_ci, const RingBounds& rb);

/// Score of one neighbour as seen by the forwarder `current`.
double score_neighbor(const VehicleState& current, const NeighborEntry& n, Position dest_pos,
                      const EbgrConfig& cfg);

/// Score a neighbour must beat: the forwarder's own weighted heading term.
double carry_threshold(const VehicleState& current, Position dest_pos, const PotentialFactors& f);

/// Next hop for a packet carried by `current`. If `dest` is a table entry
/// inside the MTR it is chosen directly. Carry when no candidate clears
/// the threshold.
RoutingDecision select_next_hop(const VehicleState& current, const NeighborTable& table,
                                NodeId dest, Position dest_pos, const EbgrConfig& cfg);

}  // namespace vanet
