#pragma once

// Comparison forwarders: greedy geographic forwarding with carry at local
// optima (no perimeter mode), and a one-hop predictive directional greedy
// forwarder in the style of PDGR.

#include "vanet/core.hpp"
#include "vanet/mobility.hpp"
#include "vanet/neighbors.hpp"

namespace vanet {

struct PdgrConfig {
    double prediction_horizon{1.0};  // seconds
    double distance_weight{0.5};
    double direction_weight{0.5};
};

void validate(const PdgrConfig& cfg);

/// Neighbour nearest to the destination, if strictly nearer than the
/// forwarder; Carry otherwise. Entries farther than `range` are ignored.
RoutingDecision greedy_next_hop(const VehicleState& current, const NeighborTable& table,
                                Position dest_pos, double range = 250.0);

/// Scores each neighbour on its predicted position after the horizon and
/// on its heading; forwards to the best positive score.
RoutingDecision pdgr_next_hop(const VehicleState& current, const NeighborTable& table,
                              Position dest_pos, const PdgrConfig& cfg, double range = 250.0);

/// Score used by pdgr_next_hop, exposed for tests.
double pdgr_score(const VehicleState& current, const NeighborEntry& n, Position dest_pos,
                  const PdgrConfig& cfg);

}  // namespace vanet
