#include "vanet/baselines.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace vanet {

void validate(const PdgrConfig& cfg) {
    if (!(cfg.prediction_horizon > 0.0)) {
        throw std::invalid_argument("pdgr prediction_horizon must be positive");
    }
    if (!(cfg.distance_weight > 0.0) || !(cfg.direction_weight > 0.0)) {
        throw std::invalid_argument("pdgr weights must be positive");
    }
    if (std::abs(cfg.distance_weight + cfg.direction_weight - 1.0) > 1e-12) {
        throw std::invalid_argument("pdgr weights must sum to 1");
    }
}

RoutingDecision greedy_next_hop(const VehicleState& current, const NeighborTable& table,
                                Position dest_pos, double range) {
    std::optional<NodeId> best;
    double best_d = distance(current.pos, dest_pos);
    for (const auto& [id, entry] : table) {
        if (distance(current.pos, entry.last_pos) > range) {
            continue;
        }
        const double d = distance(entry.last_pos, dest_pos);
        if (d < best_d) {
            best_d = d;
            best = id;
        }
    }
    if (best) {
        return Forward{*best};
    }
    return Carry{};
}

double pdgr_score(const VehicleState& current, const NeighborEntry& n, Position dest_pos,
                  const PdgrConfig& cfg) {
    const double d_c = distance(current.pos, dest_pos);
    const Position predicted = n.last_pos + n.last_vel * cfg.prediction_horizon;
    return cfg.distance_weight * (1.0 - distance(predicted, dest_pos) / d_c) +
           cfg.direction_weight * cosine_between(n.last_vel, dest_pos - n.last_pos);
}

RoutingDecision pdgr_next_hop(const VehicleState& current, const NeighborTable& table,
                              Position dest_pos, const PdgrConfig& cfg, double range) {
    if (!(distance(current.pos, dest_pos) > 0.0)) {
        return Carry{};
    }
    std::optional<NodeId> best;
    double best_score = 0.0;
    for (const auto& [id, entry] : table) {
        if (distance(current.pos, entry.last_pos) > range) {
            continue;
        }
        const double s = pdgr_score(current, entry, dest_pos, cfg);
        if (s > best_score) {
            best_score = s;
            best = id;
        }
    }
    if (best) {
        return Forward{*best};
    }
    return Carry{};
}

}  // namespace vanet
