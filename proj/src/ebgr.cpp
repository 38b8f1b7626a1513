#include "vanet/ebgr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace vanet {

void validate(const RingBounds& rb) {
    if (!(rb.mtr > rb.l1 && rb.l1 > rb.l2 && rb.l2 > rb.l3 && rb.l3 > rb.l4 && rb.l4 > 0.0)) {
        throw ConfigError("ring bounds must satisfy mtr > l1 > l2 > l3 > l4 > 0");
    }
}

void validate(const PotentialFactors& f) {
    if (!(f.rho > 0.0) || !(f.omega > 0.0) || !(f.lambda > 0.0)) {
        throw ConfigError("rho, omega and lambda must all be positive");
    }
    if (!(f.lambda > f.rho)) {
        throw ConfigError("lambda must exceed rho");
    }
    if (!(f.lambda > f.omega)) {
        throw ConfigError("lambda must exceed omega");
    }
    if (std::abs(f.rho + f.omega + f.lambda - 1.0) > 1e-12) {
        throw ConfigError("rho + omega + lambda must equal 1");
    }
}

void validate(const StabilityConfig& sc, const RingBounds& rb) {
    if (!(sc.sigma > 0.0)) {
        throw ConfigError("sigma must be positive");
    }
    if (sc.radio_range != rb.mtr) {
        throw ConfigError("stability radio_range must equal the ring MTR");
    }
}

void validate(const EbgrConfig& cfg) {
    validate(cfg.rings);
    validate(cfg.factors);
    validate(cfg.stability, cfg.rings);
}

double closeness(double d_i, double d_c) {
    if (!(d_c > 0.0)) {
        throw std::domain_error("closeness undefined at the destination (d_c <= 0)");
    }
    return 1.0 - d_i / d_c;
}

double direction_alignment(Velocity v_i, Position loc_i, Position loc_d) {
    return cosine_between(v_i, loc_d - loc_i);
}

double link_lifetime(Position pos_i, Velocity vel_i, Position pos_j, Velocity vel_j,
                     double range) {
    const Vec2 dp = pos_i - pos_j;
    const Vec2 dv = vel_i.vec() - vel_j.vec();
    const double a = dot(dv, dv);
    const double b = 2.0 * dot(dp, dv);
    const double c = dot(dp, dp) - range * range;
    if (c > 0.0) {
        return 0.0;
    }
    if (a == 0.0) {
        return kInfiniteLifetime;
    }
    // c <= 0 makes the roots straddle zero, so the discriminant is >= 0.
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        throw std::logic_error("link_lifetime: negative discriminant for an in-range pair");
    }
    const double sq = std::sqrt(disc);
    // Larger root, in the cancellation-free form.
    if (b >= 0.0) {
        return b + sq > 0.0 ? std::max((-2.0 * c) / (b + sq), 0.0) : 0.0;
    }
    const double t = (sq - b) / (2.0 * a);
    return std::max(t, 0.0);
}

double link_stability(double lifetime, double sigma) {
    if (lifetime >= sigma) {
        return 1.0;
    }
    return std::clamp(lifetime / sigma, 0.0, 1.0);
}

double potential_score(double dc, double dmi, double ls, const PotentialFactors& f) {
    return f.rho * dc + f.omega * dmi + f.lambda * ls;
}

Ring classify_ring(double d_ci, const RingBounds& rb) {
    if (d_ci < 0.0 || std::isnan(d_ci)) {
        throw std::invalid_argument("ring distance must be non-negative");
    }
    if (d_ci >= rb.mtr) return Ring::out_of_range;
    if (d_ci >= rb.l1) return Ring::mtr_l1;
    if (d_ci >= rb.l2) return Ring::l1_l2;
    if (d_ci >= rb.l3) return Ring::l2_l3;
    if (d_ci >= rb.l4) return Ring::l3_l4;
    return Ring::inner;
}

double score_neighbor(const VehicleState& current, const NeighborEntry& n, Position dest_pos,
                      const EbgrConfig& cfg) {
    const double d_c = distance(current.pos, dest_pos);
    const double dc = closeness(distance(n.last_pos, dest_pos), d_c);
    const double dmi = direction_alignment(n.last_vel, n.last_pos, dest_pos);
    const double lifetime = link_lifetime(current.pos, current.vel, n.last_pos, n.last_vel,
                                          cfg.stability.radio_range);
    const double ls = link_stability(lifetime, cfg.stability.sigma);
    return potential_score(dc, dmi, ls, cfg.factors);
}

double carry_threshold(const VehicleState& current, Position dest_pos, const PotentialFactors& f) {
    return f.omega * cosine_between(current.vel, dest_pos - current.pos);
}

RoutingDecision select_next_hop(const VehicleState& current, const NeighborTable& table,
                                NodeId dest, Position dest_pos, const EbgrConfig& cfg) {
    if (const auto* d = table.find(dest);
        d != nullptr && distance(current.pos, d->last_pos) < cfg.rings.mtr) {
        return Forward{dest};
    }
    if (!(distance(current.pos, dest_pos) > 0.0)) {
        return Carry{};
    }

    struct Best {
        NodeId id;
        double score;
    };
    // One slot per ring; index 0 is unused so rings index directly.
    std::array<std::optional<Best>, 6> best_in_ring{};
    std::optional<Best> best_overall;

    // Table iteration is in ascending NodeId, so strict '>' keeps the lowest id on ties.
    for (const auto& [id, entry] : table) {
        const Ring ring = classify_ring(distance(current.pos, entry.last_pos), cfg.rings);
        if (ring == Ring::out_of_range) {
            continue;
        }
        if (cfg.require_progress &&
            !(distance(entry.last_pos, dest_pos) < distance(current.pos, dest_pos))) {
            continue;
        }
        const double s = score_neighbor(current, entry, dest_pos, cfg);
        auto& slot = best_in_ring[static_cast<std::size_t>(ring)];
        if (!slot || s > slot->score) {
            slot = Best{id, s};
        }
        if (!best_overall || s > best_overall->score) {
            best_overall = Best{id, s};
        }
    }

    const double threshold = carry_threshold(current, dest_pos, cfg.factors);
    if (cfg.mode == SelectionMode::global_argmax) {
        if (best_overall && best_overall->score > threshold) {
            return Forward{best_overall->id};
        }
        return Carry{};
    }
    for (std::size_t r = 1; r <= 5; ++r) {
        const auto& slot = best_in_ring[r];
        if (slot && slot->score > threshold) {
            return Forward{slot->id};
        }
    }
    return Carry{};
}

}  // namespace vanet
