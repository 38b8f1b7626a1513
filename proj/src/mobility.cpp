#include "vanet/mobility.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>

namespace vanet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;

constexpr std::array<Heading, 4> kTurnOrder{Heading::north, Heading::east, Heading::south,
                                            Heading::west};

Axis axis_of(Heading h) {
    return (h == Heading::east || h == Heading::west) ? Axis::horizontal : Axis::vertical;
}

double sign_of(Heading h) { return (h == Heading::east || h == Heading::north) ? 1.0 : -1.0; }

Velocity velocity_for(Heading h, double speed) {
    switch (h) {
        case Heading::north: return {0.0, speed};
        case Heading::south: return {0.0, -speed};
        case Heading::east: return {speed, 0.0};
        case Heading::west: return {-speed, 0.0};
    }
    return {};
}

struct LaneKey {
    RoadRef road;
    Heading heading;
    std::uint32_t lane;

    friend bool operator==(const LaneKey&, const LaneKey&) = default;
};

LaneKey lane_of(const VehicleState& v) { return {v.road, v.heading, v.lane}; }

std::pair<RoadRef, double> random_target(const RoadNetwork& net, Rng& rng) {
    const auto nh = static_cast<std::uint32_t>(net.horizontal_roads().size());
    const auto nv = static_cast<std::uint32_t>(net.vertical_roads().size());
    const double u = rng.uniform01() * net.total_road_length();
    const double h_total = nh * net.width();
    if (u < h_total) {
        const auto i = std::min(nh - 1, static_cast<std::uint32_t>(u / net.width()));
        return {{Axis::horizontal, i}, std::clamp(u - i * net.width(), 0.0, net.width())};
    }
    const double rest = u - h_total;
    const auto j = std::min(nv - 1, static_cast<std::uint32_t>(rest / net.height()));
    return {{Axis::vertical, j}, std::clamp(rest - j * net.height(), 0.0, net.height())};
}

void assign_target(VehicleState& v, const RoadNetwork& net, Rng& rng) {
    const auto [road, s] = random_target(net, rng);
    v.target_road = road;
    v.trip_target = net.road_point(road, s);
}

double target_offset(const VehicleState& v) {
    return v.target_road.axis == Axis::horizontal ? v.trip_target.x : v.trip_target.y;
}

// Indices of the crossing nearest to the vehicle: (horizontal, vertical).
std::pair<std::uint32_t, std::uint32_t> nearest_crossing(const VehicleState& v,
                                                         const RoadNetwork& net) {
    const double s = longitudinal(v);
    const auto& perp = v.road.axis == Axis::horizontal ? net.vertical_roads() : net.horizontal_roads();
    std::uint32_t best = 0;
    for (std::uint32_t k = 1; k < perp.size(); ++k) {
        if (std::abs(perp[k] - s) < std::abs(perp[best] - s)) {
            best = k;
        }
    }
    if (v.road.axis == Axis::horizontal) {
        return {v.road.index, best};
    }
    return {best, v.road.index};
}

Heading choose_at(const VehicleState& v, const RoadNetwork& net, std::uint32_t hi,
                  std::uint32_t vi) {
    const Position crossing{net.vertical_roads()[vi], net.horizontal_roads()[hi]};
    if (distance(crossing, v.trip_target) < kEps) {
        return v.heading;
    }
    const double ts = target_offset(v);
    Heading best = v.heading;
    double best_cost = kInf;
    for (Heading h : kTurnOrder) {
        const double c = net.distance_via(hi, vi, h, v.target_road, ts);
        if (c < best_cost - kEps) {
            best_cost = c;
            best = h;
        }
    }
    return best;
}

// True when no other vehicle in `key` is closer than `gap` to offset `s`.
bool lane_clear(std::span<const VehicleState> all, std::size_t self, const LaneKey& key,
                double s, double gap) {
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (k == self || !(lane_of(all[k]) == key)) {
            continue;
        }
        if (std::abs(longitudinal(all[k]) - s) < gap) {
            return false;
        }
    }
    return true;
}

struct Leader {
    std::size_t index;
    double gap;
};

std::optional<Leader> find_leader(std::span<const VehicleState> all, std::size_t self,
                                  const LaneKey& key, double s) {
    const double sign = sign_of(key.heading);
    std::optional<Leader> best;
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (k == self || !(lane_of(all[k]) == key)) {
            continue;
        }
        const double gap = sign * (longitudinal(all[k]) - s);
        if (gap >= 0.0 && (!best || gap < best->gap)) {
            best = Leader{k, gap};
        }
    }
    return best;
}

double min_node_spacing(const RoadNetwork& net) {
    double spacing = kInf;
    auto scan = [&](const std::vector<double>& coords, double extent) {
        double prev = 0.0;
        for (double c : coords) {
            spacing = std::min(spacing, c - prev);
            prev = c;
        }
        spacing = std::min(spacing, extent - prev);
    };
    scan(net.vertical_roads(), net.width());
    scan(net.horizontal_roads(), net.height());
    return spacing;
}

void move_vehicle(std::vector<VehicleState>& all, std::size_t self, const RoadNetwork& net,
                  const MobilityConfig& cfg, Rng& rng) {
    VehicleState& v = all[self];
    const double sd = cfg.security_distance;
    const double s0 = longitudinal(v);
    const double desired = v.max_speed;

    auto leader = find_leader(all, self, lane_of(v), s0);
    auto allowed = [&](const std::optional<Leader>& l) { return l ? l->gap - sd : kInf; };

    if (cfg.overtaking_enabled && leader && desired * cfg.tick > allowed(leader)) {
        for (int delta : {1, -1}) {
            const auto cand = static_cast<std::int64_t>(v.lane) + delta;
            if (cand < 0 || cand >= static_cast<std::int64_t>(net.lanes_per_direction())) {
                continue;
            }
            const LaneKey key{v.road, v.heading, static_cast<std::uint32_t>(cand)};
            if (!lane_clear(all, self, key, s0, sd)) {
                continue;
            }
            auto other = find_leader(all, self, key, s0);
            if (allowed(other) > allowed(leader)) {
                v.lane = key.lane;
                v.pos = net.lane_point(v.road, v.heading, v.lane, s0);
                leader = other;
                break;
            }
        }
    }

    double speed = desired;
    double advance = desired * cfg.tick;
    if (leader && advance > allowed(leader)) {
        speed = std::min(desired, all[leader->index].speed());
        advance = std::clamp(allowed(leader), 0.0, speed * cfg.tick);
    }

    const double sign = sign_of(v.heading);
    const double s1 = s0 + sign * advance;

    if (v.target_road == v.road) {
        const double ts = target_offset(v);
        if (sign * (ts - s0) >= 0.0 && sign * (ts - s1) <= 0.0) {
            assign_target(v, net, rng);
        }
    }

    const bool horizontal = v.road.axis == Axis::horizontal;
    const auto& perp = horizontal ? net.vertical_roads() : net.horizontal_roads();
    std::optional<std::uint32_t> crossing;
    for (std::uint32_t k = 0; k < perp.size(); ++k) {
        if (sign * (perp[k] - s0) > 0.0 && sign * (perp[k] - s1) <= 0.0 &&
            (!crossing || std::abs(perp[k] - s0) < std::abs(perp[*crossing] - s0))) {
            crossing = k;
        }
    }

    if (crossing) {
        const auto hi = horizontal ? v.road.index : *crossing;
        const auto vi = horizontal ? *crossing : v.road.index;
        const Heading next = choose_at(v, net, hi, vi);
        if (next != v.heading) {
            const double c = perp[*crossing];
            const bool same_road = axis_of(next) == v.road.axis;
            const RoadRef road = same_road ? v.road : RoadRef{axis_of(next), *crossing};
            const double base = same_road ? c : net.road_coordinate(v.road);
            const double s_new = base + sign_of(next) * std::abs(s1 - c);
            const LaneKey key{road, next, v.lane};
            if (lane_clear(all, self, key, s_new, sd)) {
                v.road = road;
                v.heading = next;
                v.pos = net.lane_point(road, next, v.lane, s_new);
                v.vel = velocity_for(next, speed);
                return;
            }
        }
    }

    const double extent = net.road_length(v.road);
    const double s_end = std::clamp(s1, 0.0, extent);
    const bool at_edge = sign > 0.0 ? s_end >= extent : s_end <= 0.0;
    if (at_edge) {
        const Heading back = reverse(v.heading);
        const LaneKey key{v.road, back, v.lane};
        if (lane_clear(all, self, key, s_end, sd)) {
            v.heading = back;
            v.pos = net.lane_point(v.road, back, v.lane, s_end);
            v.vel = velocity_for(back, speed);
        } else {
            v.pos = net.lane_point(v.road, v.heading, v.lane, s_end);
            v.vel = {};
        }
        return;
    }

    v.pos = net.lane_point(v.road, v.heading, v.lane, s_end);
    v.vel = velocity_for(v.heading, speed);
}

}  // namespace

const char* to_string(Heading h) {
    switch (h) {
        case Heading::north: return "north";
        case Heading::east: return "east";
        case Heading::south: return "south";
        case Heading::west: return "west";
    }
    return "?";
}

Heading reverse(Heading h) {
    switch (h) {
        case Heading::north: return Heading::south;
        case Heading::south: return Heading::north;
        case Heading::east: return Heading::west;
        case Heading::west: return Heading::east;
    }
    return h;
}

double RoadNetwork::road_coordinate(RoadRef r) const {
    return r.axis == Axis::horizontal ? horizontal_.at(r.index) : vertical_.at(r.index);
}

double RoadNetwork::road_length(RoadRef r) const {
    return r.axis == Axis::horizontal ? width_ : height_;
}

Position RoadNetwork::road_point(RoadRef r, double s) const {
    const double c = road_coordinate(r);
    return r.axis == Axis::horizontal ? Position{s, c} : Position{c, s};
}

Position RoadNetwork::lane_point(RoadRef r, Heading h, std::uint32_t lane, double s) const {
    const double c = road_coordinate(r);
    const double offset = (lane + 0.5) * lane_width_;
    // Right-hand traffic.
    switch (h) {
        case Heading::east: return {s, c - offset};
        case Heading::west: return {s, c + offset};
        case Heading::north: return {c + offset, s};
        case Heading::south: return {c - offset, s};
    }
    return {};
}

double RoadNetwork::total_road_length() const {
    return horizontal_.size() * width_ + vertical_.size() * height_;
}

const std::vector<RoadNetwork::RoadNode>& RoadNetwork::nodes_on(RoadRef r) const {
    return r.axis == Axis::horizontal ? horizontal_nodes_.at(r.index) : vertical_nodes_.at(r.index);
}

double RoadNetwork::node_to_target(std::uint32_t node, RoadRef target, double target_s) const {
    const auto& nodes = nodes_on(target);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const auto& a = nodes[k];
        const auto& b = nodes[k + 1];
        if (target_s >= a.s && target_s <= b.s) {
            return std::min(dist_[node * node_count_ + a.node] + (target_s - a.s),
                            dist_[node * node_count_ + b.node] + (b.s - target_s));
        }
    }
    return kInf;
}

double RoadNetwork::distance_via(std::uint32_t hi, std::uint32_t vi, Heading h, RoadRef target,
                                 double target_s) const {
    const bool horizontal = axis_of(h) == Axis::horizontal;
    const RoadRef road{axis_of(h), horizontal ? hi : vi};
    const double s0 = horizontal ? vertical_.at(vi) : horizontal_.at(hi);
    const auto& nodes = nodes_on(road);
    const std::uint32_t here = intersection_node(hi, vi);
    const auto it = std::find_if(nodes.begin(), nodes.end(),
                                 [&](const RoadNode& n) { return n.node == here; });
    const auto pos = static_cast<std::ptrdiff_t>(it - nodes.begin());
    const auto next = pos + (sign_of(h) > 0.0 ? 1 : -1);
    if (next < 0 || next >= static_cast<std::ptrdiff_t>(nodes.size())) {
        return kInf;
    }
    const RoadNode& nb = nodes[static_cast<std::size_t>(next)];
    if (target == road && (target_s - s0) * (nb.s - target_s) >= 0.0) {
        return std::abs(target_s - s0);
    }
    return std::abs(nb.s - s0) + node_to_target(nb.node, target, target_s);
}

RoadNetwork build_road_network(double width, double height, std::uint32_t h_count,
                               std::uint32_t v_count, std::uint32_t lanes, double lane_width) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw MobilityError("road network area must be positive");
    }
    if (h_count == 0 || v_count == 0) {
        throw MobilityError("road network needs at least one horizontal and one vertical road");
    }
    if (lanes == 0 || !(lane_width > 0.0)) {
        throw MobilityError("lanes_per_direction and lane_width must be positive");
    }

    RoadNetwork net;
    net.width_ = width;
    net.height_ = height;
    net.lanes_ = lanes;
    net.lane_width_ = lane_width;
    for (std::uint32_t k = 1; k <= h_count; ++k) {
        net.horizontal_.push_back(height / (h_count + 1) * k);
    }
    for (std::uint32_t k = 1; k <= v_count; ++k) {
        net.vertical_.push_back(width / (v_count + 1) * k);
    }
    const double half_road = lanes * lane_width;
    for (double y : net.horizontal_) {
        if (y - half_road < 0.0 || y + half_road > height) {
            throw MobilityError("lanes of a horizontal road leave the area");
        }
    }
    for (double x : net.vertical_) {
        if (x - half_road < 0.0 || x + half_road > width) {
            throw MobilityError("lanes of a vertical road leave the area");
        }
    }

    // Graph: crossings first, then two dead ends per road.
    const std::uint32_t crossings = h_count * v_count;
    net.node_count_ = crossings + 2 * h_count + 2 * v_count;
    net.horizontal_nodes_.resize(h_count);
    net.vertical_nodes_.resize(v_count);
    for (std::uint32_t i = 0; i < h_count; ++i) {
        auto& nodes = net.horizontal_nodes_[i];
        nodes.push_back({crossings + 2 * i, 0.0});
        for (std::uint32_t j = 0; j < v_count; ++j) {
            nodes.push_back({net.intersection_node(i, j), net.vertical_[j]});
        }
        nodes.push_back({crossings + 2 * i + 1, width});
    }
    for (std::uint32_t j = 0; j < v_count; ++j) {
        auto& nodes = net.vertical_nodes_[j];
        nodes.push_back({crossings + 2 * h_count + 2 * j, 0.0});
        for (std::uint32_t i = 0; i < h_count; ++i) {
            nodes.push_back({net.intersection_node(i, j), net.horizontal_[i]});
        }
        nodes.push_back({crossings + 2 * h_count + 2 * j + 1, height});
    }

    const std::uint32_t n = net.node_count_;
    net.dist_.assign(static_cast<std::size_t>(n) * n, kInf);
    for (std::uint32_t a = 0; a < n; ++a) {
        net.dist_[a * n + a] = 0.0;
    }
    auto link = [&](const std::vector<RoadNetwork::RoadNode>& nodes) {
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
            const auto a = nodes[k].node;
            const auto b = nodes[k + 1].node;
            const double w = nodes[k + 1].s - nodes[k].s;
            net.dist_[a * n + b] = std::min(net.dist_[a * n + b], w);
            net.dist_[b * n + a] = std::min(net.dist_[b * n + a], w);
        }
    };
    for (const auto& nodes : net.horizontal_nodes_) link(nodes);
    for (const auto& nodes : net.vertical_nodes_) link(nodes);
    for (std::uint32_t k = 0; k < n; ++k) {
        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::uint32_t b = 0; b < n; ++b) {
                const double via = net.dist_[a * n + k] + net.dist_[k * n + b];
                if (via < net.dist_[a * n + b]) {
                    net.dist_[a * n + b] = via;
                }
            }
        }
    }
    return net;
}

void validate(const MobilityConfig& cfg) {
    if (!(cfg.security_distance > 0.0)) {
        throw MobilityError("security_distance must be positive");
    }
    if (!(cfg.speed_min >= 0.0) || !(cfg.speed_max >= cfg.speed_min) ||
        !(cfg.speed_max <= kSpeedCap)) {
        throw MobilityError("speed range must satisfy 0 <= min <= max <= 25 m/s");
    }
    if (!(cfg.tick > 0.0)) {
        throw MobilityError("tick must be positive");
    }
}

double longitudinal(const VehicleState& v) {
    return v.road.axis == Axis::horizontal ? v.pos.x : v.pos.y;
}

std::vector<VehicleState> spawn_vehicles(const RoadNetwork& net, std::size_t n,
                                         const MobilityConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    if (n == 0) {
        throw MobilityError("at least one vehicle is required");
    }
    if (cfg.speed_max * cfg.tick >= min_node_spacing(net)) {
        throw MobilityError("tick too coarse: a vehicle could pass two crossings in one tick");
    }

    struct Lane {
        RoadRef road;
        Heading heading;
        std::uint32_t lane;
        double length;
        std::uint64_t slots;
    };
    std::vector<Lane> lanes;
    auto add_lanes = [&](Axis axis, std::size_t count, double length, Heading a, Heading b) {
        const auto slots = static_cast<std::uint64_t>(std::floor(length / cfg.security_distance));
        for (std::uint32_t r = 0; r < count; ++r) {
            for (Heading h : {a, b}) {
                for (std::uint32_t k = 0; k < net.lanes_per_direction(); ++k) {
                    lanes.push_back({{axis, r}, h, k, length, slots});
                }
            }
        }
    };
    add_lanes(Axis::horizontal, net.horizontal_roads().size(), net.width(), Heading::east,
              Heading::west);
    add_lanes(Axis::vertical, net.vertical_roads().size(), net.height(), Heading::north,
              Heading::south);

    const std::uint64_t total = std::accumulate(
        lanes.begin(), lanes.end(), std::uint64_t{0},
        [](std::uint64_t acc, const Lane& l) { return acc + l.slots; });
    if (n > total) {
        throw MobilityError(fmt::format(
            "cannot place {} vehicles with security distance {} m: road network holds {}", n,
            cfg.security_distance, total));
    }

    Rng rng = Rng::stream(seed, 1);
    std::vector<std::uint64_t> slots(total);
    std::iota(slots.begin(), slots.end(), std::uint64_t{0});

    std::vector<VehicleState> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto pick = i + rng.below(total - i);
        std::swap(slots[i], slots[pick]);
        std::uint64_t slot = slots[i];
        std::size_t li = 0;
        while (slot >= lanes[li].slots) {
            slot -= lanes[li].slots;
            ++li;
        }
        const Lane& lane = lanes[li];
        const double slot_len = lane.length / static_cast<double>(lane.slots);
        const double s = slot * slot_len + rng.uniform(0.0, slot_len - cfg.security_distance);

        VehicleState v;
        v.id = node_id(static_cast<std::uint32_t>(i));
        v.road = lane.road;
        v.heading = lane.heading;
        v.lane = lane.lane;
        v.pos = net.lane_point(lane.road, lane.heading, lane.lane, s);
        v.max_speed = rng.uniform(cfg.speed_min, cfg.speed_max);
        v.vel = velocity_for(lane.heading, v.max_speed);
        assign_target(v, net, rng);
        out.push_back(v);
    }
    return out;
}

std::vector<VehicleState> step(std::span<const VehicleState> states, const RoadNetwork& net,
                               const MobilityConfig& cfg, Rng& rng) {
    std::vector<VehicleState> out(states.begin(), states.end());

    // Front-to-back within each lane so leaders move before their followers.
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t k) {
        const auto& v = out[k];
        return std::tuple{static_cast<int>(v.road.axis), v.road.index, static_cast<int>(v.heading),
                          v.lane, -sign_of(v.heading) * longitudinal(v), to_index(v.id)};
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    for (std::size_t k : order) {
        move_vehicle(out, k, net, cfg, rng);
    }
    return out;
}

Heading choose_direction(const VehicleState& v, const RoadNetwork& net) {
    const auto [hi, vi] = nearest_crossing(v, net);
    return choose_at(v, net, hi, vi);
}

void write_trace_rows(std::ostream& os, SimTime now, std::span<const VehicleState> states) {
    for (const auto& v : states) {
        fmt::print(os, "{:.3f},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", now, to_index(v.id), v.pos.x,
                   v.pos.y, v.vel.vx, v.vel.vy);
    }
}

}  // namespace vanet
