#include "vanet/simengine.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace vanet {

namespace {

constexpr double kTimeEps = 1e-9;

ScenarioError field_error(std::string_view field, std::string_view what) {
    return ScenarioError(fmt::format("{}: {}", field, what));
}

struct RoutingSlot {
    std::uint64_t eligible_tick{0};
    SimTime last_attempt{-1.0};
    std::uint64_t last_version{~std::uint64_t{0}};
};

class Engine {
public:
    Engine(const Scenario& s, const RunOptions& opts)
        : s_{s},
          opts_{opts},
          net_{road_network_for(s)},
          vehicles_{initial_vehicles(s, net_)},
          beacons_{s.beacons},
          mobility_rng_{Rng::stream(s.seed, 2)},
          traffic_rng_{Rng::stream(s.seed, 3)},
          held_(vehicles_.size()) {
        tables_.reserve(vehicles_.size());
        for (const auto& v : vehicles_) {
            tables_.emplace_back(v.id);
        }
        schedule_ = generate_traffic(s, traffic_rng_);
    }

    RunMetrics run() {
        const double tick = s_.mobility.tick;
        const auto ticks = static_cast<std::uint64_t>(std::llround(s_.sim_duration / tick));
        const bool moving = s_.static_positions.empty();
        std::size_t next_event = 0;

        for (std::uint64_t k = 0; k < ticks; ++k) {
            const SimTime now = static_cast<double>(k) * tick;
            if (k > 0 && moving) {
                vehicles_ = step(vehicles_, net_, s_.mobility, mobility_rng_);
            }
            if (opts_.trajectory_trace != nullptr) {
                write_trace_rows(*opts_.trajectory_trace, now, vehicles_);
            }

            const auto beacons = beacons_.emit(vehicles_, now);
            deliver_beacons(tables_, vehicles_, beacons, s_.radio_range, now);
            for (auto& t : tables_) {
                t.purge(now, s_.beacons);
            }

            while (next_event < schedule_.size() && schedule_[next_event].time <= now + kTimeEps) {
                inject(schedule_[next_event], now, k);
                ++next_event;
            }

            expire(now);
            route_all(now, k);
            compact_live();

            if (opts_.observer) {
                opts_.observer(now, vehicles_, packets_);
            }
        }
        return finish();
    }

private:
    void log(const Packet& p, std::string_view event, SimTime t, NodeId node) {
        if (opts_.packet_events != nullptr) {
            fmt::print(*opts_.packet_events, "{},{},{:.3f},{}\n", p.id, event, t, to_index(node));
        }
    }

    void inject(const TrafficEvent& ev, SimTime now, std::uint64_t k) {
        Packet p;
        p.id = packets_.size();
        p.src = ev.src;
        p.dst = ev.dst;
        p.created = now;
        p.carrier = ev.src;
        p.state = PacketState::in_flight;
        packets_.push_back(p);
        slots_.push_back(RoutingSlot{k, -1.0, ~std::uint64_t{0}});
        live_.push_back(p.id);
        log(p, "created", now, p.carrier);
        take(p.id, ev.src, now);
    }

    // Places a packet in a node's buffer, evicting the oldest on overflow.
    void take(std::uint64_t pid, NodeId node, SimTime now) {
        auto& h = held_[to_index(node)];
        h.push_back(pid);
        if (h.size() <= s_.buffer_capacity) {
            return;
        }
        const auto oldest = std::min_element(h.begin(), h.end(), [&](auto a, auto b) {
            const auto& pa = packets_[a];
            const auto& pb = packets_[b];
            return std::tie(pa.created, pa.id) < std::tie(pb.created, pb.id);
        });
        Packet& victim = packets_[*oldest];
        h.erase(oldest);
        victim.state = PacketState::dropped_buffer;
        victim.finished = now;
        log(victim, "dropped_buffer", now, node);
    }

    void release(std::uint64_t pid, NodeId node) {
        auto& h = held_[to_index(node)];
        h.erase(std::find(h.begin(), h.end(), pid));
    }

    void expire(SimTime now) {
        for (auto pid : live_) {
            Packet& p = packets_[pid];
            if (p.terminal() || now - p.created <= s_.ttl + kTimeEps) {
                continue;
            }
            release(pid, p.carrier);
            p.state = PacketState::dropped_ttl;
            p.finished = now;
            log(p, "dropped_ttl", now, p.carrier);
        }
    }

    bool due(const Packet& p, const RoutingSlot& slot, std::uint64_t k, SimTime now) const {
        if (p.state == PacketState::in_flight) {
            return slot.eligible_tick <= k;
        }
        const auto& table = tables_[to_index(p.carrier)];
        return table.version() != slot.last_version ||
               now - slot.last_attempt >= s_.beacons.mu - kTimeEps;
    }

    RoutingDecision decide(NodeId carrier, NodeId dst) {
        const auto& table = tables_[to_index(carrier)];
        const auto key = std::tuple{to_index(carrier), to_index(dst), table.version()};
        if (auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
        RoutingDecision d = Carry{};
        if (table.contains(dst)) {
            d = Forward{dst};
        } else {
            d = route(s_, vehicles_[to_index(carrier)], table, dst, vehicles_[to_index(dst)].pos);
        }
        cache_.emplace(key, d);
        return d;
    }

    void route_all(SimTime now, std::uint64_t k) {
        cache_.clear();
        for (auto pid : live_) {
            Packet& p = packets_[pid];
            RoutingSlot& slot = slots_[pid];
            if (p.terminal() || !due(p, slot, k, now)) {
                continue;
            }
            const NodeId carrier = p.carrier;
            auto& table = tables_[to_index(carrier)];
            const RoutingDecision d = decide(carrier, p.dst);
            slot.last_attempt = now;

            if (const auto* fwd = std::get_if<Forward>(&d)) {
                const Position from = vehicles_[to_index(carrier)].pos;
                const Position to = vehicles_[to_index(fwd->next_hop)].pos;
                if (in_range(from, to, s_.radio_range)) {
                    transfer(p, fwd->next_hop, distance(from, to), now, k);
                    continue;
                }
                // Link already broken: the link layer reports failure and
                // the stale neighbour is dropped from the carrier's table.
                ++failed_transfers_;
                table.erase(fwd->next_hop);
                if (s_.drop_on_link_failure) {
                    release(pid, carrier);
                    p.state = PacketState::dropped_link;
                    p.finished = now;
                    log(p, "dropped_link", now, carrier);
                    continue;
                }
                log(p, "link_failed", now, carrier);
            }
            if (p.state != PacketState::buffered) {
                p.state = PacketState::buffered;
                log(p, "carry", now, carrier);
            }
            slot.last_version = table.version();
        }
    }

    void transfer(Packet& p, NodeId next, double dist, SimTime now, std::uint64_t k) {
        release(p.id, p.carrier);
        ++transfers_;
        max_transfer_distance_ = std::max(max_transfer_distance_, dist);
        p.carrier = next;
        ++p.hops;
        log(p, "forward", now, next);
        if (next == p.dst) {
            p.state = PacketState::delivered;
            p.finished = now + s_.mobility.tick;
            log(p, "delivered", p.finished, next);
            return;
        }
        p.state = PacketState::in_flight;
        slots_[p.id].eligible_tick = k + 1;
        take(p.id, next, now);
    }

    void compact_live() {
        std::erase_if(live_, [&](auto pid) { return packets_[pid].terminal(); });
    }

    RunMetrics finish() {
        RunMetrics m;
        std::uint64_t hop_sum = 0;
        for (const auto& p : packets_) {
            ++m.sent;
            switch (p.state) {
                case PacketState::delivered:
                    ++m.delivered;
                    hop_sum += p.hops;
                    break;
                case PacketState::dropped_ttl: ++m.dropped_ttl; break;
                case PacketState::dropped_buffer: ++m.dropped_buffer; break;
                case PacketState::dropped_link: ++m.dropped_link; break;
                case PacketState::in_flight:
                case PacketState::buffered: ++m.residual_buffered; break;
            }
        }
        m.dropped = m.dropped_ttl + m.dropped_buffer + m.dropped_link;
        m.pdr = m.sent > 0 ? compute_pdr(m) : 0.0;
        m.mean_hops = m.delivered > 0 ? static_cast<double>(hop_sum) / m.delivered : 0.0;
        m.transfers = transfers_;
        m.failed_transfers = failed_transfers_;
        m.max_transfer_distance = max_transfer_distance_;
        m.packets = std::move(packets_);
        return m;
    }

    struct KeyHash {
        std::size_t operator()(const std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>& k) const {
            const auto [a, b, c] = k;
            return std::hash<std::uint64_t>{}((std::uint64_t{a} << 32 | b) ^ (c * 0x9e3779b97f4a7c15ULL));
        }
    };

    const Scenario& s_;
    const RunOptions& opts_;
    RoadNetwork net_;
    std::vector<VehicleState> vehicles_;
    std::vector<NeighborTable> tables_;
    BeaconScheduler beacons_;
    Rng mobility_rng_;
    Rng traffic_rng_;
    std::vector<TrafficEvent> schedule_;

    std::vector<Packet> packets_;
    std::vector<RoutingSlot> slots_;
    std::vector<std::uint64_t> live_;
    std::vector<std::vector<std::uint64_t>> held_;
    std::unordered_map<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>, RoutingDecision, KeyHash>
        cache_;

    std::uint64_t transfers_{0};
    std::uint64_t failed_transfers_{0};
    double max_transfer_distance_{0.0};
};

}  // namespace

const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::ebgr: return "ebgr";
        case Protocol::greedy: return "greedy";
        case Protocol::pdgr: return "pdgr";
    }
    return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
    for (Protocol p : {Protocol::ebgr, Protocol::greedy, Protocol::pdgr}) {
        if (name == to_string(p)) {
            return p;
        }
    }
    return std::nullopt;
}

const char* to_string(PacketState st) {
    switch (st) {
        case PacketState::in_flight: return "in_flight";
        case PacketState::buffered: return "buffered";
        case PacketState::delivered: return "delivered";
        case PacketState::dropped_ttl: return "dropped_ttl";
        case PacketState::dropped_buffer: return "dropped_buffer";
        case PacketState::dropped_link: return "dropped_link";
    }
    return "?";
}

void validate(const Scenario& s) {
    if (!(s.area_width > 0.0)) throw field_error("area_width", "must be positive");
    if (!(s.area_height > 0.0)) throw field_error("area_height", "must be positive");
    if (s.n_vehicles < 2) throw field_error("n_vehicles", "at least two vehicles are required");
    if (s.n_senders < 1) throw field_error("n_senders", "at least one sender is required");
    if (s.n_senders > s.n_vehicles) throw field_error("n_senders", "must not exceed n_vehicles");
    if (!(s.radio_range > 0.0)) throw field_error("radio_range", "must be positive");
    if (!(s.cbr_rate > 0.0)) throw field_error("cbr_rate", "must be positive");
    if (!(s.sim_duration >= 0.0)) throw field_error("sim_duration", "must be non-negative");
    if (!(s.ttl > 0.0)) throw field_error("ttl", "must be positive");
    if (s.buffer_capacity < 1) throw field_error("buffer_capacity", "must be at least 1");
    try {
        validate(s.beacons);
    } catch (const std::invalid_argument& e) {
        throw field_error("beacon", e.what());
    }
    try {
        validate(s.mobility);
    } catch (const MobilityError& e) {
        throw field_error("mobility", e.what());
    }
    try {
        validate(s.ebgr);
    } catch (const ConfigError& e) {
        throw field_error("ebgr", e.what());
    }
    if (s.ebgr.rings.mtr != s.radio_range) {
        throw field_error("ebgr.rings.mtr", "must equal radio_range");
    }
    try {
        validate(s.pdgr);
    } catch (const std::invalid_argument& e) {
        throw field_error("pdgr", e.what());
    }
    if (!s.static_positions.empty()) {
        if (s.static_positions.size() != s.n_vehicles) {
            throw field_error("static_positions", "must list exactly n_vehicles positions");
        }
        for (const auto& p : s.static_positions) {
            if (!(p.x >= 0.0 && p.x <= s.area_width && p.y >= 0.0 && p.y <= s.area_height)) {
                throw field_error("static_positions", "position outside the area");
            }
        }
    }
}

std::vector<TrafficEvent> generate_traffic(const Scenario& s, Rng& rng) {
    const std::uint32_t n = s.n_vehicles;
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0U);
    for (std::uint32_t i = 0; i < s.n_senders; ++i) {
        std::swap(ids[i], ids[i + rng.below(n - i)]);
    }
    std::vector<std::pair<NodeId, NodeId>> flows;
    for (std::uint32_t i = 0; i < s.n_senders; ++i) {
        const std::uint32_t src = ids[i];
        std::uint32_t dst = static_cast<std::uint32_t>(rng.below(n - 1));
        if (dst >= src) {
            ++dst;
        }
        flows.emplace_back(node_id(src), node_id(dst));
    }

    const double period = 1.0 / s.cbr_rate;
    const auto per_flow =
        s.sim_duration > 0.0
            ? static_cast<std::uint64_t>(std::ceil(s.sim_duration / period - kTimeEps))
            : std::uint64_t{0};
    std::vector<TrafficEvent> out;
    out.reserve(per_flow * flows.size());
    for (std::uint64_t k = 0; k < per_flow; ++k) {
        for (const auto& [src, dst] : flows) {
            out.push_back({static_cast<double>(k) * period, src, dst});
        }
    }
    return out;
}

double compute_pdr(const RunMetrics& m) {
    if (m.sent == 0) {
        throw std::domain_error("PDR undefined: no packets were sent");
    }
    return 100.0 * static_cast<double>(m.delivered) / static_cast<double>(m.sent);
}

RoutingDecision route(const Scenario& s, const VehicleState& current, const NeighborTable& table,
                      NodeId dest, Position dest_pos) {
    switch (s.protocol) {
        case Protocol::ebgr: return select_next_hop(current, table, dest, dest_pos, s.ebgr);
        case Protocol::greedy: return greedy_next_hop(current, table, dest_pos, s.radio_range);
        case Protocol::pdgr: return pdgr_next_hop(current, table, dest_pos, s.pdgr, s.radio_range);
    }
    return Carry{};
}

void deliver_beacons(std::span<NeighborTable> tables, std::span<const VehicleState> states,
                     std::span<const Beacon> beacons, double range, SimTime now) {
    for (const auto& b : beacons) {
        for (std::size_t k = 0; k < states.size(); ++k) {
            if (states[k].id != b.sender && in_range(b.pos, states[k].pos, range)) {
                tables[k].deliver(b, now);
            }
        }
    }
}

RoadNetwork road_network_for(const Scenario& s) {
    return build_road_network(s.area_width, s.area_height, s.roads.horizontal_roads,
                              s.roads.vertical_roads, s.roads.lanes_per_direction,
                              s.roads.lane_width);
}

std::vector<VehicleState> initial_vehicles(const Scenario& s, const RoadNetwork& net) {
    if (s.static_positions.empty()) {
        return spawn_vehicles(net, s.n_vehicles, s.mobility, s.seed);
    }
    std::vector<VehicleState> out;
    for (std::uint32_t i = 0; i < s.static_positions.size(); ++i) {
        VehicleState v;
        v.id = node_id(i);
        v.pos = s.static_positions[i];
        v.trip_target = v.pos;
        out.push_back(v);
    }
    return out;
}

RunMetrics run(const Scenario& s, const RunOptions& opts) {
    validate(s);
    Engine engine(s, opts);
    return engine.run();
}

void write_metrics_header(std::ostream& os) {
    os << "protocol,seed,n_vehicles,radio_range,max_speed,sent,delivered,dropped,"
          "residual_buffered,pdr,mean_hops\n";
}

void write_metrics_row(std::ostream& os, const Scenario& s, const RunMetrics& m) {
    fmt::print(os, "{},{},{},{:.6f},{:.6f},{},{},{},{},{:.6f},{:.6f}\n", to_string(s.protocol),
               s.seed, s.n_vehicles, s.radio_range, s.mobility.speed_max, m.sent, m.delivered,
               m.dropped, m.residual_buffered, m.pdr, m.mean_hops);
}

}  // namespace vanet
