#pragma once

#include "vanet/baselines.hpp"
#include "vanet/core.hpp"
#include "vanet/ebgr.hpp"
#include "vanet/mobility.hpp"
#include "vanet/neighbors.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vanet {

enum class Protocol : std::uint8_t { ebgr, greedy, pdgr };

const char* to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);

struct RoadLayout {
    std::uint32_t horizontal_roads{3};
    std::uint32_t vertical_roads{3};
    std::uint32_t lanes_per_direction{1};
    double lane_width{3.5};
};

/// Full experiment configuration. Defaults describe the standard 1 km grid
/// setup; the rest are this simulator's own knobs.
struct Scenario {
    double area_width{1000.0};
    double area_height{1000.0};
    std::uint32_t n_vehicles{100};
    std::uint32_t n_senders{40};
    double radio_range{250.0};
    double cbr_rate{2.0};              // packets per second per sender
    std::uint32_t packet_size{512};    // bytes; recorded only
    BeaconConfig beacons{};            // mu = 0.5 s
    double sim_duration{120.0};        // seconds
    std::uint64_t seed{1};
    Protocol protocol{Protocol::ebgr};
    EbgrConfig ebgr{};
    PdgrConfig pdgr{};
    MobilityConfig mobility{};
    RoadLayout roads{};
    double ttl{120.0};                 // packet age limit, seconds
    std::uint32_t buffer_capacity{64}; // packets held per node
    /// A transfer to a next hop that has already left radio range loses
    /// the packet; when false the carrier keeps it and retries.
    bool drop_on_link_failure{true};
    /// When non-empty, vehicles are stationary at these points and
    /// n_vehicles must equal its size.
    std::vector<Position> static_positions;
};

class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws ScenarioError naming the offending field.
void validate(const Scenario& s);

/// Unit-disc reception: inclusive at the boundary.
inline bool in_range(Position a, Position b, double range) { return distance(a, b) <= range; }

struct TrafficEvent {
    SimTime time{0.0};
    NodeId src{};
    NodeId dst{};
};

/// CBR schedule: n_senders distinct sources, each with a fixed destination
/// different from itself, one packet every 1/cbr_rate seconds.
std::vector<TrafficEvent> generate_traffic(const Scenario& s, Rng& rng);

enum class PacketState : std::uint8_t {
    in_flight,
    buffered,
    delivered,
    dropped_ttl,
    dropped_buffer,
    dropped_link,  // next hop had left radio range at transfer time
};

const char* to_string(PacketState st);

struct Packet {
    std::uint64_t id{0};
    NodeId src{};
    NodeId dst{};
    SimTime created{0.0};
    std::uint32_t hops{0};
    PacketState state{PacketState::in_flight};
    NodeId carrier{};
    SimTime finished{0.0};  // delivery or drop time

    bool terminal() const {
        return state != PacketState::in_flight && state != PacketState::buffered;
    }
};

struct RunMetrics {
    std::uint64_t sent{0};
    std::uint64_t delivered{0};
    std::uint64_t dropped{0};
    std::uint64_t dropped_ttl{0};
    std::uint64_t dropped_buffer{0};
    std::uint64_t dropped_link{0};
    std::uint64_t residual_buffered{0};
    double pdr{0.0};
    double mean_hops{0.0};
    std::uint64_t transfers{0};
    std::uint64_t failed_transfers{0};  // next hop already out of radio range
    double max_transfer_distance{0.0};
    std::vector<Packet> packets;
};

/// 100 * delivered / sent. Throws std::domain_error for an empty run.
double compute_pdr(const RunMetrics& m);

/// Next-hop decision of the scenario's protocol.
RoutingDecision route(const Scenario& s, const VehicleState& current, const NeighborTable& table,
                      NodeId dest, Position dest_pos);

/// Hands each beacon to every other vehicle within `range`. `tables` is
/// indexed by vehicle position in `states`.
void deliver_beacons(std::span<NeighborTable> tables, std::span<const VehicleState> states,
                     std::span<const Beacon> beacons, double range, SimTime now);

struct RunOptions {
    std::ostream* trajectory_trace{nullptr};  // time,id,x,y,vx,vy
    std::ostream* packet_events{nullptr};     // packet_id,event,time,node
    /// Called after every tick with the vehicle states and all packets.
    std::function<void(SimTime, std::span<const VehicleState>, std::span<const Packet>)> observer;
};

/// Executes one scenario. Deterministic in (scenario, seed).
RunMetrics run(const Scenario& s, const RunOptions& opts = {});

/// Initial vehicles of a scenario (spawned or static).
std::vector<VehicleState> initial_vehicles(const Scenario& s, const RoadNetwork& net);
RoadNetwork road_network_for(const Scenario& s);

void write_metrics_header(std::ostream& os);
void write_metrics_row(std::ostream& os, const Scenario& s, const RunMetrics& m);

}  // namespace vanet
