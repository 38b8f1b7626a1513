#pragma once

#include "vanet/core.hpp"
#include "vanet/mobility.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

namespace vanet {

struct Beacon {
    NodeId sender{};
    Position pos;
    Velocity vel;
    SimTime timestamp{0.0};
};

struct NeighborEntry {
    NodeId id{};
    Position last_pos;
    Velocity last_vel;
    SimTime last_heard{0.0};
};

struct BeaconConfig {
    double mu{0.5};        // beacon period, seconds
    std::uint32_t alpha{3};  // beacons a neighbour may miss

    double timeout() const { return alpha * mu; }
};

void validate(const BeaconConfig& cfg);

/// Neighbour set of one node, keyed (and iterated) by NodeId.
class NeighborTable {
public:
    NeighborTable() = default;
    explicit NeighborTable(NodeId owner) : owner_{owner} {}

    NodeId owner() const { return owner_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    bool contains(NodeId id) const { return entries_.contains(id); }
    const NeighborEntry* find(NodeId id) const;

    /// Bumped on every insert, update or removal.
    std::uint64_t version() const { return version_; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    /// Inserts or overwrites the sender's entry. Own beacons are ignored.
    void deliver(const Beacon& b, SimTime now);
    /// Drops entries not heard for longer than alpha * mu; the boundary
    /// itself survives. Returns the number removed.
    std::size_t purge(SimTime now, const BeaconConfig& cfg);
    /// Removes one entry (link-layer failure). Returns true if it existed.
    bool erase(NodeId id);

    /// Convenience for building tables directly in tests and bindings.
    void insert(const NeighborEntry& e);

private:
    NodeId owner_{};
    std::map<NodeId, NeighborEntry> entries_;
    std::uint64_t version_{0};
};

/// Value-returning forms of the table mutations.
NeighborTable deliver_beacon(NeighborTable table, const Beacon& b, SimTime now);
NeighborTable purge_stale(NeighborTable table, SimTime now, const BeaconConfig& cfg);

/// Tracks each vehicle's last emission and produces the beacons due now.
class BeaconScheduler {
public:
    explicit BeaconScheduler(BeaconConfig cfg) : cfg_{cfg} {}

    std::vector<Beacon> emit(std::span<const VehicleState> states, SimTime now);

private:
    BeaconConfig cfg_;
    std::unordered_map<NodeId, SimTime> last_emit_;
};

}  // namespace vanet
