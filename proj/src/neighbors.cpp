#include "vanet/neighbors.hpp"

#include <stdexcept>

namespace vanet {

namespace {
// Slack for tick times accumulated in floating point.
constexpr double kTimeEps = 1e-9;
}  // namespace

void validate(const BeaconConfig& cfg) {
    if (!(cfg.mu > 0.0)) {
        throw std::invalid_argument("beacon period mu must be positive");
    }
    if (cfg.alpha < 1) {
        throw std::invalid_argument("alpha must be at least 1");
    }
}

const NeighborEntry* NeighborTable::find(NodeId id) const {
    const auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

void NeighborTable::deliver(const Beacon& b, SimTime now) {
    if (b.sender == owner_) {
        return;
    }
    entries_[b.sender] = NeighborEntry{b.sender, b.pos, b.vel, now};
    ++version_;
}

std::size_t NeighborTable::purge(SimTime now, const BeaconConfig& cfg) {
    const double limit = cfg.timeout() + kTimeEps;
    const auto removed = std::erase_if(entries_, [&](const auto& kv) {
        return now - kv.second.last_heard > limit;
    });
    if (removed > 0) {
        ++version_;
    }
    return removed;
}

bool NeighborTable::erase(NodeId id) {
    if (entries_.erase(id) > 0) {
        ++version_;
        return true;
    }
    return false;
}

void NeighborTable::insert(const NeighborEntry& e) {
    if (e.id == owner_) {
        return;
    }
    entries_[e.id] = e;
    ++version_;
}

NeighborTable deliver_beacon(NeighborTable table, const Beacon& b, SimTime now) {
    table.deliver(b, now);
    return table;
}

NeighborTable purge_stale(NeighborTable table, SimTime now, const BeaconConfig& cfg) {
    table.purge(now, cfg);
    return table;
}

std::vector<Beacon> BeaconScheduler::emit(std::span<const VehicleState> states, SimTime now) {
    std::vector<Beacon> out;
    for (const auto& v : states) {
        const auto it = last_emit_.find(v.id);
        if (it != last_emit_.end() && now - it->second < cfg_.mu - kTimeEps) {
            continue;
        }
        last_emit_[v.id] = now;
        out.push_back(Beacon{v.id, v.pos, v.vel, now});
    }
    return out;
}

}  // namespace vanet
