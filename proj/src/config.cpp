#include "vanet/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace vanet {

namespace {

// Reads known keys out of one YAML mapping and rejects the rest.
class Section {
public:
    Section(const YAML::Node& node, std::string prefix) : node_{node}, prefix_{std::move(prefix)} {
        if (node_ && !node_.IsNull() && !node_.IsMap()) {
            throw ScenarioError(fmt::format("{}: expected a mapping", name_or_root()));
        }
    }

    template <typename T>
    bool read(const char* key, T& out) {
        seen_.insert(key);
        if (!node_ || node_.IsNull()) {
            return false;
        }
        const YAML::Node v = node_[key];
        if (!v) {
            return false;
        }
        try {
            out = v.as<T>();
        } catch (const YAML::Exception&) {
            throw ScenarioError(fmt::format("{}: invalid value", field(key)));
        }
        return true;
    }

    YAML::Node child(const char* key) {
        seen_.insert(key);
        if (!node_ || node_.IsNull()) {
            return YAML::Node{};
        }
        return node_[key];
    }

    std::string field(const char* key) const {
        return prefix_.empty() ? std::string{key} : fmt::format("{}.{}", prefix_, key);
    }

    void finish() const {
        if (!node_ || node_.IsNull()) {
            return;
        }
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.contains(key)) {
                throw ScenarioError(fmt::format("{}: unknown key", field(key.c_str())));
            }
        }
    }

private:
    std::string name_or_root() const { return prefix_.empty() ? "<root>" : prefix_; }

    YAML::Node node_;
    std::string prefix_;
    std::set<std::string> seen_;
};

void read_mobility(const YAML::Node& node, Scenario& s) {
    Section m{node, "mobility"};
    m.read("security_distance", s.mobility.security_distance);
    m.read("overtaking", s.mobility.overtaking_enabled);
    m.read("speed_min", s.mobility.speed_min);
    m.read("speed_max", s.mobility.speed_max);
    m.read("tick", s.mobility.tick);
    m.read("horizontal_roads", s.roads.horizontal_roads);
    m.read("vertical_roads", s.roads.vertical_roads);
    m.read("lanes_per_direction", s.roads.lanes_per_direction);
    m.read("lane_width", s.roads.lane_width);
    m.finish();
}

void read_ebgr(const YAML::Node& node, Scenario& s, bool radio_given) {
    Section e{node, "ebgr"};
    e.read("rho", s.ebgr.factors.rho);
    e.read("omega", s.ebgr.factors.omega);
    e.read("lambda", s.ebgr.factors.lambda);
    e.read("sigma", s.ebgr.stability.sigma);
    e.read("require_progress", s.ebgr.require_progress);
    std::string mode;
    if (e.read("selection", mode)) {
        if (mode == "ring_priority") {
            s.ebgr.mode = SelectionMode::ring_priority;
        } else if (mode == "global_argmax") {
            s.ebgr.mode = SelectionMode::global_argmax;
        } else {
            throw ScenarioError(
                fmt::format("{}: expected ring_priority or global_argmax", e.field("selection")));
        }
    }
    const YAML::Node rings = e.child("rings");
    if (rings && !rings.IsNull()) {
        Section r{rings, "ebgr.rings"};
        r.read("mtr", s.ebgr.rings.mtr);
        r.read("l1", s.ebgr.rings.l1);
        r.read("l2", s.ebgr.rings.l2);
        r.read("l3", s.ebgr.rings.l3);
        r.read("l4", s.ebgr.rings.l4);
        r.finish();
    } else if (radio_given) {
        const double k = s.radio_range / RingBounds{}.mtr;
        const RingBounds d{};
        s.ebgr.rings = {s.radio_range, d.l1 * k, d.l2 * k, d.l3 * k, d.l4 * k};
    }
    e.finish();
}

void read_pdgr(const YAML::Node& node, Scenario& s) {
    Section p{node, "pdgr"};
    p.read("prediction_horizon", s.pdgr.prediction_horizon);
    p.read("distance_weight", s.pdgr.distance_weight);
    p.read("direction_weight", s.pdgr.direction_weight);
    p.finish();
}

Scenario from_yaml(const YAML::Node& root) {
    Scenario s;
    Section top{root, ""};
    top.read("area_width", s.area_width);
    top.read("area_height", s.area_height);
    top.read("n_vehicles", s.n_vehicles);
    top.read("n_senders", s.n_senders);
    const bool radio_given = top.read("radio_range", s.radio_range);
    top.read("cbr_rate", s.cbr_rate);
    top.read("packet_size", s.packet_size);
    top.read("beacon_interval", s.beacons.mu);
    top.read("beacon_alpha", s.beacons.alpha);
    top.read("sim_duration", s.sim_duration);
    top.read("seed", s.seed);
    std::string protocol;
    if (top.read("protocol", protocol)) {
        const auto p = parse_protocol(protocol);
        if (!p) {
            throw ScenarioError("protocol: expected one of ebgr, greedy, pdgr");
        }
        s.protocol = *p;
    }
    top.read("ttl", s.ttl);
    top.read("buffer_capacity", s.buffer_capacity);
    top.read("drop_on_link_failure", s.drop_on_link_failure);

    const YAML::Node statics = top.child("static_positions");
    if (statics && !statics.IsNull()) {
        try {
            for (const auto& p : statics) {
                const auto xy = p.as<std::vector<double>>();
                if (xy.size() != 2) {
                    throw ScenarioError("static_positions: each entry must be [x, y]");
                }
                s.static_positions.push_back({xy[0], xy[1]});
            }
        } catch (const YAML::Exception&) {
            throw ScenarioError("static_positions: each entry must be [x, y]");
        }
    }

    read_mobility(top.child("mobility"), s);
    read_ebgr(top.child("ebgr"), s, radio_given);
    read_pdgr(top.child("pdgr"), s);
    top.finish();

    s.ebgr.stability.radio_range = s.radio_range;
    validate(s);
    return s;
}

YAML::Node load(const std::string& text) {
    try {
        return YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ScenarioError(fmt::format("malformed config: {}", e.what()));
    }
}

}  // namespace

Scenario parse_scenario_text(const std::string& yaml) { return from_yaml(load(yaml)); }

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(fmt::format("cannot open config file {}", path.string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string dump_scenario(const Scenario& s) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "area_width" << YAML::Value << s.area_width;
    out << YAML::Key << "area_height" << YAML::Value << s.area_height;
    out << YAML::Key << "n_vehicles" << YAML::Value << s.n_vehicles;
    out << YAML::Key << "n_senders" << YAML::Value << s.n_senders;
    out << YAML::Key << "radio_range" << YAML::Value << s.radio_range;
    out << YAML::Key << "cbr_rate" << YAML::Value << s.cbr_rate;
    out << YAML::Key << "packet_size" << YAML::Value << s.packet_size;
    out << YAML::Key << "beacon_interval" << YAML::Value << s.beacons.mu;
    out << YAML::Key << "beacon_alpha" << YAML::Value << s.beacons.alpha;
    out << YAML::Key << "sim_duration" << YAML::Value << s.sim_duration;
    out << YAML::Key << "seed" << YAML::Value << s.seed;
    out << YAML::Key << "protocol" << YAML::Value << to_string(s.protocol);
    out << YAML::Key << "ttl" << YAML::Value << s.ttl;
    out << YAML::Key << "buffer_capacity" << YAML::Value << s.buffer_capacity;
    out << YAML::Key << "drop_on_link_failure" << YAML::Value << s.drop_on_link_failure;

    out << YAML::Key << "mobility" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "security_distance" << YAML::Value << s.mobility.security_distance;
    out << YAML::Key << "overtaking" << YAML::Value << s.mobility.overtaking_enabled;
    out << YAML::Key << "speed_min" << YAML::Value << s.mobility.speed_min;
    out << YAML::Key << "speed_max" << YAML::Value << s.mobility.speed_max;
    out << YAML::Key << "tick" << YAML::Value << s.mobility.tick;
    out << YAML::Key << "horizontal_roads" << YAML::Value << s.roads.horizontal_roads;
    out << YAML::Key << "vertical_roads" << YAML::Value << s.roads.vertical_roads;
    out << YAML::Key << "lanes_per_direction" << YAML::Value << s.roads.lanes_per_direction;
    out << YAML::Key << "lane_width" << YAML::Value << s.roads.lane_width;
    out << YAML::EndMap;

    out << YAML::Key << "ebgr" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "rho" << YAML::Value << s.ebgr.factors.rho;
    out << YAML::Key << "omega" << YAML::Value << s.ebgr.factors.omega;
    out << YAML::Key << "lambda" << YAML::Value << s.ebgr.factors.lambda;
    out << YAML::Key << "sigma" << YAML::Value << s.ebgr.stability.sigma;
    out << YAML::Key << "require_progress" << YAML::Value << s.ebgr.require_progress;
    out << YAML::Key << "selection" << YAML::Value
        << (s.ebgr.mode == SelectionMode::ring_priority ? "ring_priority" : "global_argmax");
    out << YAML::Key << "rings" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "mtr" << YAML::Value << s.ebgr.rings.mtr;
    out << YAML::Key << "l1" << YAML::Value << s.ebgr.rings.l1;
    out << YAML::Key << "l2" << YAML::Value << s.ebgr.rings.l2;
    out << YAML::Key << "l3" << YAML::Value << s.ebgr.rings.l3;
    out << YAML::Key << "l4" << YAML::Value << s.ebgr.rings.l4;
    out << YAML::EndMap;
    out << YAML::EndMap;

    out << YAML::Key << "pdgr" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "prediction_horizon" << YAML::Value << s.pdgr.prediction_horizon;
    out << YAML::Key << "distance_weight" << YAML::Value << s.pdgr.distance_weight;
    out << YAML::Key << "direction_weight" << YAML::Value << s.pdgr.direction_weight;
    out << YAML::EndMap;

    if (!s.static_positions.empty()) {
        out << YAML::Key << "static_positions" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : s.static_positions) {
            out << YAML::Flow << YAML::BeginSeq << p.x << p.y << YAML::EndSeq;
        }
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    return out.c_str();
}

}  // namespace vanet
