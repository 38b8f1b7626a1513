#include "vanet/sweep.hpp"

#include "vanet/config.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace vanet {

const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::n_vehicles: return "n_vehicles";
        case SweepAxis::radio_range: return "radio_range";
        case SweepAxis::max_speed: return "max_speed";
    }
    return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
    for (SweepAxis a : {SweepAxis::n_vehicles, SweepAxis::radio_range, SweepAxis::max_speed}) {
        if (name == to_string(a)) {
            return a;
        }
    }
    return std::nullopt;
}

void validate(const Sweep& sw) {
    if (sw.values.empty()) {
        throw ScenarioError("sweep.values: must not be empty");
    }
    if (std::adjacent_find(sw.values.begin(), sw.values.end(),
                           [](double a, double b) { return !(a < b); }) != sw.values.end()) {
        throw ScenarioError("sweep.values: must be sorted ascending without repeats");
    }
    if (sw.seeds.empty()) {
        throw ScenarioError("sweep.seeds: must not be empty");
    }
    if (std::set(sw.seeds.begin(), sw.seeds.end()).size() != sw.seeds.size()) {
        throw ScenarioError("sweep.seeds: duplicate seed");
    }
    if (sw.protocols.empty()) {
        throw ScenarioError("sweep.protocols: must not be empty");
    }
    if (std::set(sw.protocols.begin(), sw.protocols.end()).size() != sw.protocols.size()) {
        throw ScenarioError("sweep.protocols: duplicate protocol");
    }
    for (double v : sw.values) {
        if (sw.axis == SweepAxis::n_vehicles && (v < 2.0 || v != std::floor(v))) {
            throw ScenarioError("sweep.values: n_vehicles must be whole numbers >= 2");
        }
        if (!(v > 0.0) && sw.axis == SweepAxis::radio_range) {
            throw ScenarioError("sweep.values: radio_range must be positive");
        }
        if (sw.axis == SweepAxis::max_speed && !(v >= 0.0 && v <= kSpeedCap)) {
            throw ScenarioError("sweep.values: max_speed must lie in [0, 25]");
        }
    }
}

Scenario scenario_for(const Sweep& sw, Protocol p, double value, std::uint64_t seed) {
    Scenario s = sw.base;
    s.protocol = p;
    s.seed = seed;
    switch (sw.axis) {
        case SweepAxis::n_vehicles:
            s.n_vehicles = static_cast<std::uint32_t>(value);
            s.n_senders = std::min(s.n_senders, s.n_vehicles);
            break;
        case SweepAxis::radio_range: {
            const double k = value / s.radio_range;
            auto& r = s.ebgr.rings;
            r = {value, r.l1 * k, r.l2 * k, r.l3 * k, r.l4 * k};
            s.radio_range = value;
            s.ebgr.stability.radio_range = value;
            break;
        }
        case SweepAxis::max_speed:
            s.mobility.speed_max = value;
            s.mobility.speed_min = std::min(s.mobility.speed_min, value);
            break;
    }
    return s;
}

std::size_t SweepResults::failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok(); }));
}

SweepResults run_sweep(const Sweep& sw, unsigned parallelism) {
    validate(sw);
    SweepResults results;
    results.axis = sw.axis;
    for (Protocol p : sw.protocols) {
        for (double v : sw.values) {
            for (auto seed : sw.seeds) {
                SweepRow row;
                row.protocol = p;
                row.value = v;
                row.seed = seed;
                results.rows.push_back(row);
            }
        }
    }

    auto execute = [&](SweepRow& row) {
        try {
            const Scenario s = scenario_for(sw, row.protocol, row.value, row.seed);
            const RunMetrics m = run(s);
            row.pdr = m.pdr;
            row.mean_hops = m.mean_hops;
            row.delivered = m.delivered;
            row.sent = m.sent;
        } catch (const std::exception& e) {
            row.error = fmt::format("{} {}={} seed={}: {}", to_string(row.protocol),
                                    to_string(sw.axis), row.value, row.seed, e.what());
        }
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(parallelism, results.rows.size()));
    if (workers == 1) {
        for (auto& row : results.rows) {
            execute(row);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < results.rows.size(); k = next++) {
                execute(results.rows[k]);
            }
        });
    }
    pool.clear();
    return results;
}

std::vector<SummaryRow> summarize(const SweepResults& results) {
    if (results.rows.empty()) {
        throw std::invalid_argument("no sweep results to summarize");
    }
    std::vector<Protocol> protocol_order;
    for (const auto& r : results.rows) {
        if (std::find(protocol_order.begin(), protocol_order.end(), r.protocol) ==
            protocol_order.end()) {
            protocol_order.push_back(r.protocol);
        }
    }
    std::vector<double> values;
    for (const auto& r : results.rows) {
        values.push_back(r.value);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<SummaryRow> out;
    for (double v : values) {
        for (Protocol p : protocol_order) {
            std::vector<double> pdrs;
            for (const auto& r : results.rows) {
                if (r.ok() && r.protocol == p && r.value == v) {
                    pdrs.push_back(r.pdr);
                }
            }
            if (pdrs.empty()) {
                continue;
            }
            SummaryRow row{v, p, pdrs.size()};
            double sum = 0.0;
            for (double x : pdrs) sum += x;
            row.mean_pdr = sum / static_cast<double>(pdrs.size());
            if (pdrs.size() > 1) {
                double ss = 0.0;
                for (double x : pdrs) ss += (x - row.mean_pdr) * (x - row.mean_pdr);
                row.stddev_pdr = std::sqrt(ss / static_cast<double>(pdrs.size() - 1));
            }
            out.push_back(row);
        }
    }
    return out;
}

void write_results_csv(std::ostream& os, const SweepResults& results) {
    os << "protocol,axis,value,seed,pdr,mean_hops,delivered,sent\n";
    for (const auto& r : results.rows) {
        if (!r.ok()) {
            continue;
        }
        fmt::print(os, "{},{},{:g},{},{:.6f},{:.6f},{},{}\n", to_string(r.protocol),
                   to_string(results.axis), r.value, r.seed, r.pdr, r.mean_hops, r.delivered,
                   r.sent);
    }
}

void emit_plot_data(std::ostream& os, const SweepResults& results) {
    const auto summary = summarize(results);
    fmt::print(os, "{},protocol,mean_pdr,stddev_pdr,runs\n", to_string(results.axis));
    for (const auto& s : summary) {
        fmt::print(os, "{:g},{},{:.6f},{:.6f},{}\n", s.value, to_string(s.protocol), s.mean_pdr,
                   s.stddev_pdr, s.runs);
    }
}

Sweep parse_sweep_text(const std::string& yaml) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml);
    } catch (const YAML::Exception& e) {
        throw ScenarioError(fmt::format("malformed config: {}", e.what()));
    }
    if (!root.IsMap() || !root["sweep"]) {
        throw ScenarioError("sweep: missing section");
    }
    const YAML::Node section = root["sweep"];
    if (!section.IsMap()) {
        throw ScenarioError("sweep: expected a mapping");
    }

    YAML::Node rest(YAML::NodeType::Map);
    for (const auto& kv : root) {
        if (kv.first.as<std::string>() != "sweep") {
            rest[kv.first] = kv.second;
        }
    }

    Sweep sw;
    sw.base = parse_scenario_text(YAML::Dump(rest));
    const std::set<std::string> known{"axis", "values", "seeds", "protocols"};
    for (const auto& kv : section) {
        if (!known.contains(kv.first.as<std::string>())) {
            throw ScenarioError(fmt::format("sweep.{}: unknown key", kv.first.as<std::string>()));
        }
    }
    try {
        if (section["axis"]) {
            const auto axis = parse_axis(section["axis"].as<std::string>());
            if (!axis) {
                throw ScenarioError("sweep.axis: expected n_vehicles, radio_range or max_speed");
            }
            sw.axis = *axis;
        }
        if (section["values"]) sw.values = section["values"].as<std::vector<double>>();
        if (section["seeds"]) sw.seeds = section["seeds"].as<std::vector<std::uint64_t>>();
        if (section["protocols"]) {
            sw.protocols.clear();
            for (const auto& name : section["protocols"].as<std::vector<std::string>>()) {
                const auto p = parse_protocol(name);
                if (!p) {
                    throw ScenarioError(fmt::format("sweep.protocols: unknown protocol {}", name));
                }
                sw.protocols.push_back(*p);
            }
        }
    } catch (const YAML::Exception&) {
        throw ScenarioError("sweep: invalid value");
    }
    validate(sw);
    return sw;
}

Sweep parse_sweep(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(fmt::format("cannot open config file {}", path.string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sweep_text(buf.str());
}

}  // namespace vanet
