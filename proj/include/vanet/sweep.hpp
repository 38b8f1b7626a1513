#pragma once

#include "vanet/simengine.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vanet {

enum class SweepAxis : std::uint8_t { n_vehicles, radio_range, max_speed };

const char* to_string(SweepAxis a);
std::optional<SweepAxis> parse_axis(std::string_view name);

struct Sweep {
    Scenario base;
    SweepAxis axis{SweepAxis::n_vehicles};
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    std::vector<Protocol> protocols{Protocol::ebgr, Protocol::greedy, Protocol::pdgr};
};

/// Throws ScenarioError for empty/unsorted values, empty or duplicate
/// seeds, and empty or duplicate protocols.
void validate(const Sweep& sw);

/// The base scenario with one axis value, seed and protocol applied. For
/// n_vehicles the sender count is capped at the vehicle count; for
/// radio_range the rings are rescaled to keep their proportions.
Scenario scenario_for(const Sweep& sw, Protocol p, double value, std::uint64_t seed);

struct SweepRow {
    Protocol protocol{};
    double value{0.0};
    std::uint64_t seed{0};
    double pdr{0.0};
    double mean_hops{0.0};
    std::uint64_t delivered{0};
    std::uint64_t sent{0};
    std::string error;  // non-empty when the run failed

    bool ok() const { return error.empty(); }
};

struct SweepResults {
    SweepAxis axis{};
    std::vector<SweepRow> rows;  // ordered by (protocol, value, seed)

    std::size_t failures() const;
};

/// One run per (protocol, value, seed). `parallelism` > 1 runs them on
/// worker threads; the row order does not depend on it.
SweepResults run_sweep(const Sweep& sw, unsigned parallelism = 1);

struct SummaryRow {
    double value{0.0};
    Protocol protocol{};
    std::size_t runs{0};
    double mean_pdr{0.0};
    double stddev_pdr{0.0};  // sample standard deviation; 0 for a single run
};

/// Mean/stddev of PDR per (value, protocol), sorted by value then by the
/// protocol's first appearance. Failed runs are excluded. Throws
/// std::invalid_argument on empty input.
std::vector<SummaryRow> summarize(const SweepResults& results);

void write_results_csv(std::ostream& os, const SweepResults& results);
/// Long-format plot data: <axis>,protocol,mean_pdr,stddev_pdr,runs.
void emit_plot_data(std::ostream& os, const SweepResults& results);

/// Sweep file: scenario keys plus a `sweep` section with axis, values,
/// seeds and protocols.
Sweep parse_sweep(const std::filesystem::path& path);
Sweep parse_sweep_text(const std::string& yaml);

}  // namespace vanet
