// vanet: run a single scenario, a parameter sweep, or just check a config.
//
// Exit codes: 0 success, 1 config error, 2 run failure.

#include "vanet/config.hpp"
#include "vanet/simengine.hpp"
#include "vanet/sweep.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;

namespace {

constexpr int kConfigError = 1;
constexpr int kRunFailure = 2;

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    return out;
}

int cmd_validate(const fs::path& config, bool is_sweep) {
    try {
        if (is_sweep) {
            const auto sw = vanet::parse_sweep(config);
            fmt::print("ok: sweep over {} with {} values, {} seeds, {} protocols\n",
                       vanet::to_string(sw.axis), sw.values.size(), sw.seeds.size(),
                       sw.protocols.size());
        } else {
            const auto s = vanet::parse_scenario(config);
            fmt::print("ok: {} vehicles, protocol {}\n", s.n_vehicles, vanet::to_string(s.protocol));
        }
    } catch (const vanet::ScenarioError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    }
    return 0;
}

int cmd_run(const fs::path& config, const fs::path& out_dir, bool trace, bool events) {
    vanet::Scenario s;
    try {
        s = vanet::parse_scenario(config);
    } catch (const vanet::ScenarioError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    }
    try {
        fs::create_directories(out_dir);
        std::ofstream trace_out;
        std::ofstream events_out;
        vanet::RunOptions opts;
        if (trace) {
            trace_out = open_out(out_dir / "trajectory.csv");
            trace_out << "time,id,x,y,vx,vy\n";
            opts.trajectory_trace = &trace_out;
        }
        if (events) {
            events_out = open_out(out_dir / "packet_events.csv");
            events_out << "packet_id,event,time,node\n";
            opts.packet_events = &events_out;
        }
        const auto m = vanet::run(s, opts);
        auto metrics = open_out(out_dir / "metrics.csv");
        vanet::write_metrics_header(metrics);
        vanet::write_metrics_row(metrics, s, m);
        fmt::print(
            "{}: sent {} delivered {} dropped {} (ttl {}, buffer {}, link {}) residual {} pdr {:.2f}% "
            "mean hops {:.2f} transfers {} failed {}\n",
            vanet::to_string(s.protocol), m.sent, m.delivered, m.dropped, m.dropped_ttl,
            m.dropped_buffer, m.dropped_link, m.residual_buffered, m.pdr, m.mean_hops, m.transfers,
            m.failed_transfers);
    } catch (const vanet::ScenarioError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        fmt::print(stderr, "run failed: {}\n", e.what());
        return kRunFailure;
    }
    return 0;
}

int cmd_sweep(const fs::path& config, const fs::path& out_dir, unsigned jobs) {
    vanet::Sweep sw;
    try {
        sw = vanet::parse_sweep(config);
    } catch (const vanet::ScenarioError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    }
    try {
        fs::create_directories(out_dir);
        const auto results = vanet::run_sweep(sw, jobs);
        auto raw = open_out(out_dir / "sweep_results.csv");
        vanet::write_results_csv(raw, results);
        for (const auto& row : results.rows) {
            if (!row.ok()) {
                fmt::print(stderr, "run failed: {}\n", row.error);
            }
        }
        if (results.failures() == results.rows.size()) {
            return kRunFailure;
        }
        auto summary = open_out(out_dir / "sweep_summary.csv");
        vanet::emit_plot_data(summary, results);
        fmt::print("{} runs written to {}\n", results.rows.size() - results.failures(),
                   out_dir.string());
        return results.failures() > 0 ? kRunFailure : 0;
    } catch (const std::exception& e) {
        fmt::print(stderr, "sweep failed: {}\n", e.what());
        return kRunFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic VANET routing simulator (EBGR, greedy, PDGR-like)"};
    app.require_subcommand(1);

    fs::path config;
    fs::path out_dir = "out";
    bool trace = false;
    bool events = false;
    unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
    bool validate_sweep = false;

    auto* run = app.add_subcommand("run", "Run a single scenario");
    run->add_option("-c,--config", config, "Scenario YAML file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", out_dir, "Output directory");
    run->add_flag("--trace", trace, "Write per-tick trajectory.csv");
    run->add_flag("--events", events, "Write per-packet packet_events.csv");

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("-c,--config", config, "Sweep YAML file")->required()->check(CLI::ExistingFile);
    sweep->add_option("-o,--out", out_dir, "Output directory");
    sweep->add_option("-j,--jobs", jobs, "Runs executed in parallel")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    validate->add_option("-c,--config", config, "Scenario or sweep YAML file")
        ->required()
        ->check(CLI::ExistingFile);
    validate->add_flag("--sweep", validate_sweep, "Treat the file as a sweep config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    if (run->parsed()) return cmd_run(config, out_dir, trace, events);
    if (sweep->parsed()) return cmd_sweep(config, out_dir, jobs);
    return cmd_validate(config, validate_sweep);
}
