#include "vanet/baselines.hpp"
#include "vanet/config.hpp"
#include "vanet/ebgr.hpp"
#include "vanet/simengine.hpp"
#include "vanet/sweep.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace vanet;

namespace {

py::dict metrics_dict(const RunMetrics& m) {
    py::dict d;
    d["sent"] = m.sent;
    d["delivered"] = m.delivered;
    d["dropped"] = m.dropped;
    d["dropped_ttl"] = m.dropped_ttl;
    d["dropped_buffer"] = m.dropped_buffer;
    d["dropped_link"] = m.dropped_link;
    d["residual_buffered"] = m.residual_buffered;
    d["pdr"] = m.pdr;
    d["mean_hops"] = m.mean_hops;
    d["transfers"] = m.transfers;
    d["failed_transfers"] = m.failed_transfers;
    d["max_transfer_distance"] = m.max_transfer_distance;
    return d;
}

NeighborTable table_from(std::uint32_t owner, const std::vector<py::tuple>& rows) {
    NeighborTable t{node_id(owner)};
    for (const auto& r : rows) {
        if (r.size() != 3) {
            throw py::value_error("neighbours are (id, (x, y), (vx, vy)) tuples");
        }
        const auto p = r[1].cast<std::pair<double, double>>();
        const auto v = r[2].cast<std::pair<double, double>>();
        t.insert({node_id(r[0].cast<std::uint32_t>()), {p.first, p.second}, {v.first, v.second}, 0.0});
    }
    return t;
}

py::object decision(const RoutingDecision& d) {
    if (const auto* f = std::get_if<Forward>(&d)) {
        return py::int_(to_index(f->next_hop));
    }
    return py::none();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic VANET routing simulator";

    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_static("from_yaml", &parse_scenario_text, py::arg("text"))
        .def_static("from_file", [](const std::string& path) { return parse_scenario(path); })
        .def("to_yaml", &dump_scenario)
        .def("validate", [](const Scenario& s) { validate(s); })
        .def_readwrite("n_vehicles", &Scenario::n_vehicles)
        .def_readwrite("n_senders", &Scenario::n_senders)
        .def_readwrite("sim_duration", &Scenario::sim_duration)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("ttl", &Scenario::ttl)
        .def_readwrite("buffer_capacity", &Scenario::buffer_capacity)
        .def_readonly("radio_range", &Scenario::radio_range)
        .def_property(
            "protocol", [](const Scenario& s) { return std::string{to_string(s.protocol)}; },
            [](Scenario& s, const std::string& name) {
                const auto p = parse_protocol(name);
                if (!p) throw py::value_error("protocol must be ebgr, greedy or pdgr");
                s.protocol = *p;
            })
        .def_property(
            "max_speed", [](const Scenario& s) { return s.mobility.speed_max; },
            [](Scenario& s, double v) { s.mobility.speed_max = v; })
        .def_property(
            "static_positions",
            [](const Scenario& s) {
                std::vector<std::pair<double, double>> out;
                for (const auto& p : s.static_positions) out.emplace_back(p.x, p.y);
                return out;
            },
            [](Scenario& s, const std::vector<std::pair<double, double>>& ps) {
                s.static_positions.clear();
                for (const auto& [x, y] : ps) s.static_positions.push_back({x, y});
            });

    m.def(
        "run",
        [](const Scenario& s) {
            RunMetrics m;
            {
                py::gil_scoped_release release;
                m = run(s);
            }
            return metrics_dict(m);
        },
        py::arg("scenario"), "Runs one scenario and returns its metrics as a dict.");

    m.def(
        "metrics_csv",
        [](const Scenario& s) {
            std::ostringstream os;
            write_metrics_header(os);
            write_metrics_row(os, s, run(s));
            return os.str();
        },
        py::arg("scenario"));

    m.def(
        "run_sweep",
        [](const std::string& yaml, unsigned jobs) {
            const Sweep sw = parse_sweep_text(yaml);
            SweepResults r;
            {
                py::gil_scoped_release release;
                r = run_sweep(sw, jobs);
            }
            std::ostringstream raw, summary;
            write_results_csv(raw, r);
            emit_plot_data(summary, r);
            return py::make_tuple(raw.str(), summary.str());
        },
        py::arg("yaml"), py::arg("jobs") = 1,
        "Runs a sweep given as YAML text; returns (results_csv, summary_csv).");

    m.def("closeness", &closeness, py::arg("d_i"), py::arg("d_c"));
    m.def(
        "direction_alignment",
        [](std::pair<double, double> v, std::pair<double, double> loc_i,
           std::pair<double, double> loc_d) {
            return direction_alignment({v.first, v.second}, {loc_i.first, loc_i.second},
                                       {loc_d.first, loc_d.second});
        },
        py::arg("v_i"), py::arg("loc_i"), py::arg("loc_d"));
    m.def(
        "link_lifetime",
        [](std::pair<double, double> pi, std::pair<double, double> vi, std::pair<double, double> pj,
           std::pair<double, double> vj, double range) {
            return link_lifetime({pi.first, pi.second}, {vi.first, vi.second}, {pj.first, pj.second},
                                 {vj.first, vj.second}, range);
        },
        py::arg("pos_i"), py::arg("vel_i"), py::arg("pos_j"), py::arg("vel_j"),
        py::arg("range") = 250.0);
    m.def("link_stability", &link_stability, py::arg("lifetime"), py::arg("sigma") = 25.0);
    m.def(
        "potential_score",
        [](double dc, double dmi, double ls, double rho, double omega, double lambda) {
            const PotentialFactors f{rho, omega, lambda};
            validate(f);
            return potential_score(dc, dmi, ls, f);
        },
        py::arg("dc"), py::arg("dmi"), py::arg("ls"), py::arg("rho") = 0.3, py::arg("omega") = 0.3,
        py::arg("lambda_") = 0.4);
    m.def(
        "classify_ring",
        [](double d) -> py::object {
            const Ring r = classify_ring(d, RingBounds{});
            if (r == Ring::out_of_range) return py::none();
            return py::int_(static_cast<int>(r));
        },
        py::arg("distance"), "Ring 1..5 under the default bounds, or None beyond the MTR.");

    m.def(
        "next_hop",
        [](const std::string& protocol, std::pair<double, double> pos, std::pair<double, double> vel,
           const std::vector<py::tuple>& neighbors, std::pair<double, double> dest_pos,
           std::uint32_t dest) {
            VehicleState cur;
            cur.id = node_id(0);
            cur.pos = {pos.first, pos.second};
            cur.vel = {vel.first, vel.second};
            const auto table = table_from(0, neighbors);
            const Position d{dest_pos.first, dest_pos.second};
            if (protocol == "ebgr") return decision(select_next_hop(cur, table, node_id(dest), d, {}));
            if (protocol == "greedy") return decision(greedy_next_hop(cur, table, d));
            if (protocol == "pdgr") return decision(pdgr_next_hop(cur, table, d, {}));
            throw py::value_error("protocol must be ebgr, greedy or pdgr");
        },
        py::arg("protocol"), py::arg("pos"), py::arg("vel"), py::arg("neighbors"),
        py::arg("dest_pos"), py::arg("dest") = 0xFFFFFFFFU,
        "Next hop id for a forwarder at node 0, or None to carry. Neighbours are\n"
        "(id, (x, y), (vx, vy)) tuples.");
}
