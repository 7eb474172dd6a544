#include <sstream>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swissfair/audit.hpp"
#include "swissfair/error.hpp"
#include "swissfair/ingest.hpp"
#include "swissfair/matching.hpp"
#include "swissfair/ratings.hpp"
#include "swissfair/records.hpp"
#include "swissfair/render.hpp"
#include "swissfair/simulate.hpp"
#include "swissfair/state.hpp"

namespace py = pybind11;
using namespace swissfair;

namespace {

Colour parse_colour(const std::string& c) {
    if (c == "W" || c == "w" || c == "white") return Colour::White;
    if (c == "B" || c == "b" || c == "black") return Colour::Black;
    throw ValidationError("colour must be 'W' or 'B', got '" + c + "'");
}

py::dict record_to_dict(const PlayerRecord& r) {
    py::dict d;
    d["tournament_id"] = r.tournament_id;
    d["player_id"] = r.player_id;
    d["elo"] = r.elo;
    d["elo_centered"] = r.elo_centered;
    d["points"] = r.points;
    d["extra_white"] = r.extra_white;
    d["n_white"] = r.n_white;
    d["n_black"] = r.n_black;
    py::dict expected, surprise;
    for (std::size_t i = 0; i < kDeltaGrid.size(); ++i) {
        const int key = static_cast<int>(kDeltaGrid[i]);
        expected[py::int_(key)] = r.expected_points[i];
        surprise[py::int_(key)] = r.surprise_points[i];
    }
    d["expected_points"] = expected;
    d["surprise_points"] = surprise;
    return d;
}

py::list records_to_list(const std::vector<PlayerRecord>& records) {
    py::list out;
    for (const auto& r : records) out.append(record_to_dict(r));
    return out;
}

std::string records_csv(const std::vector<PlayerRecord>& records) {
    std::ostringstream out;
    write_records_csv(out, records);
    return out.str();
}

std::vector<PlayerRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    return read_records_csv(in);
}

}  // namespace

PYBIND11_MODULE(_swissfair, m) {
    m.doc() = "Native core of the swissfair package";

    auto base = py::register_exception<Error>(m, "SwissfairError", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<StatsError>(m, "StatsError", base.ptr());
    // Registered by hand so the unmatched ids survive the trip to Python.
    // The module keeps the type alive, so a borrowed pointer is enough.
    static PyObject* infeasible =
        py::exception<InfeasiblePairingError>(m, "InfeasiblePairingError", base.ptr()).ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InfeasiblePairingError& e) {
            py::object exc = py::reinterpret_borrow<py::object>(infeasible)(e.what());
            exc.attr("unmatched") = py::cast(e.unmatched());
            PyErr_SetObject(infeasible, exc.ptr());
        }
    });

    m.attr("DELTA_GRID") = py::cast(std::vector<double>(kDeltaGrid.begin(), kDeltaGrid.end()));

    m.def("win_probability", &win_probability, py::arg("r_white"), py::arg("r_black"), py::arg("delta") = 0.0);

    m.def(
        "expected_points",
        [](double rating, const std::vector<std::pair<double, std::string>>& schedule, double delta) {
            std::vector<GameSlot> slots;
            for (const auto& [opp, colour] : schedule) slots.push_back({opp, parse_colour(colour)});
            return expected_points(rating, slots, delta);
        },
        py::arg("rating"), py::arg("schedule"), py::arg("delta") = 0.0,
        "Schedule is a list of (opponent_rating, 'W' or 'B').");

    m.def(
        "max_weight_matching",
        [](int n, const std::vector<std::tuple<int, int, Weight>>& edges, bool max_cardinality) {
            WeightedGraph g{n, {}};
            for (const auto& [u, v, w] : edges) g.edges.push_back({u, v, w});
            const auto result = max_cardinality ? max_cardinality_max_weight_matching(g) : max_weight_matching(g);
            return py::make_tuple(result.pairs, result.total_weight);
        },
        py::arg("n"), py::arg("edges"), py::arg("max_cardinality") = false,
        "Returns (pairs, total_weight) with each pair ordered (low, high).");

    m.def(
        "pair_next_round",
        [](const std::string& state_json, std::uint64_t seed) {
            auto state = parse_state(state_json);
            const int round_no = static_cast<int>(state.rounds.size()) + 1;
            if (round_no > state.total_rounds) throw ValidationError("every round has already been paired");
            const auto players = replay(state);
            const auto pairing = pair_round(players, state.pairing, round_no, state.total_rounds, seed);
            std::vector<std::pair<int, int>> boards;
            for (const auto& b : pairing.boards) boards.emplace_back(b.white, b.black);
            py::object bye = pairing.bye ? py::cast(*pairing.bye) : py::none();
            append_round(state, pairing);
            return py::make_tuple(boards, bye, state_to_json(state));
        },
        py::arg("state_json"), py::arg("seed"),
        "Returns (boards, bye, updated_state_json); boards are (white, black) id pairs.");

    m.def(
        "run_experiment",
        [](const std::string& config_json, std::uint64_t seed, const std::string& base_dir) {
            auto spec = parse_experiment(config_json, base_dir);
            spec.seed = seed;
            ExperimentResult result;
            {
                py::gil_scoped_release release;
                result = run_experiment(spec);
            }
            return py::make_tuple(records_to_list(result.records), records_csv(result.records),
                                  result.float_pairs);
        },
        py::arg("config_json"), py::arg("seed"), py::arg("base_dir") = ".",
        "Returns (records, csv_text, float_pairs).");

    m.def(
        "audit_csv",
        [](const std::string& csv_text, int rounds, std::optional<double> min_points,
           const std::vector<double>& thresholds, const std::vector<double>& top, const std::vector<double>& deltas,
           bool points, bool surprise) {
            const auto records = records_from_csv(csv_text);
            AuditSpec spec;
            spec.rounds = rounds;
            spec.min_points = min_points;
            spec.logistic_thresholds = thresholds;
            spec.top_thresholds = top;
            spec.surprise_deltas = deltas;
            spec.points = points;
            spec.surprise = surprise;
            for (double d : deltas) delta_index(d);
            AuditReport report;
            {
                py::gil_scoped_release release;
                report = run_audit(records, spec);
            }
            return py::make_tuple(audit_to_json(report), render_audit_text(report));
        },
        py::arg("csv_text"), py::arg("rounds") = 0, py::arg("min_points") = py::none(),
        py::arg("thresholds") = std::vector<double>{}, py::arg("top") = std::vector<double>{},
        py::arg("deltas") = std::vector<double>{10, 20, 30, 40, 50}, py::arg("points") = true,
        py::arg("surprise") = true, "Returns (json_text, table_text).");

    m.def(
        "ingest_crosstable",
        [](const std::string& text) {
            std::istringstream in(text);
            const auto raw = parse_crosstable(in);
            const auto valid = clean(raw);
            const auto stats = descriptive_stats(valid, raw.rows.size());
            return py::make_tuple(records_to_list(valid), records_csv(valid),
                                  descriptive_to_json(raw.tournament_id, stats));
        },
        py::arg("text"), "Returns (records, csv_text, descriptive_json).");
}
