// swissfair command-line tool: pair, simulate, audit, report, ingest.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "swissfair/audit.hpp"
#include "swissfair/error.hpp"
#include "swissfair/ingest.hpp"
#include "swissfair/records.hpp"
#include "swissfair/render.hpp"
#include "swissfair/simulate.hpp"
#include "swissfair/state.hpp"

namespace fs = std::filesystem;
using namespace swissfair;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitData = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

struct PairArgs {
    std::string state;
    std::string out;
    std::uint64_t seed = 0;
};

int cmd_pair(const PairArgs& a) {
    auto state = load_state(a.state);
    const int round_no = static_cast<int>(state.rounds.size()) + 1;
    if (round_no > state.total_rounds) {
        throw ValidationError("all " + std::to_string(state.total_rounds) + " rounds have been paired");
    }
    const auto players = replay(state);
    const auto pairing = pair_round(players, state.pairing, round_no, state.total_rounds, a.seed);

    std::unordered_map<int, const PlayerState*> by_id;
    for (const auto& p : players) by_id[p.id] = &p;
    auto label = [&](int id) {
        const auto* p = by_id.at(id);
        std::ostringstream s;
        s << id << " (" << p->rating << ", " << p->score << ")";
        return s.str();
    };

    std::cout << "Round " << round_no << " of " << state.total_rounds << '\n';
    int board = 1;
    for (const auto& b : pairing.boards) {
        std::cout << std::setw(4) << board++ << "  " << std::left << std::setw(24) << label(b.white) << std::right
                  << " - " << label(b.black) << '\n';
    }
    if (pairing.bye) std::cout << "   bye  " << label(*pairing.bye) << '\n';

    if (!a.out.empty()) {
        append_round(state, pairing);
        write_file(a.out, state_to_json(state));
    }
    return 0;
}

struct SimulateArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::optional<int> threads;
};

int cmd_simulate(const SimulateArgs& a) {
    const auto base = fs::path(a.config).parent_path().string();
    auto spec = parse_experiment(read_file(a.config), base.empty() ? "." : base);
    spec.seed = a.seed;
    if (a.threads) spec.threads = *a.threads;
    spec.validate();

    const auto result = run_experiment(spec);
    save_records_csv(a.out, result.records);

    double sum[2] = {0, 0};
    long count[2] = {0, 0};
    for (const auto& r : result.records) {
        const int g = r.extra_white > 0 ? 1 : 0;
        sum[g] += r.points;
        ++count[g];
    }
    std::cout << std::fixed << std::setprecision(4);
    std::cout << "replications        " << spec.replications << '\n';
    std::cout << "records             " << result.records.size() << '\n';
    std::cout << "float pairs         " << result.float_pairs << '\n';
    std::cout << "mean points, W=0    " << (count[0] ? sum[0] / count[0] : 0.0) << "  (n=" << count[0] << ")\n";
    std::cout << "mean points, W=1    " << (count[1] ? sum[1] / count[1] : 0.0) << "  (n=" << count[1] << ")\n";
    std::cout << "wrote " << a.out << '\n';
    return 0;
}

struct AuditArgs {
    std::string data;
    int rounds = 0;
    std::optional<double> min_points;
    std::vector<double> logistic;
    std::vector<double> top;
    std::vector<double> deltas = {10, 20, 30, 40, 50};
    bool no_points = false;
    bool no_surprise = false;
    bool json = false;
};

int cmd_audit(const AuditArgs& a) {
    const auto records = load_records_csv(a.data);
    AuditSpec spec;
    spec.rounds = a.rounds;
    spec.min_points = a.min_points;
    spec.points = !a.no_points;
    spec.surprise = !a.no_surprise;
    spec.surprise_deltas = a.deltas;
    spec.top_thresholds = a.top;
    spec.logistic_thresholds = a.logistic;
    for (double d : spec.surprise_deltas) delta_index(d);
    const auto report = run_audit(records, spec);
    std::cout << (a.json ? audit_to_json(report) + "\n" : render_audit_text(report));
    return 0;
}

struct ReportArgs {
    std::string data;
    std::string svg;
    std::string title = "Distribution of points";
    int rounds = 0;
    std::optional<double> min_points;
};

int cmd_report(const ReportArgs& a) {
    const auto records = load_records_csv(a.data);
    if (records.empty()) throw DataError(a.data + ": no records");
    const int rounds = a.rounds > 0 ? a.rounds : infer_rounds(records);
    const double cutoff = a.min_points.value_or(default_min_points(rounds));
    const auto h = points_histogram(records);

    const auto kept = outlier_filter(records, cutoff);
    std::cout << "records " << records.size() << ", rounds " << rounds << ", outlier cutoff " << cutoff
              << " points, kept " << kept.size() << "\n\n";
    std::cout << render_histogram_text(h);
    if (!a.svg.empty()) {
        write_file(a.svg, render_histogram_svg(h, a.title, cutoff));
        std::cout << "wrote " << a.svg << '\n';
    }
    return 0;
}

struct IngestArgs {
    std::string crosstable;
    std::string out;
    bool json = false;
};

int cmd_ingest(const IngestArgs& a) {
    const auto raw = parse_crosstable_file(a.crosstable);
    const auto valid = clean(raw);
    const auto stats = descriptive_stats(valid, raw.rows.size());
    if (!a.out.empty()) save_records_csv(a.out, valid);
    std::cout << (a.json ? descriptive_to_json(raw.tournament_id, stats) + "\n"
                         : render_descriptive(raw.tournament_id, stats));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Swiss-system pairing, simulation and colour-fairness audit"};
    app.require_subcommand(1);

    PairArgs pair;
    auto* pair_cmd = app.add_subcommand("pair", "Pair the next round of a tournament state file");
    pair_cmd->add_option("--state", pair.state, "Tournament state JSON")->required()->check(CLI::ExistingFile);
    pair_cmd->add_option("--seed", pair.seed, "Tie-break seed")->required();
    pair_cmd->add_option("--out", pair.out, "Write the state with the new round (results pending)");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a simulation experiment and write player records");
    sim_cmd->add_option("--config", sim.config, "Experiment JSON")->required()->check(CLI::ExistingFile);
    sim_cmd->add_option("--seed", sim.seed, "Master seed")->required();
    sim_cmd->add_option("--out", sim.out, "Output CSV")->required();
    sim_cmd->add_option("--threads", sim.threads, "Worker threads (overrides the config)");

    AuditArgs audit;
    auto* audit_cmd = app.add_subcommand("audit", "Regression batteries on a player-record dataset");
    audit_cmd->add_option("--data", audit.data, "Player-record CSV")->required()->check(CLI::ExistingFile);
    audit_cmd->add_option("--rounds", audit.rounds, "Rounds per tournament (default: inferred)");
    audit_cmd->add_option("--min-points", audit.min_points, "Outlier cutoff (default: (rounds - 2) / 2)");
    audit_cmd->add_option("--threshold", audit.logistic, "Logistic threshold in points (repeatable)");
    audit_cmd->add_option("--top", audit.top, "Restrict to players with at least this many points (repeatable)");
    audit_cmd->add_option("--deltas", audit.deltas, "White advantage grid for the surprise battery");
    audit_cmd->add_flag("--no-points", audit.no_points, "Skip the points battery");
    audit_cmd->add_flag("--no-surprise", audit.no_surprise, "Skip the surprise battery");
    audit_cmd->add_flag("--json", audit.json, "Print JSON instead of tables");

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Points distribution by extra-white group");
    report_cmd->add_option("--data", report.data, "Player-record CSV")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--svg", report.svg, "Write an SVG histogram");
    report_cmd->add_option("--title", report.title, "SVG title");
    report_cmd->add_option("--rounds", report.rounds, "Rounds per tournament (default: inferred)");
    report_cmd->add_option("--min-points", report.min_points, "Cutoff line (default: (rounds - 2) / 2)");

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Clean a crosstable into player records");
    ingest_cmd->add_option("--crosstable", ingest.crosstable, "Crosstable text file")
        ->required()
        ->check(CLI::ExistingFile);
    ingest_cmd->add_option("--out", ingest.out, "Output CSV");
    ingest_cmd->add_flag("--json", ingest.json, "Print JSON instead of a table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*pair_cmd) return cmd_pair(pair);
        if (*sim_cmd) return cmd_simulate(sim);
        if (*audit_cmd) return cmd_audit(audit);
        if (*report_cmd) return cmd_report(report);
        if (*ingest_cmd) return cmd_ingest(ingest);
    } catch (const InfeasiblePairingError& e) {
        std::cerr << "error: " << e.what() << "\nunmatched players:";
        for (int id : e.unmatched()) std::cerr << ' ' << id;
        std::cerr << '\n';
        return kExitInfeasible;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const StatsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
