#include "swissfair/audit.hpp"

#include <algorithm>
#include <sstream>

#include "swissfair/error.hpp"

namespace swissfair {

namespace {

using namespace predictor;

std::string format_threshold(double t) {
    std::ostringstream s;
    s << t;
    return s.str();
}

}  // namespace

std::vector<ModelSpec> points_battery_specs() {
    return {
        {{kConstant, kEloCentered}, Response::Points},
        {{kConstant, kEloCentered, kExtraWhite}, Response::Points},
        {{kConstant, kEloCentered, kExpectedPoints}, Response::Points},
        {{kConstant, kEloCentered, kExpectedPoints, kExtraWhite}, Response::Points},
        {{kConstant, kEloCentered, kEloXWhite}, Response::Points},
        {{kConstant, kEloCentered, kExpectedPoints, kEloXWhite}, Response::Points},
    };
}

LinearBattery run_points_battery(std::span<const PlayerRecord> records) {
    LinearBattery battery{"Number of points", {}};
    const char* labels[] = {"(a)", "(b)", "(c)", "(d)", "(e)", "(f)"};
    int i = 0;
    for (const auto& spec : points_battery_specs()) {
        battery.models.push_back({labels[i++], spec, ols_fit(build_design(records, spec))});
    }
    return battery;
}

LinearBattery run_surprise_battery(std::span<const PlayerRecord> records,
                                   std::span<const double> deltas) {
    LinearBattery battery{"Surprise points U(delta)", {}};
    for (double d : deltas) {
        // The schedule control stays at expected points without white advantage,
        // so only the response moves along the grid.
        ModelSpec spec{{kConstant, kEloCentered, kExpectedPoints, kExtraWhite}, Response::Surprise, d, 0.0};
        battery.models.push_back(
            {"delta=" + format_threshold(d), spec, ols_fit(build_design(records, spec))});
    }
    return battery;
}

LinearBattery run_top_battery(std::span<const PlayerRecord> records, double threshold) {
    const auto top = outlier_filter(records, threshold);
    LinearBattery battery{"Number of points, players with at least " + format_threshold(threshold), {}};
    for (const auto& preds : {std::vector<std::string>{kConstant, kEloCentered, kExtraWhite},
                              std::vector<std::string>{kConstant, kEloCentered, kExpectedPoints,
                                                       kExtraWhite}}) {
        ModelSpec spec{preds, Response::Points};
        battery.models.push_back({"t=" + format_threshold(threshold) + (preds.size() == 3 ? " (a)" : " (b)"),
                                  spec, ols_fit(build_design(top, spec))});
    }
    return battery;
}

LogisticBattery run_threshold_battery(std::span<const PlayerRecord> records,
                                      std::span<const double> thresholds) {
    LogisticBattery battery{"Reaching the threshold (logistic)", {}};
    for (double t : thresholds) {
        ModelSpec spec{{kConstant, kEloCentered, kExpectedPoints, kExtraWhite}, Response::Threshold, 0.0, 0.0, t};
        battery.models.push_back({"t=" + format_threshold(t), spec, logistic_fit(build_design(records, spec))});
    }
    return battery;
}

std::optional<double> elo_equivalent(const LinearFit& fit) {
    auto w = std::find(fit.columns.begin(), fit.columns.end(), kExtraWhite);
    auto e = std::find(fit.columns.begin(), fit.columns.end(), kEloCentered);
    if (w == fit.columns.end() || e == fit.columns.end()) return std::nullopt;
    const double elo = fit.coefficients[static_cast<std::size_t>(e - fit.columns.begin())];
    if (elo == 0.0) return std::nullopt;
    return fit.coefficients[static_cast<std::size_t>(w - fit.columns.begin())] / elo * 100.0;
}

int infer_rounds(std::span<const PlayerRecord> records) {
    int rounds = 0;
    for (const auto& r : records) rounds = std::max(rounds, r.n_white + r.n_black);
    return rounds;
}

AuditReport run_audit(std::span<const PlayerRecord> records, const AuditSpec& spec) {
    if (records.empty()) throw StatsError("audit: empty dataset");
    AuditReport report;
    report.rounds = spec.rounds > 0 ? spec.rounds : infer_rounds(records);
    if (report.rounds < 1) throw StatsError("audit: cannot infer the number of rounds");
    report.min_points = spec.min_points.value_or(default_min_points(report.rounds));
    report.n_input = records.size();

    const auto kept = outlier_filter(records, report.min_points);
    report.n_kept = kept.size();
    if (kept.empty()) {
        throw StatsError("audit: no records with at least " + format_threshold(report.min_points) +
                         " points");
    }

    if (spec.points) report.linear.push_back(run_points_battery(kept));
    if (spec.surprise) report.linear.push_back(run_surprise_battery(kept, spec.surprise_deltas));
    for (double t : spec.top_thresholds) report.linear.push_back(run_top_battery(kept, t));
    if (!spec.logistic_thresholds.empty()) {
        report.logistic.push_back(run_threshold_battery(kept, spec.logistic_thresholds));
    }
    return report;
}

}  // namespace swissfair
