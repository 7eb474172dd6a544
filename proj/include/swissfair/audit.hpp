#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swissfair/records.hpp"
#include "swissfair/stats.hpp"

namespace swissfair {

struct LinearModel {
    std::string label;
    ModelSpec spec;
    LinearFit fit;
};

struct LogisticModel {
    std::string label;
    ModelSpec spec;
    LogisticFit fit;
};

struct LinearBattery {
    std::string title;
    std::vector<LinearModel> models;
};

struct LogisticBattery {
    std::string title;
    std::vector<LogisticModel> models;
};

/// The six point regressions: (a) Elo; (b) Elo + extra white; (c) Elo +
/// expected points; (d) (c) + extra white; (e) Elo + Elo*white;
/// (f) (c) + Elo*white. All with a constant.
std::vector<ModelSpec> points_battery_specs();

LinearBattery run_points_battery(std::span<const PlayerRecord> records);

/// U(delta) on Elo, expected points at delta, and extra white, for each delta.
LinearBattery run_surprise_battery(std::span<const PlayerRecord> records,
                                   std::span<const double> deltas);

/// Point regressions restricted to players at or above `threshold`.
LinearBattery run_top_battery(std::span<const PlayerRecord> records, double threshold);

/// Logistic regressions of [points >= t] on Elo, expected points, extra white.
LogisticBattery run_threshold_battery(std::span<const PlayerRecord> records,
                                      std::span<const double> thresholds);

/// Extra-white coefficient over the Elo coefficient, times 100: the rating
/// gain worth as much as the extra white game. Nullopt if either is absent.
std::optional<double> elo_equivalent(const LinearFit& fit);

struct AuditSpec {
    int rounds = 0;                     // 0: infer from the records
    std::optional<double> min_points;   // default: default_min_points(rounds)
    bool points = true;
    bool surprise = true;
    std::vector<double> surprise_deltas = {10, 20, 30, 40, 50};
    std::vector<double> top_thresholds;
    std::vector<double> logistic_thresholds;
};

struct AuditReport {
    int rounds = 0;
    double min_points = 0.0;
    std::size_t n_input = 0;
    std::size_t n_kept = 0;
    std::vector<LinearBattery> linear;
    std::vector<LogisticBattery> logistic;
};

/// Largest n_white + n_black across records.
int infer_rounds(std::span<const PlayerRecord> records);

/// Outlier filter, then the requested batteries. Throws StatsError when
/// nothing survives the filter.
AuditReport run_audit(std::span<const PlayerRecord> records, const AuditSpec& spec);

}  // namespace swissfair
