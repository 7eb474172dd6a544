// Acceptance run: one PASS/FAIL/SKIP line per criterion, exit status 1 on any FAIL.
//
//   swissfair_acceptance [--only N] [--crosstable FILE]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "swissfair/audit.hpp"
#include "swissfair/error.hpp"
#include "swissfair/ingest.hpp"
#include "swissfair/matching.hpp"
#include "swissfair/simulate.hpp"
#include "swissfair/stats.hpp"

using namespace swissfair;
namespace pr = swissfair::predictor;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
    Status status = Status::Fail;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome matching_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    long mismatches = 0;
    for (int g = 0; g < 1000; ++g) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const double density = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        WeightedGraph graph{n, {}};
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                if (std::uniform_real_distribution<double>()(rng) < density) {
                    graph.edges.push_back({u, v, static_cast<Weight>(rng() % 101)});
                }
            }
        }
        std::shuffle(graph.edges.begin(), graph.edges.end(), rng);
        const auto plain = max_weight_matching(graph);
        const auto card = max_cardinality_max_weight_matching(graph);
        const auto bp = oracle::brute_force_matching(n, graph.edges, false);
        const auto bc = oracle::brute_force_matching(n, graph.edges, true);
        if (plain.total_weight != bp.weight) ++mismatches;
        if (card.total_weight != bc.weight || static_cast<int>(card.cardinality()) != bc.cardinality) ++mismatches;
    }
    const double secs = seconds_since(t0);
    const bool ok = mismatches == 0 && secs < 10.0;
    return {ok ? Status::Pass : Status::Fail,
            "1000 graphs, " + std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", secs)};
}

// ---------------------------------------------------------------------------

Outcome pairing_legality() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2002);
    oracle::Legality total;
    long infeasible = 0;
    for (int t = 0; t < 10000; ++t) {
        const int n = 16 + static_cast<int>(rng() % 49);
        const int rounds = (rng() & 1) ? 9 : 11;
        std::vector<Entrant> field;
        std::vector<int> ids;
        std::normal_distribution<double> rating(2343, 210);
        for (int i = 0; i < n; ++i) {
            field.push_back({i + 1, std::max(1000.0, std::round(rating(rng)))});
            ids.push_back(i + 1);
        }
        try {
            const auto res = simulate_tournament(field, rounds, PairingConfig{}, OutcomeModel{25, 0.35}, rng());
            const auto l = oracle::check_legality(field.size(), ids, res.pairings);
            total.rematches += l.rematches;
            total.imbalance_over_two += l.imbalance_over_two;
            total.three_in_a_row += l.three_in_a_row;
            total.repeated_byes += l.repeated_byes;
            total.unpaired += l.unpaired;
        } catch (const InfeasiblePairingError&) {
            ++infeasible;
        }
    }
    const bool ok = total.total() == 0 && infeasible == 0;
    return {ok ? Status::Pass : Status::Fail,
            "10000 tournaments: " + total.describe() + " infeasible=" + std::to_string(infeasible) + ", " +
                fmt("%.1f s", seconds_since(t0))};
}

// ---------------------------------------------------------------------------

Outcome balanced_guarantee() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(3003);
    PairingConfig cfg;
    cfg.mode = PairingMode::Balanced;
    long exceptions = 0, infeasible = 0, checks = 0;
    std::string first_failure;
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 * (6 + static_cast<int>(rng() % 27));  // 12..64
        const int rounds = 4 + 2 * static_cast<int>(rng() % 4);  // 4, 6, 8, 10
        cfg.beta = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
        std::vector<Entrant> field;
        std::normal_distribution<double> rating(2343, 210);
        for (int i = 0; i < n; ++i) field.push_back({i + 1, std::max(1000.0, std::round(rating(rng)))});
        try {
            const auto res = simulate_tournament(field, rounds, cfg, OutcomeModel{25, 0.35}, rng());
            std::map<int, int> imbalance;
            for (std::size_t r = 0; r < res.pairings.size(); ++r) {
                for (const auto& b : res.pairings[r].boards) {
                    ++imbalance[b.white];
                    --imbalance[b.black];
                }
                if (r % 2 == 1) {
                    for (const auto& e : field) {
                        ++checks;
                        if (imbalance[e.id] != 0) ++exceptions;
                    }
                }
            }
        } catch (const InfeasiblePairingError& e) {
            if (infeasible++ == 0) {
                first_failure = " (first: " + std::to_string(n) + " players, " + std::to_string(rounds) +
                                " rounds, " + e.what() + ")";
            }
        }
    }
    const bool ok = exceptions == 0 && infeasible == 0;
    return {ok ? Status::Pass : Status::Fail,
            "1000 tournaments, " + std::to_string(checks) + " player-round checks, " + std::to_string(exceptions) +
                " exceptions, " + std::to_string(infeasible) +  " infeasible" + first_failure + ", " + fmt("%.1f s", seconds_since(t0))};
}

// ---------------------------------------------------------------------------

ExperimentSpec default_experiment(double delta, std::uint64_t seed) {
    ExperimentSpec s;
    s.rounds = 9;
    s.replications = 500;
    s.field.size = 100;
    s.model.delta = delta;
    s.seed = seed;
    return s;
}

Outcome null_effect() {
    const auto t0 = Clock::now();
    int insignificant_b = 0, insignificant_d = 0;
    const auto specs = points_battery_specs();
    for (int meta = 0; meta < 20; ++meta) {
        const auto data = run_experiment(default_experiment(0.0, 4004 + static_cast<std::uint64_t>(meta)));
        const auto kept = outlier_filter(data.records, default_min_points(9));
        const auto fb = ols_fit(build_design(kept, specs[1]));
        const auto fd = ols_fit(build_design(kept, specs[3]));
        insignificant_b += fb.p_values[fb.index(pr::kExtraWhite)] >= 0.05;
        insignificant_d += fd.p_values[fd.index(pr::kExtraWhite)] >= 0.05;
    }
    const bool ok = insignificant_b >= 18 && insignificant_d >= 18;
    return {ok ? Status::Pass : Status::Fail,
            "insignificant at 5%: model (b) " + std::to_string(insignificant_b) + "/20, model (d) " +
                std::to_string(insignificant_d) + "/20, " + fmt("%.1f s", seconds_since(t0))};
}

// ---------------------------------------------------------------------------

// Shared Delta = 25 dataset for the recovery criteria.
struct Delta25 {
    std::vector<PlayerRecord> kept;
    double seconds = 0.0;
};

const Delta25& delta25() {
    static const Delta25 d = [] {
        const auto t0 = Clock::now();
        const auto data = run_experiment(default_experiment(25.0, 5005));
        Delta25 out;
        out.kept = outlier_filter(data.records, default_min_points(9));
        out.seconds = seconds_since(t0);
        return out;
    }();
    return d;
}

Outcome white_advantage_recovery() {
    const auto t0 = Clock::now();
    const auto& d = delta25();
    const auto specs = points_battery_specs();
    std::string detail;
    bool ok = true;
    for (int m : {1, 3}) {
        const auto f = ols_fit(build_design(d.kept, specs[m]));
        const auto w = f.index(pr::kExtraWhite);
        const double eq = *elo_equivalent(f);
        const bool model_ok = f.coefficients[w] > 0 && f.p_values[w] < 0.001 && eq >= 10 && eq <= 40;
        ok = ok && model_ok;
        detail += std::string(m == 1 ? "model (b)" : "model (d)") + ": coef " + fmt("%.4f", f.coefficients[w]) +
                  " p " + fmt("%.2e", f.p_values[w]) + " Elo-eq " + fmt("%.1f", eq) + "; ";
    }
    const double secs = d.seconds + seconds_since(t0);
    ok = ok && secs < 300.0;
    return {ok ? Status::Pass : Status::Fail, detail + fmt("%.1f s", secs)};
}

Outcome surprise_attenuation() {
    const auto& d = delta25();
    std::vector<double> grid(kDeltaGrid.begin(), kDeltaGrid.end());
    const auto battery = run_surprise_battery(d.kept, grid);
    std::vector<double> coef, se, p;
    for (const auto& m : battery.models) {
        const auto w = m.fit.index(pr::kExtraWhite);
        coef.push_back(m.fit.coefficients[w]);
        se.push_back(m.fit.std_errors[w]);
        p.push_back(m.fit.p_values[w]);
    }
    int inversions = 0;
    bool inversion_small = true;
    for (std::size_t i = 1; i < coef.size(); ++i) {
        if (coef[i] >= coef[i - 1]) {
            ++inversions;
            inversion_small = inversion_small && coef[i] - coef[i - 1] <= se[i];
        }
    }
    const bool monotone = inversions == 0 || (inversions == 1 && inversion_small);
    const bool start_significant = coef[0] > 0 && p[0] < 0.05;
    double first_insignificant = -1;
    for (std::size_t i = 0; i < coef.size(); ++i) {
        if (!(coef[i] > 0 && p[i] < 0.05)) {
            first_insignificant = grid[i];
            break;
        }
    }
    const bool crossing = first_insignificant == 20 || first_insignificant == 30;
    std::string detail = "coef by delta:";
    for (std::size_t i = 0; i < coef.size(); ++i) detail += " " + fmt("%.4f", coef[i]) + "(p " + fmt("%.1e", p[i]) + ")";
    detail += "; first not significant at delta=" + fmt("%.0f", first_insignificant);
    return {monotone && start_significant && crossing ? Status::Pass : Status::Fail, detail};
}

Outcome threshold_effect() {
    const auto& d = delta25();
    const double t = 6.0;
    const auto battery = run_threshold_battery(d.kept, std::vector<double>{t});
    const auto& f = battery.models.front().fit;
    const auto w = f.index(pr::kExtraWhite);
    const bool ok = f.coefficients[w] > 0 && f.p_values[w] < 0.05;
    return {ok ? Status::Pass : Status::Fail,
            "t=6 coef " + fmt("%.4f", f.coefficients[w]) + " p " + fmt("%.2e", f.p_values[w]) + " odds ratio " +
                fmt("%.3f", f.odds_ratios[w])};
}

// ---------------------------------------------------------------------------

DesignMatrix to_design(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
    DesignMatrix d;
    for (std::size_t j = 0; j < x.front().size(); ++j) d.columns.push_back(j == 0 ? "constant" : "x" + std::to_string(j));
    d.x.resize(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(x.front().size()));
    d.y.resize(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x[i].size(); ++j) d.x(i, j) = x[i][j];
        d.y[i] = y[i];
    }
    return d;
}

Outcome regression_oracles() {
    std::mt19937_64 rng(7007);
    std::normal_distribution<double> nd;

    double worst_ols = 0.0;
    for (int problem = 0; problem < 100; ++problem) {
        const int n = 20 + static_cast<int>(rng() % 200);
        const int k = 2 + static_cast<int>(rng() % 5);
        std::vector<std::vector<double>> x;
        std::vector<double> y;
        for (int i = 0; i < n; ++i) {
            std::vector<double> row = {1.0};
            for (int j = 1; j < k; ++j) row.push_back(nd(rng) * (1 + j) + j);
            double v = nd(rng);
            for (int j = 0; j < k; ++j) v += row[j] * (j - 1.5);
            x.push_back(row);
            y.push_back(v);
        }
        const auto fit = ols_fit(to_design(x, y));
        const auto ref = oracle::normal_equations(x, y);
        for (int j = 0; j < k; ++j) {
            const double rel = std::fabs(fit.coefficients[j] - ref[j]) / std::max(1.0, std::fabs(ref[j]));
            worst_ols = std::max(worst_ols, rel);
        }
    }

    double worst_logit = 0.0;
    for (int problem = 0; problem < 10; ++problem) {
        std::vector<std::vector<double>> x;
        std::vector<int> yi;
        std::vector<double> y;
        const int n = 30 + 5 * problem;
        for (int i = 0; i < n; ++i) {
            const double v = nd(rng);
            int label = v > 0 ? 1 : 0;
            if (std::uniform_real_distribution<double>()(rng) < 0.2) label = 1 - label;
            x.push_back({1.0, v});
            yi.push_back(label);
            y.push_back(label);
        }
        const auto fit = logistic_fit(to_design(x, y));
        const auto ref = oracle::grid_search_logistic(x, yi);
        for (std::size_t j = 0; j < ref.size(); ++j) {
            worst_logit = std::max(worst_logit, std::fabs(fit.coefficients[j] - ref[j]));
        }
    }

    long auc_mismatch = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 11);
        std::vector<double> s(n);
        std::vector<int> l(n);
        for (int i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng() % 6);
            l[i] = static_cast<int>(rng() % 2);
        }
        l[0] = 0;
        l[1] = 1;
        if (auc(s, l) != oracle::auc_by_pairs(s, l)) ++auc_mismatch;
    }

    const bool ok = worst_ols <= 1e-8 && worst_logit <= 1e-3 && auc_mismatch == 0;
    return {ok ? Status::Pass : Status::Fail,
            "OLS worst rel diff " + fmt("%.2e", worst_ols) + " (100 problems), logistic worst abs diff " +
                fmt("%.2e", worst_logit) + " (10 problems), AUC mismatches " + std::to_string(auc_mismatch) +
                "/2000"};
}

// ---------------------------------------------------------------------------

Outcome crosstable_reproduction(const std::string& path) {
    if (path.empty()) return {Status::Skip, "no crosstable supplied (--crosstable FILE)"};
    const auto raw = parse_crosstable_file(path);
    const auto valid = clean(raw);
    const auto s = descriptive_stats(valid, raw.rows.size());
    const bool ok = s.valid_count == 111 && std::fabs(s.mean - 2637.57) <= 0.5 &&
                    std::fabs(s.white_share * 100 - 50.45) <= 0.5;
    return {ok ? Status::Pass : Status::Fail,
            std::to_string(s.valid_count) + " valid, mean " + fmt("%.2f", s.mean) + ", white share " +
                fmt("%.2f%%", s.white_share * 100)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swissfair acceptance run"};
    int only = 0;
    std::string crosstable;
    app.add_option("--only", only, "Run a single criterion (1-9)");
    app.add_option("--crosstable", crosstable, "Crosstable file for the data-dependent check");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"matching oracle", matching_oracle},
        {"pairing legality", pairing_legality},
        {"balanced-mode colour guarantee", balanced_guarantee},
        {"null effect at zero white advantage", null_effect},
        {"white advantage recovery", white_advantage_recovery},
        {"surprise-point attenuation", surprise_attenuation},
        {"regression engine oracles", regression_oracles},
        {"threshold-probability effect", threshold_effect},
        {"crosstable reproduction", [&] { return crosstable_reproduction(crosstable); }},
    };

    bool failed = false;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (only != 0 && only != number) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {Status::Fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Skip ? "SKIP" : "FAIL";
        failed = failed || o.status == Status::Fail;
        std::cout << tag << "  " << number << ". " << criteria[i].first << ": " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
