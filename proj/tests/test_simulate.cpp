#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "swissfair/error.hpp"
#include "swissfair/simulate.hpp"

using namespace swissfair;

TEST_CASE("outcome probabilities keep White's expectation") {
    OutcomeModel m{0.0, 0.35};
    auto eq = outcome_probabilities(2400, 2400, m);
    CHECK(eq.white_win == doctest::Approx(0.325));
    CHECK(eq.draw == doctest::Approx(0.35));
    CHECK(eq.black_win == doctest::Approx(0.325));

    for (double gap : {-600.0, -120.0, 0.0, 45.0, 900.0}) {
        for (double delta : {0.0, 25.0}) {
            OutcomeModel md{delta, 0.35};
            auto p = outcome_probabilities(2400 + gap, 2400, md);
            CHECK(p.white_win + p.draw + p.black_win == doctest::Approx(1.0));
            CHECK(p.white_win + p.draw / 2 == doctest::Approx(win_probability(2400 + gap, 2400, delta)));
            CHECK(p.white_win >= 0.0);
            CHECK(p.black_win >= 0.0);
        }
    }
}

TEST_CASE("no draws when the ceiling is zero") {
    OutcomeModel m{0.0, 0.0};
    // 2590.85 vs 2400 gives p = 0.75 to well within the sampling error
    const double rw = 2400 + 400 * std::log10(3.0);
    CHECK(win_probability(rw, 2400) == doctest::Approx(0.75));
    std::mt19937_64 rng(1);
    const int n = 100000;
    int wins = 0;
    for (int i = 0; i < n; ++i) {
        const double s = sample_game(rw, 2400, m, rng);
        REQUIRE((s == 1.0 || s == 0.0));
        wins += s == 1.0;
    }
    const double sigma = std::sqrt(0.75 * 0.25 / n);
    CHECK(std::fabs(wins / double(n) - 0.75) < 3 * sigma);
}

TEST_CASE("a certain win never draws") {
    auto p = outcome_probabilities(4000, 100, OutcomeModel{0.0, 0.35});
    CHECK(p.draw == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(p.white_win == doctest::Approx(1.0));
}

TEST_CASE("empirical frequencies at equal ratings") {
    OutcomeModel m{0.0, 0.35};
    std::mt19937_64 rng(77);
    const int n = 100000;
    int win = 0, draw = 0, loss = 0;
    for (int i = 0; i < n; ++i) {
        const double s = sample_game(2500, 2500, m, rng);
        (s == 1.0 ? win : s == 0.5 ? draw : loss)++;
    }
    auto within = [&](int count, double p) {
        return std::fabs(count / double(n) - p) < 3 * std::sqrt(p * (1 - p) / n);
    };
    CHECK(within(win, 0.325));
    CHECK(within(draw, 0.35));
    CHECK(within(loss, 0.325));
}

TEST_CASE("two players, one round") {
    std::vector<Entrant> field = {{1, 2400}, {2, 2300}};
    auto r = simulate_tournament(field, 1, PairingConfig{}, OutcomeModel{}, 5);
    REQUIRE(r.pairings.size() == 1);
    CHECK(r.pairings[0].boards.size() == 1);
    CHECK(r.records[0].points + r.records[1].points == 1.0);
}

TEST_CASE("points are conserved round by round") {
    std::vector<Entrant> field;
    for (int i = 0; i < 31; ++i) field.push_back({i + 1, 2100.0 + 17 * i});
    auto r = simulate_tournament(field, 9, PairingConfig{}, OutcomeModel{30, 0.35}, 99);
    double total = 0.0;
    for (const auto& rec : r.records) total += rec.points;
    CHECK(total == doctest::Approx(9 * (15 * 1.0 + 0.5)));
    for (const auto& rec : r.records) {
        CHECK(rec.points == std::round(rec.points * 2) / 2);
        CHECK(rec.points <= 9);
        CHECK(rec.extra_white == (rec.n_white > rec.n_black ? 1 : 0));
        for (std::size_t k = 0; k < kDeltaGrid.size(); ++k) {
            CHECK(rec.surprise_points[k] == rec.points - rec.expected_points[k]);
        }
    }
}

TEST_CASE("field generation") {
    std::mt19937_64 rng(3);
    FieldSpec normal;
    auto f = generate_field(normal, rng);
    CHECK(f.size() == 100);
    CHECK(f.front().id == 1);
    CHECK(f.back().id == 100);
    for (const auto& e : f) CHECK(e.rating == std::round(e.rating));

    FieldSpec uni{FieldKind::Uniform, 500, 0, 0, 2200, 2500, {}};
    for (const auto& e : generate_field(uni, rng)) {
        CHECK(e.rating >= 2200);
        CHECK(e.rating <= 2500);
    }

    FieldSpec fixed{FieldKind::Fixed, 0, 0, 0, 0, 0, {2500, 2400.5, 2300}};
    auto ff = generate_field(fixed, rng);
    REQUIRE(ff.size() == 3);
    CHECK(ff[1].rating == 2400.5);
}

TEST_CASE("experiment validation") {
    ExperimentSpec s;
    s.replications = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.replications = 1;
    s.rounds = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.rounds = 9;
    s.model.draw_ceiling = 1.5;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("one replication equals a single tournament") {
    ExperimentSpec s;
    s.field.size = 20;
    s.replications = 1;
    s.seed = 1234;
    auto e = run_experiment(s);
    std::mt19937_64 rng(replication_seed(1234, 0));
    auto field = generate_field(s.field, rng);
    auto t = simulate_tournament(field, s.rounds, s.pairing, s.model, replication_seed(1234, 0), "0");
    REQUIRE(e.records.size() == t.records.size());
    for (std::size_t i = 0; i < t.records.size(); ++i) {
        CHECK(e.records[i].player_id == t.records[i].player_id);
        CHECK(e.records[i].points == t.records[i].points);
        CHECK(e.records[i].expected_points == t.records[i].expected_points);
    }
}

TEST_CASE("experiments are reproducible and thread-count independent") {
    ExperimentSpec s;
    s.field.size = 30;
    s.replications = 6;
    s.seed = 42;
    auto a = run_experiment(s);
    auto b = run_experiment(s);
    s.threads = 3;
    auto c = run_experiment(s);
    CHECK(a.records.size() == 180);
    std::ostringstream sa, sb, sc;
    write_records_csv(sa, a.records);
    write_records_csv(sb, b.records);
    write_records_csv(sc, c.records);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str() == sc.str());
    s.seed = 43;
    std::ostringstream sd;
    write_records_csv(sd, run_experiment(s).records);
    CHECK(sd.str() != sa.str());
}

TEST_CASE("extra-white players gain when White has an edge") {
    ExperimentSpec s;
    s.field.sd = 150;
    s.replications = 500;
    s.seed = 2025;
    s.model.delta = 30;
    auto e = run_experiment(s);
    CHECK(e.records.size() == 50000);
    double sum[2] = {0, 0};
    long n[2] = {0, 0};
    for (const auto& r : e.records) {
        sum[r.extra_white] += r.points;
        ++n[r.extra_white];
    }
    CHECK(sum[1] / n[1] > sum[0] / n[0]);
}

TEST_CASE("equal-rated field shows no group gap without white advantage") {
    ExperimentSpec s;
    s.field = FieldSpec{FieldKind::Fixed, 0, 0, 0, 0, 0, std::vector<double>(16, 2400.0)};
    s.replications = 2000;
    s.seed = 17;
    auto e = run_experiment(s);
    double sum[2] = {0, 0};
    long n[2] = {0, 0};
    for (const auto& r : e.records) {
        sum[r.extra_white] += r.points;
        ++n[r.extra_white];
    }
    CHECK(std::fabs(sum[1] / n[1] - sum[0] / n[0]) < 0.05);
}
