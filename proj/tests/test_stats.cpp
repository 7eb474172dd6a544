#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "swissfair/distributions.hpp"
#include "swissfair/error.hpp"
#include "swissfair/stats.hpp"

using namespace swissfair;
namespace pr = swissfair::predictor;

namespace {

DesignMatrix make_design(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                         std::vector<std::string> columns) {
    DesignMatrix d;
    d.columns = std::move(columns);
    d.x.resize(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(x.front().size()));
    d.y.resize(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x[i].size(); ++j) d.x(i, j) = x[i][j];
        d.y[i] = y[i];
    }
    return d;
}

PlayerRecord rec(double points, double elo_c, int extra_white, double expected = 4.5) {
    PlayerRecord r;
    r.points = points;
    r.elo_centered = elo_c;
    r.extra_white = extra_white;
    r.expected_points.fill(expected);
    for (std::size_t k = 0; k < kDeltaGrid.size(); ++k) {
        r.expected_points[k] = expected + 0.01 * static_cast<double>(k);
        r.surprise_points[k] = points - r.expected_points[k];
    }
    return r;
}

}  // namespace

TEST_CASE("incomplete beta and t tails against Boost") {
    for (double a : {0.5, 1.0, 2.5, 10.0, 250.0}) {
        for (double b : {0.5, 1.0, 3.0, 40.0}) {
            for (double x : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999}) {
                const double ref = boost::math::ibeta(a, b, x);
                CHECK(dist::incomplete_beta(a, b, x) == doctest::Approx(ref).epsilon(1e-12));
            }
        }
    }
    for (double dof : {1.0, 3.0, 12.0, 97.0, 4586.0, 42000.0}) {
        boost::math::students_t t(dof);
        for (double v : {0.0, 0.3, 1.96, 2.7, 5.0, 11.0}) {
            const double ref = 2 * boost::math::cdf(boost::math::complement(t, v));
            CHECK(dist::student_t_two_sided_p(v, dof) == doctest::Approx(ref).epsilon(1e-10));
            CHECK(dist::student_t_two_sided_p(-v, dof) == doctest::Approx(ref).epsilon(1e-10));
            CHECK(dist::student_t_cdf(v, dof) == doctest::Approx(boost::math::cdf(t, v)).epsilon(1e-10));
        }
    }
    boost::math::normal z;
    for (double v : {0.0, 1.0, 1.96, 3.3, 8.0}) {
        CHECK(dist::normal_two_sided_p(v) == doctest::Approx(2 * boost::math::cdf(boost::math::complement(z, v))).epsilon(1e-12));
        CHECK(dist::normal_cdf(-v) == doctest::Approx(boost::math::cdf(z, -v)).epsilon(1e-12));
    }
}

TEST_CASE("design matrix") {
    std::vector<PlayerRecord> rs = {rec(5, 1.2, 1), rec(4, 0.0, 1), rec(6, -0.5, 0)};
    SUBCASE("constant and Elo") {
        auto d = build_design(rs, {{pr::kConstant, pr::kEloCentered}, Response::Points});
        CHECK(d.columns == std::vector<std::string>{"constant", "elo_centered"});
        CHECK(d.x(0, 0) == 1.0);
        CHECK(d.x(2, 1) == -0.5);
        CHECK(d.y[1] == 4.0);
        CHECK(d.has_constant());
    }
    SUBCASE("interaction vanishes at zero centred Elo") {
        auto d = build_design(rs, {{pr::kEloXWhite, pr::kExtraWhite}, Response::Points});
        CHECK(d.x(1, 0) == 0.0);
        CHECK(d.x(0, 0) == doctest::Approx(1.2));
        CHECK(d.x(2, 0) == 0.0);
    }
    SUBCASE("threshold response") {
        auto d = build_design(rs, {{pr::kConstant}, Response::Threshold, 0, 0, 5.0});
        CHECK(d.y[0] == 1.0);
        CHECK(d.y[1] == 0.0);
        CHECK(d.y[2] == 1.0);
    }
    SUBCASE("surprise response and its control") {
        auto d = build_design(rs, {{pr::kConstant, pr::kExpectedPoints}, Response::Surprise, 30, 0});
        CHECK(d.y[0] == rs[0].surprise_points[3]);
        CHECK(d.x(0, 1) == rs[0].expected_points[0]);
        auto e = build_design(rs, {{pr::kConstant, pr::kExpectedPoints}, Response::Surprise, 30, 30});
        CHECK(e.x(0, 1) == rs[0].expected_points[3]);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(build_design({}, {{pr::kConstant}, Response::Points}), StatsError);
        CHECK_THROWS_AS(build_design(rs, {{"rating"}, Response::Points}), StatsError);
        CHECK_THROWS_AS(build_design(rs, {{pr::kConstant, pr::kConstant}, Response::Points}), StatsError);
        CHECK_THROWS_AS(build_design(rs, {{pr::kConstant, pr::kEloCentered, pr::kExtraWhite}, Response::Points}),
                        StatsError);
        CHECK_THROWS_AS(build_design(rs, {{pr::kConstant}, Response::Surprise, 25}), ValidationError);
    }
}

TEST_CASE("outlier filter") {
    std::vector<PlayerRecord> rs = {rec(3.0, 0, 0), rec(3.5, 0, 0), rec(7, 0, 1)};
    auto kept = outlier_filter(rs, default_min_points(9));
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].points == 3.5);
    CHECK(default_min_points(9) == 3.5);
    CHECK(default_min_points(11) == 4.5);
    CHECK(outlier_filter({}, 3.5).empty());
}

TEST_CASE("OLS on a perfect line") {
    auto d = make_design({{1, 1}, {1, 2}, {1, 3}}, {1, 2, 3}, {"constant", "x"});
    auto f = ols_fit(d);
    CHECK(f.coefficients[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.coefficients[1] == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("OLS on a constant response") {
    auto d = make_design({{1, 1}, {1, 2}, {1, 4}, {1, 8}}, {3, 3, 3, 3}, {"constant", "x"});
    auto f = ols_fit(d);
    CHECK(f.coefficients[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.coefficients[0] == doctest::Approx(3.0));
    CHECK(f.r_squared == 0.0);
}

TEST_CASE("OLS matches normal equations, t tails and textbook standard errors") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 50;
        std::vector<std::vector<double>> x;
        std::vector<double> y;
        for (int i = 0; i < n; ++i) {
            x.push_back({1.0, nd(rng), nd(rng) * 3 + 1});
            y.push_back(0.5 + 2 * x.back()[1] - 0.7 * x.back()[2] + nd(rng));
        }
        auto f = ols_fit(make_design(x, y, {"constant", "a", "b"}));
        auto b = oracle::normal_equations(x, y);
        for (int j = 0; j < 3; ++j) CHECK(f.coefficients[j] == doctest::Approx(b[j]).epsilon(1e-8));

        // sigma^2 (X'X)^-1 diagonal via the oracle on unit vectors
        double rss = 0.0;
        for (int i = 0; i < n; ++i) {
            double fit = 0.0;
            for (int j = 0; j < 3; ++j) fit += x[i][j] * b[j];
            rss += (y[i] - fit) * (y[i] - fit);
        }
        const double s2 = rss / (n - 3);
        CHECK(f.sigma == doctest::Approx(std::sqrt(s2)));
        Eigen::MatrixXd xtx(3, 3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double acc = 0;
                for (int i = 0; i < n; ++i) acc += x[i][r] * x[i][c];
                xtx(r, c) = acc;
            }
        Eigen::MatrixXd inv = xtx.inverse();
        boost::math::students_t t(n - 3);
        for (int j = 0; j < 3; ++j) {
            CHECK(f.std_errors[j] == doctest::Approx(std::sqrt(s2 * inv(j, j))).epsilon(1e-8));
            const double tv = f.coefficients[j] / f.std_errors[j];
            CHECK(f.t_stats[j] == doctest::Approx(tv));
            CHECK(f.p_values[j] ==
                  doctest::Approx(2 * boost::math::cdf(boost::math::complement(t, std::fabs(tv)))).epsilon(1e-8));
        }
    }
}

TEST_CASE("rank deficiency names the collinear column") {
    auto d = make_design({{1, 1, 2}, {1, 2, 4}, {1, 3, 6}, {1, 5, 10}}, {1, 2, 3, 4}, {"constant", "a", "twice_a"});
    try {
        ols_fit(d);
        FAIL("expected StatsError");
    } catch (const StatsError& e) {
        const std::string what = e.what();
        CHECK((what.find("twice_a") != std::string::npos || what.find("'a'") != std::string::npos ||
               what.find(" a") != std::string::npos));
    }
}

TEST_CASE("logistic regression against a grid search") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::vector<double>> x;
        std::vector<int> yi;
        std::vector<double> y;
        for (int i = 0; i < 40; ++i) {
            const double v = nd(rng);
            // response is [v > 0] with label noise so the classes overlap
            int label = v > 0 ? 1 : 0;
            if (std::uniform_real_distribution<double>()(rng) < 0.25) label = 1 - label;
            x.push_back({1.0, v});
            yi.push_back(label);
            y.push_back(label);
        }
        auto f = logistic_fit(make_design(x, y, {"constant", "x"}));
        auto g = oracle::grid_search_logistic(x, yi);
        CHECK(std::fabs(f.coefficients[0] - g[0]) < 1e-3);
        CHECK(std::fabs(f.coefficients[1] - g[1]) < 1e-3);
        CHECK(f.log_likelihood == doctest::Approx(oracle::logistic_log_likelihood(x, yi, f.coefficients)));
        CHECK(f.odds_ratios[1] == doctest::Approx(std::exp(f.coefficients[1])));
        CHECK(f.log_likelihood >= f.null_log_likelihood);
        const double n = 40;
        const double cs = 1 - std::exp(2 * (f.null_log_likelihood - f.log_likelihood) / n);
        CHECK(f.cox_snell_r2 == doctest::Approx(cs));
        CHECK(f.nagelkerke_r2 == doctest::Approx(cs / (1 - std::exp(2 * f.null_log_likelihood / n))));
        CHECK(f.auc == doctest::Approx(oracle::auc_by_pairs(f.fitted, yi)));
    }
}

TEST_CASE("logistic failure modes") {
    auto single = make_design({{1, 0.1}, {1, 0.5}, {1, 0.9}}, {1, 1, 1}, {"constant", "x"});
    CHECK_THROWS_AS(logistic_fit(single), StatsError);
    auto separated = make_design({{1, -2}, {1, -1}, {1, 1}, {1, 2}}, {0, 0, 1, 1}, {"constant", "x"});
    CHECK_THROWS_AS(logistic_fit(separated), StatsError);
}

TEST_CASE("AUC") {
    std::vector<double> s = {0.9, 0.8, 0.3, 0.1};
    std::vector<int> l = {1, 0, 1, 0};
    CHECK(auc(s, l) == 0.75);
    std::vector<int> perfect = {1, 1, 0, 0};
    CHECK(auc(s, perfect) == 1.0);
    std::vector<int> reversed = {0, 0, 1, 1};
    CHECK(auc(s, reversed) == 0.0);
    std::vector<double> flat(4, 0.4);
    CHECK(auc(flat, l) == 0.5);
    std::vector<int> one_class = {1, 1, 1, 1};
    CHECK_THROWS_AS(auc(s, one_class), StatsError);
}

TEST_CASE("AUC equals pair enumeration on small samples") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 11);
        std::vector<double> s(n);
        std::vector<int> l(n);
        for (int i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng() % 5) / 4.0;  // plenty of ties
            l[i] = static_cast<int>(rng() % 2);
        }
        l[0] = 0;
        l[1] = 1;
        CHECK(auc(s, l) == oracle::auc_by_pairs(s, l));
    }
}

TEST_CASE("significance stars") {
    CHECK(significance_stars(0.0004) == "***");
    CHECK(significance_stars(0.004) == "**");
    CHECK(significance_stars(0.04) == "*");
    CHECK(significance_stars(0.06) == "");
}
