#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swissfair/records.hpp"

namespace swissfair {

/// Regressors understood by build_design.
namespace predictor {
inline constexpr const char* kConstant = "constant";
inline constexpr const char* kEloCentered = "elo_centered";
inline constexpr const char* kExpectedPoints = "expected_points";
inline constexpr const char* kExtraWhite = "extra_white";
inline constexpr const char* kEloXWhite = "elo_x_white";
}  // namespace predictor

enum class Response {
    Points,    // S_i
    Surprise,  // U_i(delta)
    Threshold  // 1 if S_i >= threshold
};

struct ModelSpec {
    std::vector<std::string> predictors;
    Response response = Response::Points;
    double delta = 0.0;          // white advantage of the Surprise response
    double control_delta = 0.0;  // white advantage of the expected_points regressor
    double threshold = 0.0;
};

struct DesignMatrix {
    std::vector<std::string> columns;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    std::size_t rows() const { return static_cast<std::size_t>(x.rows()); }
    bool has_constant() const;
    /// Position of a named column, or std::nullopt.
    std::optional<std::size_t> column(const std::string& name) const;
};

/// Throws StatsError on an empty dataset, an unknown predictor, duplicate
/// predictors, or n <= number of columns.
DesignMatrix build_design(std::span<const PlayerRecord> records, const ModelSpec& spec);

/// Keeps records with points >= min_points.
std::vector<PlayerRecord> outlier_filter(std::span<const PlayerRecord> records, double min_points);

/// Default outlier cut for a (2k+1)-round event: k - 0.5 points, i.e. 3.5 for
/// 9 rounds and 4.5 for 11 rounds.
double default_min_points(int rounds);

struct LinearFit {
    std::vector<std::string> columns;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    Eigen::VectorXd residuals;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double sigma = 0.0;  // residual standard error
    std::size_t n = 0;

    /// Index of a named column; throws StatsError if absent.
    std::size_t index(const std::string& name) const;
};

/// Least squares via column-pivoted QR with classical standard errors and
/// two-sided t-test p-values. Throws StatsError naming collinear columns when
/// the design is rank deficient.
LinearFit ols_fit(const DesignMatrix& design);

struct LogisticFit {
    std::vector<std::string> columns;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> z_stats;
    std::vector<double> p_values;
    std::vector<double> odds_ratios;
    std::vector<double> fitted;  // P(y = 1) per row
    double log_likelihood = 0.0;
    double null_log_likelihood = 0.0;
    double cox_snell_r2 = 0.0;
    double nagelkerke_r2 = 0.0;
    double classification_rate = 0.0;  // cut at 0.5
    double positive_share = 0.0;
    double auc = 0.0;
    int iterations = 0;
    std::size_t n = 0;

    std::size_t index(const std::string& name) const;
};

struct LogisticOptions {
    double tolerance = 1e-8;  // on max |coefficient change|
    int max_iterations = 100;
};

/// Maximum likelihood by Newton / IRLS with step halving. Throws StatsError
/// for a single-class response, complete separation (some iterate classifies
/// every row correctly, so no finite maximum exists), or non-convergence
/// (message carries the log-likelihood trace).
LogisticFit logistic_fit(const DesignMatrix& design, const LogisticOptions& options = {});

/// Probability that a random positive outranks a random negative, ties at
/// one half (midrank Mann-Whitney). Throws StatsError for single-class labels.
double auc(std::span<const double> scores, std::span<const int> labels);

/// "***" p < 0.001, "**" p < 0.01, "*" p < 0.05, otherwise "".
std::string significance_stars(double p_value);

}  // namespace swissfair
