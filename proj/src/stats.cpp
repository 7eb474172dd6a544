#include "swissfair/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "swissfair/distributions.hpp"
#include "swissfair/error.hpp"

namespace swissfair {

namespace {

std::size_t find_column(const std::vector<std::string>& columns, const std::string& name) {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw StatsError("fit has no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

double log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    // log(1 + e^eta) computed stably.
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double e = eta[i];
        const double softplus = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += y[i] * e - softplus;
    }
    return ll;
}

double sigmoid(double e) {
    if (e >= 0) return 1.0 / (1.0 + std::exp(-e));
    const double z = std::exp(e);
    return z / (1.0 + z);
}

}  // namespace

bool DesignMatrix::has_constant() const { return column(predictor::kConstant).has_value(); }

std::optional<std::size_t> DesignMatrix::column(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) return std::nullopt;
    return static_cast<std::size_t>(it - columns.begin());
}

DesignMatrix build_design(std::span<const PlayerRecord> records, const ModelSpec& spec) {
    if (records.empty()) throw StatsError("build_design: empty dataset");
    if (spec.predictors.empty()) throw StatsError("build_design: no predictors");
    const std::set<std::string> known = {predictor::kConstant, predictor::kEloCentered,
                                         predictor::kExpectedPoints, predictor::kExtraWhite,
                                         predictor::kEloXWhite};
    std::set<std::string> seen;
    for (const auto& p : spec.predictors) {
        if (!known.count(p)) throw StatsError("build_design: unknown predictor '" + p + "'");
        if (!seen.insert(p).second) throw StatsError("build_design: duplicate predictor '" + p + "'");
    }
    const std::size_t n = records.size();
    const std::size_t k = spec.predictors.size();
    if (n <= k) {
        throw StatsError("build_design: " + std::to_string(n) + " rows for " + std::to_string(k) +
                         " columns");
    }
    const std::size_t di = delta_index(spec.delta);
    const std::size_t ci = delta_index(spec.control_delta);

    DesignMatrix d;
    d.columns = spec.predictors;
    d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    d.y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        const auto row = static_cast<Eigen::Index>(i);
        for (std::size_t c = 0; c < k; ++c) {
            const auto& p = spec.predictors[c];
            double v = 0.0;
            if (p == predictor::kConstant) {
                v = 1.0;
            } else if (p == predictor::kEloCentered) {
                v = r.elo_centered;
            } else if (p == predictor::kExpectedPoints) {
                v = r.expected_points[ci];
            } else if (p == predictor::kExtraWhite) {
                v = r.extra_white;
            } else {
                v = r.elo_centered * r.extra_white;
            }
            d.x(row, static_cast<Eigen::Index>(c)) = v;
        }
        switch (spec.response) {
            case Response::Points: d.y[row] = r.points; break;
            case Response::Surprise: d.y[row] = r.surprise_points[di]; break;
            case Response::Threshold: d.y[row] = r.points >= spec.threshold ? 1.0 : 0.0; break;
        }
    }
    return d;
}

std::vector<PlayerRecord> outlier_filter(std::span<const PlayerRecord> records, double min_points) {
    std::vector<PlayerRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [&](const PlayerRecord& r) { return r.points >= min_points; });
    return out;
}

double default_min_points(int rounds) { return (rounds - 2) / 2.0; }

std::size_t LinearFit::index(const std::string& name) const { return find_column(columns, name); }

std::size_t LogisticFit::index(const std::string& name) const { return find_column(columns, name); }

LinearFit ols_fit(const DesignMatrix& design) {
    const auto n = design.x.rows();
    const auto k = design.x.cols();
    if (n <= k) throw StatsError("ols_fit: need more rows than columns");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.x);
    qr.setThreshold(1e-10);
    qr.compute(design.x);
    if (qr.rank() < k) {
        std::string names;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < k; ++i) {
            names += (names.empty() ? "" : ", ") + design.columns[static_cast<std::size_t>(perm[i])];
        }
        throw StatsError("ols_fit: design is rank deficient; collinear column(s): " + names);
    }

    const Eigen::VectorXd beta = qr.solve(design.y);
    LinearFit fit;
    fit.columns = design.columns;
    fit.n = static_cast<std::size_t>(n);
    fit.residuals = design.y - design.x * beta;
    const double rss = fit.residuals.squaredNorm();
    const double dof = static_cast<double>(n - k);
    const double sigma2 = rss / dof;
    fit.sigma = std::sqrt(sigma2);

    // (X'X)^-1 = P R^-1 R^-T P'.
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation().indices();
    Eigen::VectorXd diag(k);
    for (Eigen::Index i = 0; i < k; ++i) diag[perm[i]] = cov_perm(i, i);

    for (Eigen::Index c = 0; c < k; ++c) {
        const double b = beta[c];
        const double se = std::sqrt(sigma2 * diag[c]);
        const double t = se > 0 ? b / se : (b == 0 ? 0.0 : std::copysign(INFINITY, b));
        fit.coefficients.push_back(b);
        fit.std_errors.push_back(se);
        fit.t_stats.push_back(t);
        fit.p_values.push_back(se > 0 ? dist::student_t_two_sided_p(t, dof) : (b == 0 ? 1.0 : 0.0));
    }

    const bool centered = design.has_constant();
    const double mean_y = centered ? design.y.mean() : 0.0;
    const double tss = (design.y.array() - mean_y).square().sum();
    fit.r_squared = tss > 0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
    const double nd = static_cast<double>(n);
    const double ratio = centered ? (nd - 1.0) / dof : nd / dof;
    fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * ratio;
    return fit;
}

LogisticFit logistic_fit(const DesignMatrix& design, const LogisticOptions& options) {
    const auto n = design.x.rows();
    const auto k = design.x.cols();
    const auto& x = design.x;
    const auto& y = design.y;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) throw StatsError("logistic_fit: response must be 0/1");
    }
    const double positives = y.sum();
    if (positives == 0.0 || positives == static_cast<double>(n)) {
        throw StatsError("logistic_fit: response has a single class");
    }

    auto separates = [&](const Eigen::VectorXd& eta) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if ((y[i] == 1.0 ? eta[i] : -eta[i]) <= 0.0) return false;
        }
        return true;
    };

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd eta = x * beta;
    double ll = log_likelihood(eta, y);
    std::vector<double> trace = {ll};
    bool converged = false;
    int iter = 0;
    Eigen::MatrixXd info(k, k);

    for (iter = 1; iter <= options.max_iterations; ++iter) {
        Eigen::VectorXd mu(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu[i] = sigmoid(eta[i]);
            w[i] = mu[i] * (1.0 - mu[i]);
        }
        info = x.transpose() * w.asDiagonal() * x;
        const Eigen::VectorXd score = x.transpose() * (y - mu);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            throw StatsError("logistic_fit: information matrix is singular (collinear design?)");
        }
        Eigen::VectorXd step = ldlt.solve(score);

        // Step halving keeps the likelihood monotone.
        Eigen::VectorXd candidate = beta + step;
        Eigen::VectorXd cand_eta = x * candidate;
        double cand_ll = log_likelihood(cand_eta, y);
        for (int h = 0; h < 30 && cand_ll < ll - 1e-12 * std::fabs(ll); ++h) {
            step *= 0.5;
            candidate = beta + step;
            cand_eta = x * candidate;
            cand_ll = log_likelihood(cand_eta, y);
        }
        beta = candidate;
        eta = cand_eta;
        ll = cand_ll;
        trace.push_back(ll);

        if (separates(eta)) {
            throw StatsError("logistic_fit: complete separation; the maximum likelihood estimate does "
                             "not exist");
        }
        if (!beta.allFinite()) break;
        if (step.cwiseAbs().maxCoeff() < options.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "logistic_fit: no convergence after " << options.max_iterations
            << " iterations; log-likelihood trace:";
        for (double v : trace) msg << ' ' << v;
        throw StatsError(msg.str());
    }

    LogisticFit fit;
    fit.columns = design.columns;
    fit.n = static_cast<std::size_t>(n);
    fit.iterations = iter;
    fit.log_likelihood = ll;

    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mu[i] = sigmoid(eta[i]);
        w[i] = mu[i] * (1.0 - mu[i]);
    }
    info = x.transpose() * w.asDiagonal() * x;
    const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    for (Eigen::Index c = 0; c < k; ++c) {
        const double b = beta[c];
        const double se = std::sqrt(cov(c, c));
        const double z = b / se;
        fit.coefficients.push_back(b);
        fit.std_errors.push_back(se);
        fit.z_stats.push_back(z);
        fit.p_values.push_back(dist::normal_two_sided_p(z));
        fit.odds_ratios.push_back(std::exp(b));
    }

    const double nd = static_cast<double>(n);
    const double n1 = positives;
    const double n0 = nd - n1;
    fit.null_log_likelihood = n1 * std::log(n1 / nd) + n0 * std::log(n0 / nd);
    fit.cox_snell_r2 = 1.0 - std::exp(2.0 * (fit.null_log_likelihood - ll) / nd);
    fit.nagelkerke_r2 = fit.cox_snell_r2 / (1.0 - std::exp(2.0 * fit.null_log_likelihood / nd));
    fit.positive_share = n1 / nd;

    std::size_t correct = 0;
    std::vector<int> labels(static_cast<std::size_t>(n));
    fit.fitted.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const int label = y[i] == 1.0 ? 1 : 0;
        labels[static_cast<std::size_t>(i)] = label;
        fit.fitted[static_cast<std::size_t>(i)] = mu[i];
        if ((mu[i] >= 0.5 ? 1 : 0) == label) ++correct;
    }
    fit.classification_rate = static_cast<double>(correct) / nd;
    fit.auc = auc(fit.fitted, labels);
    return fit;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw StatsError("auc: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    double n_pos = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]] == 1) {
                rank_sum_pos += midrank;
                n_pos += 1.0;
            } else if (labels[order[t]] != 0) {
                throw StatsError("auc: labels must be 0/1");
            }
        }
        i = j;
    }
    const double n_neg = static_cast<double>(n) - n_pos;
    if (n_pos == 0.0 || n_neg == 0.0) throw StatsError("auc: both classes must be present");
    return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

std::string significance_stars(double p_value) {
    if (p_value < 0.001) return "***";
    if (p_value < 0.01) return "**";
    if (p_value < 0.05) return "*";
    return "";
}

}  // namespace swissfair
