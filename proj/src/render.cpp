#include "swissfair/render.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

namespace swissfair {

namespace {

using nlohmann::json;

const std::vector<std::pair<std::string, std::string>>& row_labels() {
    static const std::vector<std::pair<std::string, std::string>> labels = {
        {predictor::kConstant, "Constant"},
        {predictor::kEloCentered, "Elo centered"},
        {predictor::kExpectedPoints, "Expected points"},
        {predictor::kExtraWhite, "Extra white"},
        {predictor::kEloXWhite, "Elo*white"},
    };
    return labels;
}

std::string fixed(double v, int digits = 3) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    std::string out = s.str();
    if (out == "-0.000") out = "0.000";
    return out;
}

std::string percent(double v, int digits = 1) { return fixed(100.0 * v, digits) + "%"; }

class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    void rule() { rows_.push_back({}); }

    std::string str() const {
        std::vector<std::size_t> width(header_.size(), 0);
        auto grow = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
        };
        grow(header_);
        for (const auto& r : rows_) grow(r);
        std::size_t total = 0;
        for (auto w : width) total += w + 2;

        std::ostringstream out;
        auto emit = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < width.size(); ++i) {
                const std::string cell = i < r.size() ? r[i] : "";
                if (i == 0) {
                    out << std::left << std::setw(static_cast<int>(width[i])) << cell;
                } else {
                    out << "  " << std::right << std::setw(static_cast<int>(width[i])) << cell;
                }
            }
            out << '\n';
        };
        const std::string line(total, '-');
        out << line << '\n';
        emit(header_);
        out << line << '\n';
        for (const auto& r : rows_) {
            if (r.empty()) {
                out << line << '\n';
            } else {
                emit(r);
            }
        }
        out << line << '\n';
        return out.str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

template <typename Fit>
void coefficient_rows(TextTable& t, const std::vector<const Fit*>& fits) {
    for (const auto& [name, label] : row_labels()) {
        bool any = false;
        for (const auto* f : fits) {
            any = any || std::find(f->columns.begin(), f->columns.end(), name) != f->columns.end();
        }
        if (!any) continue;
        std::vector<std::string> coef = {label};
        std::vector<std::string> se = {""};
        for (const auto* f : fits) {
            auto it = std::find(f->columns.begin(), f->columns.end(), name);
            if (it == f->columns.end()) {
                coef.push_back("---");
                se.push_back("");
                continue;
            }
            const auto i = static_cast<std::size_t>(it - f->columns.begin());
            coef.push_back(fixed(f->coefficients[i]) + significance_stars(f->p_values[i]));
            se.push_back("(" + fixed(f->std_errors[i]) + ")");
        }
        t.add(coef);
        t.add(se);
    }
}

json linear_json(const LinearModel& m) {
    json coefs = json::object();
    for (std::size_t i = 0; i < m.fit.columns.size(); ++i) {
        coefs[m.fit.columns[i]] = {{"estimate", m.fit.coefficients[i]},
                                   {"std_error", m.fit.std_errors[i]},
                                   {"t", m.fit.t_stats[i]},
                                   {"p", m.fit.p_values[i]},
                                   {"stars", significance_stars(m.fit.p_values[i])}};
    }
    json j = {{"label", m.label},
              {"coefficients", coefs},
              {"r_squared", m.fit.r_squared},
              {"adj_r_squared", m.fit.adj_r_squared},
              {"n", m.fit.n}};
    if (m.spec.response == Response::Surprise) j["delta"] = m.spec.delta;
    if (m.spec.response == Response::Points) {
        if (auto eq = elo_equivalent(m.fit)) j["elo_equivalent_extra_white"] = *eq;
    }
    return j;
}

json logistic_json(const LogisticModel& m) {
    json coefs = json::object();
    for (std::size_t i = 0; i < m.fit.columns.size(); ++i) {
        coefs[m.fit.columns[i]] = {{"estimate", m.fit.coefficients[i]},
                                   {"std_error", m.fit.std_errors[i]},
                                   {"z", m.fit.z_stats[i]},
                                   {"p", m.fit.p_values[i]},
                                   {"odds_ratio", m.fit.odds_ratios[i]},
                                   {"stars", significance_stars(m.fit.p_values[i])}};
    }
    return {{"label", m.label},
            {"threshold", m.spec.threshold},
            {"coefficients", coefs},
            {"log_likelihood", m.fit.log_likelihood},
            {"null_log_likelihood", m.fit.null_log_likelihood},
            {"cox_snell_r2", m.fit.cox_snell_r2},
            {"nagelkerke_r2", m.fit.nagelkerke_r2},
            {"ratio", m.fit.positive_share},
            {"classification_rate", m.fit.classification_rate},
            {"auc", m.fit.auc},
            {"n", m.fit.n}};
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string format_points(double p) {
    std::ostringstream s;
    s << p;
    return s.str();
}

}  // namespace

std::string render_table(const LinearBattery& battery) {
    std::vector<std::string> header = {battery.title};
    std::vector<const LinearFit*> fits;
    for (const auto& m : battery.models) {
        header.push_back(m.label);
        fits.push_back(&m.fit);
    }
    TextTable t(header);
    coefficient_rows(t, fits);
    t.rule();
    std::vector<std::string> r2 = {"R^2"}, adj = {"Adjusted R^2"}, obs = {"Observations"}, eq = {"Elo-equivalent of extra white"};
    bool any_eq = false;
    for (const auto& m : battery.models) {
        const auto* f = &m.fit;
        r2.push_back(fixed(f->r_squared));
        adj.push_back(fixed(f->adj_r_squared));
        obs.push_back(std::to_string(f->n));
        // The ratio reads as Elo only when the response is the raw score.
        auto e = m.spec.response == Response::Points ? elo_equivalent(*f) : std::nullopt;
        any_eq = any_eq || e.has_value();
        eq.push_back(e ? fixed(*e, 1) : "---");
    }
    t.add(r2);
    t.add(adj);
    t.add(obs);
    if (any_eq) t.add(eq);
    return t.str() + "Standard errors in parentheses. * p < 5%; ** p < 1%; *** p < 0.1%.\n";
}

std::string render_table(const LogisticBattery& battery) {
    std::vector<std::string> header = {battery.title};
    std::vector<const LogisticFit*> fits;
    for (const auto& m : battery.models) {
        header.push_back(m.label);
        fits.push_back(&m.fit);
    }
    TextTable t(header);
    coefficient_rows(t, fits);
    t.rule();
    std::vector<std::string> cs = {"Cox & Snell R^2"}, nk = {"Nagelkerke R^2"}, ratio = {"Ratio"},
                             cls = {"Classification"}, roc = {"Area under ROC"}, odds = {"Odds ratio, extra white"},
                             obs = {"Observations"};
    for (const auto* f : fits) {
        cs.push_back(fixed(f->cox_snell_r2));
        nk.push_back(fixed(f->nagelkerke_r2));
        ratio.push_back(percent(f->positive_share, 2));
        cls.push_back(percent(f->classification_rate));
        roc.push_back(fixed(f->auc));
        auto it = std::find(f->columns.begin(), f->columns.end(), predictor::kExtraWhite);
        odds.push_back(it == f->columns.end()
                           ? "---"
                           : fixed(f->odds_ratios[static_cast<std::size_t>(it - f->columns.begin())]));
        obs.push_back(std::to_string(f->n));
    }
    for (auto* row : {&cs, &nk, &ratio, &cls, &roc, &odds, &obs}) t.add(*row);
    return t.str() +
           "Standard errors in parentheses. * p < 5%; ** p < 1%; *** p < 0.1%.\n"
           "Ratio: share of ones. Classification: correct share with the cut at 0.5.\n";
}

std::string render_audit_text(const AuditReport& report) {
    std::ostringstream out;
    out << "Rounds: " << report.rounds << "  records: " << report.n_input << "  kept (points >= "
        << format_points(report.min_points) << "): " << report.n_kept << "\n\n";
    for (const auto& b : report.linear) out << render_table(b) << '\n';
    for (const auto& b : report.logistic) out << render_table(b) << '\n';
    return out.str();
}

std::string audit_to_json(const AuditReport& report) {
    json j = {{"rounds", report.rounds},
              {"min_points", report.min_points},
              {"n_input", report.n_input},
              {"n_kept", report.n_kept},
              {"linear", json::array()},
              {"logistic", json::array()}};
    for (const auto& b : report.linear) {
        json models = json::array();
        for (const auto& m : b.models) models.push_back(linear_json(m));
        j["linear"].push_back({{"title", b.title}, {"models", models}});
    }
    for (const auto& b : report.logistic) {
        json models = json::array();
        for (const auto& m : b.models) models.push_back(logistic_json(m));
        j["logistic"].push_back({{"title", b.title}, {"models", models}});
    }
    return j.dump(2);
}

PointsHistogram points_histogram(std::span<const PlayerRecord> records) {
    std::map<double, std::pair<int, int>> counts;
    for (const auto& r : records) {
        auto& c = counts[r.points];
        (r.extra_white ? c.second : c.first) += 1;
    }
    PointsHistogram h;
    for (const auto& [p, c] : counts) {
        h.points.push_back(p);
        h.no_extra_white.push_back(c.first);
        h.extra_white.push_back(c.second);
    }
    return h;
}

std::string render_histogram_text(const PointsHistogram& h) {
    TextTable t({"Points", "No extra white", "Extra white"});
    int a = 0, b = 0;
    for (std::size_t i = 0; i < h.points.size(); ++i) {
        t.add({format_points(h.points[i]), std::to_string(h.no_extra_white[i]), std::to_string(h.extra_white[i])});
        a += h.no_extra_white[i];
        b += h.extra_white[i];
    }
    t.rule();
    t.add({"Total", std::to_string(a), std::to_string(b)});
    return t.str();
}

std::string render_histogram_svg(const PointsHistogram& h, const std::string& title,
                                 std::optional<double> cutoff) {
    const double width = 800, height = 480, left = 70, right = 20, top = 50, bottom = 70;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    int peak = 1;
    for (std::size_t i = 0; i < h.points.size(); ++i) {
        peak = std::max({peak, h.no_extra_white[i], h.extra_white[i]});
    }
    const std::size_t bins = std::max<std::size_t>(h.points.size(), 1);
    const double slot = plot_w / static_cast<double>(bins);
    const double bar = slot * 0.38;
    auto y_of = [&](double v) { return top + plot_h * (1.0 - v / peak); };

    std::ostringstream s;
    s << std::fixed << std::setprecision(1);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
    for (int g = 0; g <= 4; ++g) {
        const double v = peak * g / 4.0;
        s << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << y_of(v) << "\" y2=\"" << y_of(v)
          << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << left - 6 << "\" y=\"" << y_of(v) + 4 << "\" text-anchor=\"end\">"
          << static_cast<int>(std::lround(v)) << "</text>\n";
    }
    for (std::size_t i = 0; i < h.points.size(); ++i) {
        const double x0 = left + slot * static_cast<double>(i) + slot * 0.12;
        s << "<rect x=\"" << x0 << "\" y=\"" << y_of(h.no_extra_white[i]) << "\" width=\"" << bar
          << "\" height=\"" << top + plot_h - y_of(h.no_extra_white[i]) << "\" fill=\"#3b6fd8\"/>\n";
        s << "<rect x=\"" << x0 + bar << "\" y=\"" << y_of(h.extra_white[i]) << "\" width=\"" << bar
          << "\" height=\"" << top + plot_h - y_of(h.extra_white[i]) << "\" fill=\"#d83b3b\"/>\n";
        s << "<text x=\"" << x0 + bar << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">"
          << format_points(h.points[i]) << "</text>\n";
    }
    if (cutoff && !h.points.empty()) {
        // Place the line between the neighbouring point totals.
        double pos = 0.0;
        for (std::size_t i = 0; i < h.points.size(); ++i) {
            if (h.points[i] <= *cutoff) pos = static_cast<double>(i) + 1.0;
        }
        const double x = left + slot * pos;
        s << "<line x1=\"" << x << "\" x2=\"" << x << "\" y1=\"" << top << "\" y2=\"" << top + plot_h
          << "\" stroke=\"black\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
    }
    s << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << top + plot_h << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << width / 2 << "\" y=\"" << height - 30 << "\" text-anchor=\"middle\">Number of points</text>\n";
    s << "<text transform=\"translate(18," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">Frequency</text>\n";
    s << "<rect x=\"" << left << "\" y=\"" << height - 20 << "\" width=\"12\" height=\"12\" fill=\"#3b6fd8\"/>"
      << "<text x=\"" << left + 16 << "\" y=\"" << height - 10 << "\">No extra white</text>\n";
    s << "<rect x=\"" << left + 140 << "\" y=\"" << height - 20 << "\" width=\"12\" height=\"12\" fill=\"#d83b3b\"/>"
      << "<text x=\"" << left + 156 << "\" y=\"" << height - 10 << "\">Extra white</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string render_descriptive(const std::string& tournament_id, const DescriptiveStats& s) {
    TextTable t({"ID", "Number", "Valid", "Average", "Std dev", "Min", "Max", "White"});
    t.add({tournament_id, std::to_string(s.count), std::to_string(s.valid_count), fixed(s.mean, 2), fixed(s.sd, 2),
           format_points(s.min), format_points(s.max), percent(s.white_share, 2)});
    return t.str();
}

std::string descriptive_to_json(const std::string& tournament_id, const DescriptiveStats& s) {
    return json{{"tournament_id", tournament_id}, {"count", s.count}, {"valid", s.valid_count},
                {"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}, {"white_share", s.white_share}}
        .dump(2);
}

}  // namespace swissfair
