#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swissfair/audit.hpp"
#include "swissfair/ingest.hpp"

namespace swissfair {

// Plain-text tables in the usual journal layout: coefficient with stars,
// standard error in parentheses underneath, fit statistics at the bottom.
std::string render_table(const LinearBattery& battery);
std::string render_table(const LogisticBattery& battery);
std::string render_audit_text(const AuditReport& report);
std::string audit_to_json(const AuditReport& report);

/// Frequency of each point total, split by the extra-white dummy.
struct PointsHistogram {
    std::vector<double> points;
    std::vector<int> no_extra_white;
    std::vector<int> extra_white;
};

PointsHistogram points_histogram(std::span<const PlayerRecord> records);
std::string render_histogram_text(const PointsHistogram& h);

/// Standalone SVG grouped bar chart; `cutoff` draws a dashed vertical line.
std::string render_histogram_svg(const PointsHistogram& h, const std::string& title,
                                 std::optional<double> cutoff = std::nullopt);

std::string render_descriptive(const std::string& tournament_id, const DescriptiveStats& s);
std::string descriptive_to_json(const std::string& tournament_id, const DescriptiveStats& s);

}  // namespace swissfair
