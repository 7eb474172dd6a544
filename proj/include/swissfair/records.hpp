#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swissfair/ratings.hpp"

namespace swissfair {

/// One analysis row: a player's tournament outcome against their schedule.
struct PlayerRecord {
    std::string tournament_id;
    int player_id = 0;
    double elo = 0.0;
    double elo_centered = 0.0;
    double points = 0.0;
    std::array<double, kDeltaGrid.size()> expected_points{};  // indexed like kDeltaGrid
    std::array<double, kDeltaGrid.size()> surprise_points{};
    int extra_white = 0;
    int n_white = 0;
    int n_black = 0;

    /// Expected points at a grid value of delta; throws ValidationError off-grid.
    double expected_at(double delta) const;
    double surprise_at(double delta) const;
};

/// Index of `delta` in kDeltaGrid, or throws ValidationError.
std::size_t delta_index(double delta);

/// Builds a record from a schedule of played games. `points` includes any bye
/// credit; an empty schedule yields zero expected points.
PlayerRecord make_record(std::string tournament_id, int player_id, double rating,
                         double tournament_mean, double points,
                         std::span<const GameSlot> schedule);

/// Column names of the shared CSV schema, in order.
const std::vector<std::string>& record_csv_columns();

void write_records_csv(std::ostream& out, std::span<const PlayerRecord> records);

/// Throws DataError on a header that is not exactly the schema, or on a
/// malformed row (the message names the line).
std::vector<PlayerRecord> read_records_csv(std::istream& in);

std::vector<PlayerRecord> load_records_csv(const std::string& path);
void save_records_csv(const std::string& path, std::span<const PlayerRecord> records);

}  // namespace swissfair
