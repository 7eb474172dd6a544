#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swissfair/ratings.hpp"
#include "swissfair/records.hpp"

namespace swissfair {

struct TournamentResult;
struct Entrant;

// Crosstable text format, one record per line, fields separated by blanks:
//
//   # comment
//   tournament <id> rounds <n>
//   player <id> <rating> <round 1> ... <round n>
//
// <rating> is an integer or decimal, or "-" / "0" for unrated players.
// A round entry is one of
//   <opponent id><W|B><1|=|0>   a played game, e.g. "17W=" (draw as White)
//   H                           half-point bye
//   -                           not played (absent, withdrawn, unpaired)
// Any other token is kept verbatim as an annotation and treated as not
// played. Missing trailing entries count as "-".

enum class EntryKind { Game, HalfBye, Unplayed, Annotation };

struct RoundEntry {
    EntryKind kind = EntryKind::Unplayed;
    int opponent = 0;
    Colour colour = Colour::White;
    double score = 0.0;
    std::string raw;
};

struct CrosstableRow {
    int player_id = 0;
    std::optional<double> rating;
    std::vector<RoundEntry> entries;  // exactly `rounds` long after parsing
    std::size_t line = 0;
};

struct RawCrosstable {
    std::string tournament_id;
    int rounds = 0;
    std::vector<CrosstableRow> rows;
};

/// Throws DataError with the line number on malformed input, and naming both
/// players when the two rows of a game disagree.
RawCrosstable parse_crosstable(std::istream& in);
RawCrosstable parse_crosstable_file(const std::string& path);

void write_crosstable(std::ostream& out, const RawCrosstable& table);

/// Keeps rated players who played every round over the board against rated
/// opponents. A single pass: only opponents of unrated players are removed on
/// account of their opponents. Elo is centred on the mean of the kept players.
/// Throws DataError when nobody survives.
std::vector<PlayerRecord> clean(const RawCrosstable& raw);

struct DescriptiveStats {
    std::size_t count = 0;
    std::size_t valid_count = 0;
    double mean = 0.0;
    double sd = 0.0;  // population form (divide by n)
    double min = 0.0;
    double max = 0.0;
    double white_share = 0.0;
};

/// Summary of valid players' ratings. `total_count` is the number of entrants
/// before cleaning. Throws ValidationError on empty input.
DescriptiveStats descriptive_stats(std::span<const PlayerRecord> valid, std::size_t total_count);

/// Crosstable of a simulated tournament (byes written as "H").
RawCrosstable crosstable_from_simulation(const TournamentResult& result,
                                         std::span<const Entrant> field,
                                         const std::string& tournament_id);

}  // namespace swissfair
