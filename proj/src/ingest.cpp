#include "swissfair/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "swissfair/error.hpp"
#include "swissfair/simulate.hpp"

namespace swissfair {

namespace {

std::string where(std::size_t line) { return "crosstable line " + std::to_string(line) + ": "; }

bool parse_int(const std::string& s, int& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

RoundEntry parse_entry(const std::string& token) {
    RoundEntry e;
    e.raw = token;
    if (token == "H") {
        e.kind = EntryKind::HalfBye;
        return e;
    }
    if (token == "-") {
        e.kind = EntryKind::Unplayed;
        return e;
    }
    if (token.size() >= 3) {
        const char colour = token[token.size() - 2];
        const char result = token.back();
        int opponent = 0;
        if ((colour == 'W' || colour == 'B') && (result == '1' || result == '=' || result == '0') &&
            parse_int(token.substr(0, token.size() - 2), opponent) && opponent > 0) {
            e.kind = EntryKind::Game;
            e.opponent = opponent;
            e.colour = colour == 'W' ? Colour::White : Colour::Black;
            e.score = result == '1' ? 1.0 : (result == '=' ? 0.5 : 0.0);
            return e;
        }
    }
    e.kind = EntryKind::Annotation;
    return e;
}

std::string format_rating(const std::optional<double>& rating) {
    if (!rating) return "-";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), *rating);
    return std::string(buf, res.ptr);
}

}  // namespace

RawCrosstable parse_crosstable(std::istream& in) {
    RawCrosstable table;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    std::unordered_map<int, std::size_t> row_of;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;

        if (tok[0] == "tournament") {
            if (have_header) throw DataError(where(line_no) + "second tournament header");
            if (tok.size() != 4 || tok[2] != "rounds" || !parse_int(tok[3], table.rounds) ||
                table.rounds < 1) {
                throw DataError(where(line_no) + "expected 'tournament <id> rounds <n>'");
            }
            table.tournament_id = tok[1];
            have_header = true;
        } else if (tok[0] == "player") {
            if (!have_header) throw DataError(where(line_no) + "player line before tournament header");
            if (tok.size() < 3) throw DataError(where(line_no) + "expected 'player <id> <rating> ...'");
            CrosstableRow row;
            row.line = line_no;
            if (!parse_int(tok[1], row.player_id) || row.player_id <= 0) {
                throw DataError(where(line_no) + "bad player id '" + tok[1] + "'");
            }
            if (tok[2] != "-") {
                double r = 0.0;
                auto res = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), r);
                if (res.ec != std::errc() || res.ptr != tok[2].data() + tok[2].size() || r < 0 ||
                    !std::isfinite(r)) {
                    throw DataError(where(line_no) + "bad rating '" + tok[2] + "'");
                }
                if (r > 0) row.rating = r;
            }
            const std::size_t given = tok.size() - 3;
            if (given > static_cast<std::size_t>(table.rounds)) {
                throw DataError(where(line_no) + std::to_string(given) + " round entries for a " +
                                std::to_string(table.rounds) + "-round event");
            }
            for (std::size_t i = 3; i < tok.size(); ++i) row.entries.push_back(parse_entry(tok[i]));
            while (row.entries.size() < static_cast<std::size_t>(table.rounds)) {
                row.entries.push_back(parse_entry("-"));
            }
            if (!row_of.emplace(row.player_id, table.rows.size()).second) {
                throw DataError(where(line_no) + "duplicate player " + std::to_string(row.player_id));
            }
            table.rows.push_back(std::move(row));
        } else {
            throw DataError(where(line_no) + "unknown record '" + tok[0] + "'");
        }
    }
    if (!have_header) throw DataError("crosstable: missing tournament header");

    for (const auto& row : table.rows) {
        for (int r = 0; r < table.rounds; ++r) {
            const auto& e = row.entries[r];
            if (e.kind != EntryKind::Game) continue;
            const std::string round = "round " + std::to_string(r + 1) + ": ";
            auto it = row_of.find(e.opponent);
            if (it == row_of.end()) {
                throw DataError(where(row.line) + round + "player " + std::to_string(row.player_id) +
                                " faces unknown player " + std::to_string(e.opponent));
            }
            if (e.opponent == row.player_id) {
                throw DataError(where(row.line) + round + "player " + std::to_string(row.player_id) +
                                " paired with itself");
            }
            const auto& other = table.rows[it->second];
            const auto& o = other.entries[r];
            if (o.kind != EntryKind::Game || o.opponent != row.player_id || o.colour == e.colour ||
                o.score != 1.0 - e.score) {
                throw DataError(round + "rows for players " + std::to_string(row.player_id) + " (line " +
                                std::to_string(row.line) + ") and " + std::to_string(other.player_id) +
                                " (line " + std::to_string(other.line) + ") disagree");
            }
        }
    }
    return table;
}

RawCrosstable parse_crosstable_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return parse_crosstable(in);
}

void write_crosstable(std::ostream& out, const RawCrosstable& table) {
    out << "tournament " << table.tournament_id << " rounds " << table.rounds << '\n';
    for (const auto& row : table.rows) {
        out << "player " << row.player_id << ' ' << format_rating(row.rating);
        for (const auto& e : row.entries) {
            out << ' ';
            switch (e.kind) {
                case EntryKind::Game:
                    out << e.opponent << (e.colour == Colour::White ? 'W' : 'B')
                        << (e.score == 1.0 ? '1' : (e.score == 0.5 ? '=' : '0'));
                    break;
                case EntryKind::HalfBye: out << 'H'; break;
                case EntryKind::Unplayed: out << '-'; break;
                case EntryKind::Annotation: out << e.raw; break;
            }
        }
        out << '\n';
    }
}

std::vector<PlayerRecord> clean(const RawCrosstable& raw) {
    std::unordered_map<int, const CrosstableRow*> by_id;
    for (const auto& row : raw.rows) by_id[row.player_id] = &row;

    std::vector<const CrosstableRow*> valid;
    for (const auto& row : raw.rows) {
        if (!row.rating) continue;
        bool ok = row.entries.size() == static_cast<std::size_t>(raw.rounds);
        for (const auto& e : row.entries) {
            if (!ok) break;
            ok = e.kind == EntryKind::Game && by_id.at(e.opponent)->rating.has_value();
        }
        if (ok) valid.push_back(&row);
    }
    if (valid.empty()) throw DataError("clean: no valid players in tournament " + raw.tournament_id);

    double mean = 0.0;
    for (const auto* row : valid) mean += *row->rating;
    mean /= static_cast<double>(valid.size());

    std::vector<PlayerRecord> out;
    for (const auto* row : valid) {
        std::vector<GameSlot> schedule;
        double points = 0.0;
        for (const auto& e : row->entries) {
            schedule.push_back({*by_id.at(e.opponent)->rating, e.colour});
            points += e.score;
        }
        out.push_back(make_record(raw.tournament_id, row->player_id, *row->rating, mean, points, schedule));
    }
    return out;
}

DescriptiveStats descriptive_stats(std::span<const PlayerRecord> valid, std::size_t total_count) {
    if (valid.empty()) throw ValidationError("descriptive_stats: no players");
    DescriptiveStats s;
    s.count = total_count;
    s.valid_count = valid.size();
    s.min = valid.front().elo;
    s.max = valid.front().elo;
    double sum = 0.0;
    double whites = 0.0;
    for (const auto& r : valid) {
        sum += r.elo;
        whites += r.extra_white;
        s.min = std::min(s.min, r.elo);
        s.max = std::max(s.max, r.elo);
    }
    const double n = static_cast<double>(valid.size());
    s.mean = sum / n;
    double ss = 0.0;
    for (const auto& r : valid) ss += (r.elo - s.mean) * (r.elo - s.mean);
    s.sd = std::sqrt(ss / n);
    s.white_share = whites / n;
    return s;
}

RawCrosstable crosstable_from_simulation(const TournamentResult& result,
                                         std::span<const Entrant> field,
                                         const std::string& tournament_id) {
    RawCrosstable table;
    table.tournament_id = tournament_id;
    table.rounds = static_cast<int>(result.pairings.size());
    std::unordered_map<int, std::size_t> row_of;
    for (const auto& e : field) {
        row_of[e.id] = table.rows.size();
        CrosstableRow row;
        row.player_id = e.id;
        row.rating = e.rating;
        row.entries.assign(static_cast<std::size_t>(table.rounds), RoundEntry{EntryKind::Unplayed, 0, Colour::White, 0.0, "-"});
        table.rows.push_back(std::move(row));
    }
    for (int r = 0; r < table.rounds; ++r) {
        for (const auto& g : result.results[r]) {
            table.rows[row_of.at(g.white_id)].entries[r] =
                RoundEntry{EntryKind::Game, g.black_id, Colour::White, g.white_score, ""};
            table.rows[row_of.at(g.black_id)].entries[r] =
                RoundEntry{EntryKind::Game, g.white_id, Colour::Black, 1.0 - g.white_score, ""};
        }
        if (const auto& bye = result.pairings[r].bye) {
            table.rows[row_of.at(*bye)].entries[r] = RoundEntry{EntryKind::HalfBye, 0, Colour::White, 0.5, "H"};
        }
    }
    return table;
}

}  // namespace swissfair
