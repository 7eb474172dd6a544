#include "swissfair/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "swissfair/error.hpp"

namespace swissfair {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no, const std::string& column) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        throw DataError("records csv line " + std::to_string(line_no) + ": bad value '" + text +
                        "' in column " + column);
    }
    return value;
}

}  // namespace

std::size_t delta_index(double delta) {
    for (std::size_t i = 0; i < kDeltaGrid.size(); ++i) {
        if (kDeltaGrid[i] == delta) return i;
    }
    throw ValidationError("delta " + format_double(delta) + " is not on the grid {0,10,...,50}");
}

double PlayerRecord::expected_at(double delta) const { return expected_points[delta_index(delta)]; }

double PlayerRecord::surprise_at(double delta) const { return surprise_points[delta_index(delta)]; }

PlayerRecord make_record(std::string tournament_id, int player_id, double rating,
                         double tournament_mean, double points,
                         std::span<const GameSlot> schedule) {
    PlayerRecord r;
    r.tournament_id = std::move(tournament_id);
    r.player_id = player_id;
    r.elo = rating;
    r.elo_centered = elo_centered(rating, tournament_mean);
    r.points = points;
    for (const auto& g : schedule) {
        (g.colour == Colour::White ? r.n_white : r.n_black) += 1;
    }
    r.extra_white = r.n_white > r.n_black ? 1 : 0;
    for (std::size_t i = 0; i < kDeltaGrid.size(); ++i) {
        r.expected_points[i] = schedule.empty() ? 0.0 : expected_points(rating, schedule, kDeltaGrid[i]);
        r.surprise_points[i] = surprise_points(points, r.expected_points[i]);
    }
    return r;
}

const std::vector<std::string>& record_csv_columns() {
    static const std::vector<std::string> columns = [] {
        std::vector<std::string> c = {"tournament_id", "player_id", "elo", "elo_centered", "points"};
        for (double d : kDeltaGrid) c.push_back("expected_points_d" + std::to_string(static_cast<int>(d)));
        for (double d : kDeltaGrid) c.push_back("surprise_d" + std::to_string(static_cast<int>(d)));
        c.insert(c.end(), {"extra_white", "n_white", "n_black"});
        return c;
    }();
    return columns;
}

void write_records_csv(std::ostream& out, std::span<const PlayerRecord> records) {
    const auto& cols = record_csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : records) {
        if (r.tournament_id.find(',') != std::string::npos) {
            throw ValidationError("tournament id may not contain a comma: " + r.tournament_id);
        }
        out << r.tournament_id << ',' << r.player_id << ',' << format_double(r.elo) << ','
            << format_double(r.elo_centered) << ',' << format_double(r.points);
        for (double v : r.expected_points) out << ',' << format_double(v);
        for (double v : r.surprise_points) out << ',' << format_double(v);
        out << ',' << r.extra_white << ',' << r.n_white << ',' << r.n_black << '\n';
    }
}

std::vector<PlayerRecord> read_records_csv(std::istream& in) {
    const auto& cols = record_csv_columns();
    std::string line;
    if (!std::getline(in, line)) throw DataError("records csv: missing header");
    if (split_csv_line(line) != cols) {
        throw DataError("records csv: header does not match the PlayerRecord schema");
    }

    const std::size_t g = kDeltaGrid.size();
    std::vector<PlayerRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != cols.size()) {
            throw DataError("records csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(cols.size()) + " fields, got " + std::to_string(f.size()));
        }
        PlayerRecord r;
        std::size_t c = 0;
        auto num = [&](auto tag) {
            using T = decltype(tag);
            T v = parse_number<T>(f[c], line_no, cols[c]);
            ++c;
            return v;
        };
        r.tournament_id = f[c++];
        r.player_id = num(int{});
        r.elo = num(double{});
        r.elo_centered = num(double{});
        r.points = num(double{});
        for (std::size_t i = 0; i < g; ++i) r.expected_points[i] = num(double{});
        for (std::size_t i = 0; i < g; ++i) r.surprise_points[i] = num(double{});
        r.extra_white = num(int{});
        r.n_white = num(int{});
        r.n_black = num(int{});
        if (r.extra_white != 0 && r.extra_white != 1) {
            throw DataError("records csv line " + std::to_string(line_no) + ": extra_white must be 0 or 1");
        }
        if (r.extra_white != (r.n_white > r.n_black ? 1 : 0)) {
            throw DataError("records csv line " + std::to_string(line_no) +
                            ": extra_white disagrees with n_white/n_black");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<PlayerRecord> load_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_records_csv(in);
}

void save_records_csv(const std::string& path, std::span<const PlayerRecord> records) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    write_records_csv(out, records);
}

}  // namespace swissfair
