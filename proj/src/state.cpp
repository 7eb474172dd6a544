#include "swissfair/state.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "swissfair/error.hpp"

namespace swissfair {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + ": invalid JSON: " + e.what());
    }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ValidationError(where + ": missing key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(where + ": key '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
    return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

PairingConfig pairing_from(const json& j) {
    reject_unknown(j,
                   {"mode", "beta", "base_weight", "score_diff_penalty_per_point", "bonus_absolute",
                    "bonus_strong", "bonus_mild", "quantization_scale", "allow_last_round_exception"},
                   "pairing");
    PairingConfig c;
    const auto mode = get_or<std::string>(j, "mode", "standard", "pairing");
    if (mode == "standard") {
        c.mode = PairingMode::Standard;
    } else if (mode == "balanced") {
        c.mode = PairingMode::Balanced;
    } else {
        throw ValidationError("pairing: mode must be 'standard' or 'balanced'");
    }
    c.beta = get_or(j, "beta", c.beta, "pairing");
    c.base_weight = get_or(j, "base_weight", c.base_weight, "pairing");
    c.score_diff_penalty_per_point = get_or(j, "score_diff_penalty_per_point", c.score_diff_penalty_per_point, "pairing");
    c.bonus_absolute = get_or(j, "bonus_absolute", c.bonus_absolute, "pairing");
    c.bonus_strong = get_or(j, "bonus_strong", c.bonus_strong, "pairing");
    c.bonus_mild = get_or(j, "bonus_mild", c.bonus_mild, "pairing");
    c.quantization_scale = get_or(j, "quantization_scale", c.quantization_scale, "pairing");
    c.allow_last_round_exception = get_or(j, "allow_last_round_exception", c.allow_last_round_exception, "pairing");
    c.validate();
    return c;
}

json pairing_to(const PairingConfig& c) {
    return {{"mode", c.mode == PairingMode::Balanced ? "balanced" : "standard"},
            {"beta", c.beta},
            {"base_weight", c.base_weight},
            {"score_diff_penalty_per_point", c.score_diff_penalty_per_point},
            {"bonus_absolute", c.bonus_absolute},
            {"bonus_strong", c.bonus_strong},
            {"bonus_mild", c.bonus_mild},
            {"quantization_scale", c.quantization_scale},
            {"allow_last_round_exception", c.allow_last_round_exception}};
}

std::optional<double> parse_result(const json& j, const std::string& where) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_string()) throw ValidationError(where + ": result must be a string or null");
    const auto s = j.get<std::string>();
    if (s == "1-0") return 1.0;
    if (s == "0-1") return 0.0;
    if (s == "1/2-1/2") return 0.5;
    throw ValidationError(where + ": result must be \"1-0\", \"0-1\" or \"1/2-1/2\"");
}

json result_to(const std::optional<double>& r) {
    if (!r) return nullptr;
    if (*r == 1.0) return "1-0";
    if (*r == 0.0) return "0-1";
    return "1/2-1/2";
}

}  // namespace

TournamentState parse_state(const std::string& json_text) {
    const json j = parse_json(json_text, "state");
    reject_unknown(j, {"tournament", "total_rounds", "pairing", "players", "rounds"}, "state");
    TournamentState s;
    s.tournament = get_or<std::string>(j, "tournament", "", "state");
    s.total_rounds = get<int>(j, "total_rounds", "state");
    if (s.total_rounds < 1) throw ValidationError("state: total_rounds must be >= 1");
    if (j.contains("pairing")) s.pairing = pairing_from(j.at("pairing"));

    const auto players = get<json>(j, "players", "state");
    if (!players.is_array() || players.size() < 2) {
        throw ValidationError("state: players must be an array of at least two entries");
    }
    std::set<int> ids;
    for (const auto& p : players) {
        reject_unknown(p, {"id", "rating"}, "state.players");
        Entrant e{get<int>(p, "id", "state.players"), get<double>(p, "rating", "state.players")};
        if (!(e.rating > 0)) throw ValidationError("state.players: rating must be positive");
        if (!ids.insert(e.id).second) throw ValidationError("state.players: duplicate id " + std::to_string(e.id));
        s.players.push_back(e);
    }

    const auto rounds = get_or<json>(j, "rounds", json::array(), "state");
    if (!rounds.is_array()) throw ValidationError("state: rounds must be an array");
    for (const auto& r : rounds) {
        reject_unknown(r, {"boards", "bye"}, "state.rounds");
        StateRound round;
        for (const auto& b : get<json>(r, "boards", "state.rounds")) {
            reject_unknown(b, {"white", "black", "result"}, "state.rounds.boards");
            round.boards.push_back({get<int>(b, "white", "state.rounds.boards"),
                                    get<int>(b, "black", "state.rounds.boards"),
                                    parse_result(b.contains("result") ? b.at("result") : json(nullptr),
                                                 "state.rounds.boards")});
        }
        if (r.contains("bye") && !r.at("bye").is_null()) round.bye = get<int>(r, "bye", "state.rounds");
        s.rounds.push_back(std::move(round));
    }
    if (static_cast<int>(s.rounds.size()) > s.total_rounds) {
        throw ValidationError("state: more rounds recorded than total_rounds");
    }
    return s;
}

TournamentState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_state(buf.str());
}

std::string state_to_json(const TournamentState& state) {
    json j;
    if (!state.tournament.empty()) j["tournament"] = state.tournament;
    j["total_rounds"] = state.total_rounds;
    j["pairing"] = pairing_to(state.pairing);
    j["players"] = json::array();
    for (const auto& p : state.players) j["players"].push_back({{"id", p.id}, {"rating", p.rating}});
    j["rounds"] = json::array();
    for (const auto& r : state.rounds) {
        json round = {{"boards", json::array()}};
        for (const auto& b : r.boards) {
            round["boards"].push_back({{"white", b.white}, {"black", b.black}, {"result", result_to(b.white_score)}});
        }
        if (r.bye) round["bye"] = *r.bye;
        j["rounds"].push_back(round);
    }
    return j.dump(2) + "\n";
}

std::vector<PlayerState> replay(const TournamentState& state) {
    std::vector<PlayerState> players;
    std::unordered_map<int, std::size_t> index;
    for (const auto& e : state.players) {
        index[e.id] = players.size();
        PlayerState p;
        p.id = e.id;
        p.rating = e.rating;
        players.push_back(std::move(p));
    }
    auto lookup = [&](int id, std::size_t round) -> PlayerState& {
        auto it = index.find(id);
        if (it == index.end()) {
            throw DataError("round " + std::to_string(round) + ": unknown player " + std::to_string(id));
        }
        return players[it->second];
    };

    for (std::size_t r = 0; r < state.rounds.size(); ++r) {
        const auto& round = state.rounds[r];
        const std::size_t rn = r + 1;
        std::set<int> seen;
        auto mark = [&](int id) {
            if (!seen.insert(id).second) {
                throw DataError("round " + std::to_string(rn) + ": player " + std::to_string(id) + " appears twice");
            }
        };
        for (const auto& b : round.boards) {
            mark(b.white);
            mark(b.black);
            if (!b.white_score) {
                throw DataError("round " + std::to_string(rn) + ": result pending for board " +
                                std::to_string(b.white) + " - " + std::to_string(b.black));
            }
            auto& w = lookup(b.white, rn);
            auto& k = lookup(b.black, rn);
            if (w.has_met(k.id)) {
                throw DataError("round " + std::to_string(rn) + ": rematch " + std::to_string(b.white) + " - " +
                                std::to_string(b.black));
            }
            record_game(w, k, *b.white_score);
        }
        if (round.bye) {
            mark(*round.bye);
            auto& p = lookup(*round.bye, rn);
            if (p.had_bye) throw DataError("round " + std::to_string(rn) + ": second bye for " + std::to_string(p.id));
            record_bye(p);
        }
    }
    return players;
}

void append_round(TournamentState& state, const RoundPairing& pairing) {
    StateRound round;
    for (const auto& b : pairing.boards) round.boards.push_back({b.white, b.black, std::nullopt});
    round.bye = pairing.bye;
    state.rounds.push_back(std::move(round));
}

PairingConfig parse_pairing_config(const std::string& json_text) {
    return pairing_from(parse_json(json_text, "pairing"));
}

ExperimentSpec parse_experiment(const std::string& json_text, const std::string& base_dir) {
    const json j = parse_json(json_text, "experiment");
    reject_unknown(j, {"rounds", "replications", "threads", "field", "model", "pairing"}, "experiment");
    ExperimentSpec spec;
    spec.rounds = get<int>(j, "rounds", "experiment");
    spec.replications = get<int>(j, "replications", "experiment");
    spec.threads = get_or(j, "threads", 1, "experiment");

    const json field = get<json>(j, "field", "experiment");
    if (!field.is_object()) throw ValidationError("experiment.field: expected an object");
    const auto kind = get<std::string>(field, "kind", "experiment.field");
    if (kind == "normal") {
        reject_unknown(field, {"kind", "size", "mean", "sd"}, "experiment.field");
        spec.field.kind = FieldKind::Normal;
        spec.field.size = get<int>(field, "size", "experiment.field");
        spec.field.mean = get_or(field, "mean", spec.field.mean, "experiment.field");
        spec.field.sd = get_or(field, "sd", spec.field.sd, "experiment.field");
    } else if (kind == "uniform") {
        reject_unknown(field, {"kind", "size", "min", "max"}, "experiment.field");
        spec.field.kind = FieldKind::Uniform;
        spec.field.size = get<int>(field, "size", "experiment.field");
        spec.field.min = get<double>(field, "min", "experiment.field");
        spec.field.max = get<double>(field, "max", "experiment.field");
    } else if (kind == "fixed") {
        reject_unknown(field, {"kind", "ratings"}, "experiment.field");
        spec.field.kind = FieldKind::Fixed;
        spec.field.ratings = get<std::vector<double>>(field, "ratings", "experiment.field");
    } else if (kind == "file") {
        reject_unknown(field, {"kind", "path"}, "experiment.field");
        spec.field.kind = FieldKind::Fixed;
        std::filesystem::path path = get<std::string>(field, "path", "experiment.field");
        if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
        std::ifstream in(path);
        if (!in) throw ValidationError("experiment.field: cannot open " + path.string());
        for (double r; in >> r;) spec.field.ratings.push_back(r);
        if (!in.eof()) throw ValidationError("experiment.field: non-numeric rating in " + path.string());
    } else {
        throw ValidationError("experiment.field: kind must be normal, uniform, fixed or file");
    }

    if (j.contains("model")) {
        const json& m = j.at("model");
        reject_unknown(m, {"delta", "draw_ceiling"}, "experiment.model");
        spec.model.delta = get_or(m, "delta", spec.model.delta, "experiment.model");
        spec.model.draw_ceiling = get_or(m, "draw_ceiling", spec.model.draw_ceiling, "experiment.model");
    }
    if (j.contains("pairing")) spec.pairing = pairing_from(j.at("pairing"));
    spec.validate();
    return spec;
}

}  // namespace swissfair
