#include "swissfair/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>
#include <unordered_map>

#include "swissfair/error.hpp"

namespace swissfair {

namespace {

bool is_absolute_conflict(const ColourPreference& a, const ColourPreference& b) {
    return a.strength == PreferenceStrength::Absolute && b.strength == PreferenceStrength::Absolute &&
           a.colour == b.colour;
}

bool balanced_even_round(const PairingConfig& config, int round_no) {
    return config.mode == PairingMode::Balanced && round_no % 2 == 0;
}

double preference_bonus(const PairingConfig& config, PreferenceStrength s) {
    switch (s) {
        case PreferenceStrength::Absolute: return config.bonus_absolute;
        case PreferenceStrength::Strong: return config.bonus_strong;
        case PreferenceStrength::Mild: return config.bonus_mild;
        case PreferenceStrength::None: return 0.0;
    }
    return 0.0;
}

}  // namespace

std::string to_string(const ColourPreference& pref) {
    std::string s;
    switch (pref.strength) {
        case PreferenceStrength::None: return "None";
        case PreferenceStrength::Mild: s = "Mild"; break;
        case PreferenceStrength::Strong: s = "Strong"; break;
        case PreferenceStrength::Absolute: s = "Absolute"; break;
    }
    return s + (pref.colour == Colour::White ? "White" : "Black");
}

bool PlayerState::has_met(int other) const {
    return std::binary_search(opponents.begin(), opponents.end(), other);
}

void PairingConfig::validate() const {
    if (mode == PairingMode::Balanced && !(beta > 0.0 && beta <= 0.5)) {
        throw ValidationError("pairing: beta must lie in (0, 0.5]");
    }
    if (base_weight < 0 || score_diff_penalty_per_point < 0 || bonus_absolute < 0 ||
        bonus_strong < 0 || bonus_mild < 0) {
        throw ValidationError("pairing: weights must be non-negative");
    }
    if (quantization_scale <= 0) throw ValidationError("pairing: quantization_scale must be positive");
    const double max_units = base_weight + 2.0 * bonus_absolute;
    if (max_units * static_cast<double>(quantization_scale) > 1e12) {
        throw ValidationError("pairing: quantized weights exceed the matching range");
    }
}

double PairingConfig::effective_score_penalty() const {
    return mode == PairingMode::Balanced ? score_diff_penalty_per_point * beta / 0.5
                                         : score_diff_penalty_per_point;
}

int colour_imbalance(const ColourHistory& history) {
    int balance = 0;
    for (auto e : history) {
        if (e == HistoryEntry::White) ++balance;
        if (e == HistoryEntry::Black) --balance;
    }
    return balance;
}

ColourPreference colour_preference(const ColourHistory& history) {
    std::vector<Colour> played;
    for (auto e : history) {
        if (e == HistoryEntry::White) played.push_back(Colour::White);
        if (e == HistoryEntry::Black) played.push_back(Colour::Black);
    }
    if (played.empty()) return {};

    const int imbalance = colour_imbalance(history);
    if (imbalance >= 2) return {PreferenceStrength::Absolute, Colour::Black};
    if (imbalance <= -2) return {PreferenceStrength::Absolute, Colour::White};

    const Colour last = played.back();
    if (played.size() >= 2 && played[played.size() - 2] == last) {
        return {PreferenceStrength::Absolute, opposite(last)};
    }
    if (imbalance == 1) return {PreferenceStrength::Strong, Colour::Black};
    if (imbalance == -1) return {PreferenceStrength::Strong, Colour::White};
    return {PreferenceStrength::Mild, opposite(last)};
}

std::vector<std::pair<int, int>> eligible_pairs(std::span<const PlayerState> players,
                                                const PairingConfig& config, int round_no,
                                                int total_rounds) {
    const bool relax = config.allow_last_round_exception && round_no == total_rounds;
    const bool balanced = balanced_even_round(config, round_no);
    const int n = static_cast<int>(players.size());

    std::vector<ColourPreference> prefs(n);
    std::vector<int> imbalance(n);
    for (int i = 0; i < n; ++i) {
        prefs[i] = colour_preference(players[i].history);
        imbalance[i] = colour_imbalance(players[i].history);
    }

    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (players[i].has_met(players[j].id)) continue;
            if (!relax && is_absolute_conflict(prefs[i], prefs[j])) continue;
            if (balanced && std::abs(imbalance[i]) == 1 && std::abs(imbalance[j]) == 1 &&
                imbalance[i] + imbalance[j] != 0) {
                continue;
            }
            out.emplace_back(i, j);
        }
    }
    return out;
}

std::pair<int, int> assign_colours(const PlayerState& p, const PlayerState& q, bool allow_violation) {
    const auto pp = colour_preference(p.history);
    const auto pq = colour_preference(q.history);
    if (is_absolute_conflict(pp, pq) && !allow_violation) {
        throw ValidationError("assign_colours: players " + std::to_string(p.id) + " and " +
                              std::to_string(q.id) + " both require " +
                              (pp.colour == Colour::White ? "white" : "black"));
    }

    auto p_gets = [&](Colour c) {
        return c == Colour::White ? std::pair{p.id, q.id} : std::pair{q.id, p.id};
    };

    if (pp.strength > pq.strength) return p_gets(pp.colour);
    if (pq.strength > pp.strength) return p_gets(opposite(pq.colour));
    if (pp.strength != PreferenceStrength::None && pp.colour != pq.colour) return p_gets(pp.colour);

    const int ip = colour_imbalance(p.history);
    const int iq = colour_imbalance(q.history);
    if (ip != iq) return p_gets(ip < iq ? Colour::White : Colour::Black);
    return p_gets(p.id < q.id ? Colour::White : Colour::Black);
}

double edge_weight_units(const PlayerState& p, const PlayerState& q, const PairingConfig& config,
                         bool allow_violation) {
    const auto [white, black] = assign_colours(p, q, allow_violation);
    double bonus = 0.0;
    for (const PlayerState* s : {&p, &q}) {
        const auto pref = colour_preference(s->history);
        if (pref.strength == PreferenceStrength::None) continue;
        const Colour got = s->id == white ? Colour::White : Colour::Black;
        if (got == pref.colour) bonus += preference_bonus(config, pref.strength);
    }
    const double units = config.base_weight -
                         config.effective_score_penalty() * std::abs(p.score - q.score) + bonus;
    return std::max(0.0, units);
}

Weight edge_weight(const PlayerState& p, const PlayerState& q, const PairingConfig& config,
                   bool allow_violation) {
    return static_cast<Weight>(std::llround(edge_weight_units(p, q, config, allow_violation) *
                                            static_cast<double>(config.quantization_scale)));
}

int select_bye(std::span<const PlayerState> players) {
    const PlayerState* pick = nullptr;
    for (const auto& s : players) {
        if (s.had_bye) continue;
        if (pick == nullptr ||
            std::tie(s.score, s.rating, s.id) < std::tie(pick->score, pick->rating, pick->id)) {
            pick = &s;
        }
    }
    if (pick == nullptr) {
        std::vector<int> ids;
        for (const auto& s : players) ids.push_back(s.id);
        throw InfeasiblePairingError("select_bye: every player has already received a bye",
                                     std::move(ids));
    }
    return pick->id;
}

namespace {

constexpr int kLookaheadAttempts = 16;
constexpr int kColourFlipsPerAttempt = 32;

enum class Perturb { None, Ties, Arbitrary };

// Maximum-cardinality matching of `active` in its given order; boards carry
// colours. Ties perturbs weights by less than one unit in total, Arbitrary
// replaces them with random ones so any legal pairing may come out. Throws
// InfeasiblePairingError when somebody stays unpaired.
std::vector<Board> match_players(const std::vector<PlayerState>& active, const PairingConfig& config,
                                 int round_no, int total_rounds, Perturb perturb, std::mt19937_64& rng) {
    const bool relax = config.allow_last_round_exception && round_no == total_rounds;
    WeightedGraph graph{static_cast<int>(active.size()), {}};
    const Weight tie_span = std::max<Weight>(1, config.quantization_scale / static_cast<Weight>(active.size() + 1));
    for (auto [i, j] : eligible_pairs(active, config, round_no, total_rounds)) {
        Weight w = edge_weight(active[i], active[j], config, relax);
        if (perturb == Perturb::Ties) w += static_cast<Weight>(rng() % static_cast<std::uint64_t>(tie_span));
        if (perturb == Perturb::Arbitrary) w = static_cast<Weight>(rng() % 1000);
        graph.edges.push_back({i, j, w});
    }

    const Matching matching = max_cardinality_max_weight_matching(graph);
    if (matching.cardinality() * 2 != active.size()) {
        std::vector<bool> matched(active.size(), false);
        for (auto [u, v] : matching.pairs) matched[u] = matched[v] = true;
        std::vector<int> unmatched;
        for (std::size_t i = 0; i < active.size(); ++i) {
            if (!matched[i]) unmatched.push_back(active[i].id);
        }
        std::sort(unmatched.begin(), unmatched.end());
        throw InfeasiblePairingError("pair_round: no complete legal pairing for round " + std::to_string(round_no),
                                     std::move(unmatched));
    }

    std::vector<Board> boards;
    for (auto [u, v] : matching.pairs) {
        auto [white, black] = assign_colours(active[u], active[v], relax);
        boards.push_back({white, black});
    }
    return boards;
}

// Whether the round after `boards` still has a complete legal pairing.
bool next_round_feasible(std::span<const PlayerState> players, const std::vector<Board>& boards,
                         const PairingConfig& config, int next_round, int total_rounds) {
    std::vector<PlayerState> after(players.begin(), players.end());
    std::unordered_map<int, std::size_t> index;
    for (std::size_t i = 0; i < after.size(); ++i) index[after[i].id] = i;
    for (const auto& b : boards) record_game(after[index.at(b.white)], after[index.at(b.black)], 0.5);

    WeightedGraph graph{static_cast<int>(after.size()), {}};
    for (auto [i, j] : eligible_pairs(after, config, next_round, total_rounds)) graph.edges.push_back({i, j, 1});
    return max_weight_matching(graph).cardinality() * 2 == after.size();
}

}  // namespace

RoundPairing pair_round(std::span<const PlayerState> players, const PairingConfig& config,
                        int round_no, int total_rounds, std::uint64_t seed) {
    config.validate();
    if (round_no < 1 || round_no > total_rounds) {
        throw ValidationError("pair_round: round " + std::to_string(round_no) + " outside 1.." +
                              std::to_string(total_rounds));
    }

    RoundPairing result;
    std::vector<PlayerState> active;
    if (players.size() % 2 == 1) {
        result.bye = select_bye(players);
        for (const auto& s : players) {
            if (s.id != *result.bye) active.push_back(s);
        }
    } else {
        active.assign(players.begin(), players.end());
    }

    // A seeded shuffle of the node order decides between equal-weight pairings.
    std::mt19937_64 rng(seed);
    std::shuffle(active.begin(), active.end(), rng);
    result.boards = match_players(active, config, round_no, total_rounds, Perturb::None, rng);

    // Before a Balanced even round every +1 player needs a fresh -1 partner.
    // When the plain pairing leaves no such matching, look for another pairing
    // or colour split of this round that does.
    const bool look_ahead = config.mode == PairingMode::Balanced && round_no % 2 == 1 &&
                            round_no < total_rounds && !result.bye;
    if (look_ahead && !next_round_feasible(players, result.boards, config, round_no + 1, total_rounds)) {
        std::unordered_map<int, PreferenceStrength> strength;
        for (const auto& s : active) strength[s.id] = colour_preference(s.history).strength;
        auto may_flip = [&](const Board& b) {
            return strength[b.white] <= PreferenceStrength::Mild && strength[b.black] <= PreferenceStrength::Mild;
        };
        bool found = false;
        for (int attempt = 0; attempt < kLookaheadAttempts && !found; ++attempt) {
            // First keep to the best-weight pairings, then accept any legal one.
            const auto perturb = attempt < kLookaheadAttempts / 2 ? Perturb::Ties : Perturb::Arbitrary;
            auto boards = attempt == 0 ? result.boards
                                       : match_players(active, config, round_no, total_rounds, perturb, rng);
            for (int flip = 0; flip < kColourFlipsPerAttempt && !found; ++flip) {
                auto trial = boards;
                if (flip > 0) {
                    for (auto& b : trial) {
                        if (may_flip(b) && (rng() & 1)) std::swap(b.white, b.black);
                    }
                }
                if (next_round_feasible(players, trial, config, round_no + 1, total_rounds)) {
                    result.boards = std::move(trial);
                    found = true;
                }
            }
        }
    }

    // Present boards by descending top score, then rating, for readability.
    std::unordered_map<int, const PlayerState*> by_id;
    for (const auto& s : players) by_id[s.id] = &s;
    auto key = [&](const Board& b) {
        const auto* w = by_id[b.white];
        const auto* k = by_id[b.black];
        return std::tuple(std::max(w->score, k->score), std::max(w->rating, k->rating),
                          -std::min(b.white, b.black));
    };
    std::sort(result.boards.begin(), result.boards.end(),
              [&](const Board& a, const Board& b) { return key(a) > key(b); });
    return result;
}

int count_floats(std::span<const PlayerState> players, const RoundPairing& pairing) {
    std::unordered_map<int, double> score;
    for (const auto& s : players) score[s.id] = s.score;
    int floats = 0;
    for (const auto& b : pairing.boards) {
        if (score.at(b.white) != score.at(b.black)) ++floats;
    }
    return floats;
}

void record_game(PlayerState& white, PlayerState& black, double white_score) {
    white.history.push_back(HistoryEntry::White);
    black.history.push_back(HistoryEntry::Black);
    white.score += white_score;
    black.score += 1.0 - white_score;
    white.opponents.insert(std::upper_bound(white.opponents.begin(), white.opponents.end(), black.id),
                           black.id);
    black.opponents.insert(std::upper_bound(black.opponents.begin(), black.opponents.end(), white.id),
                           white.id);
}

void record_bye(PlayerState& player) {
    player.history.push_back(HistoryEntry::Bye);
    player.score += 0.5;
    player.had_bye = true;
}

}  // namespace swissfair
