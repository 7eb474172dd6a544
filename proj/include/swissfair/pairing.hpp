#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swissfair/matching.hpp"
#include "swissfair/ratings.hpp"

namespace swissfair {

enum class HistoryEntry { White, Black, Bye };
using ColourHistory = std::vector<HistoryEntry>;

enum class PreferenceStrength { None = 0, Mild = 1, Strong = 2, Absolute = 3 };

struct ColourPreference {
    PreferenceStrength strength = PreferenceStrength::None;
    Colour colour = Colour::White;  // meaningless when strength is None

    friend bool operator==(const ColourPreference& a, const ColourPreference& b) {
        return a.strength == b.strength &&
               (a.strength == PreferenceStrength::None || a.colour == b.colour);
    }
};

/// "AbsoluteWhite", "MildBlack", ..., "None".
std::string to_string(const ColourPreference& pref);

struct PlayerState {
    int id = 0;
    double rating = 0.0;
    double score = 0.0;
    std::vector<int> opponents;  // sorted
    ColourHistory history;
    bool had_bye = false;

    bool has_met(int other) const;
};

enum class PairingMode { Standard, Balanced };

struct PairingConfig {
    PairingMode mode = PairingMode::Standard;
    /// Balanced mode only: the score-difference penalty is scaled by beta / 0.5.
    double beta = 0.5;
    double base_weight = 1000.0;
    double score_diff_penalty_per_point = 100.0;
    double bonus_absolute = 30.0;
    double bonus_strong = 20.0;
    double bonus_mild = 10.0;
    std::int64_t quantization_scale = 1'000'000;
    bool allow_last_round_exception = false;

    /// Throws ValidationError on out-of-range parameters.
    void validate() const;
    double effective_score_penalty() const;
};

struct Board {
    int white = 0;
    int black = 0;

    friend bool operator==(const Board&, const Board&) = default;
};

struct RoundPairing {
    std::vector<Board> boards;
    std::optional<int> bye;
};

/// (# White) - (# Black); byes are ignored.
int colour_imbalance(const ColourHistory& history);

/// Absolute when the opposite colour would break a hard rule next round
/// (imbalance already at +-2, or the last two played games share a colour);
/// Strong when |imbalance| = 1; Mild (alternate from the last game) when
/// balanced; None before the first game.
ColourPreference colour_preference(const ColourHistory& history);

/// Index pairs (i < j) into `players` that may legally meet in this round.
std::vector<std::pair<int, int>> eligible_pairs(std::span<const PlayerState> players,
                                                const PairingConfig& config, int round_no,
                                                int total_rounds);

/// Returns (white_id, black_id). Throws ValidationError when both players hold
/// the same Absolute preference unless `allow_violation` is set.
std::pair<int, int> assign_colours(const PlayerState& p, const PlayerState& q,
                                   bool allow_violation = false);

/// Real-valued weight of pairing p with q before quantization, clamped at 0.
double edge_weight_units(const PlayerState& p, const PlayerState& q, const PairingConfig& config,
                         bool allow_violation = false);

Weight edge_weight(const PlayerState& p, const PlayerState& q, const PairingConfig& config,
                   bool allow_violation = false);

/// Lowest (score, rating, id) among players without a previous bye.
/// Throws InfeasiblePairingError if everyone already had one.
int select_bye(std::span<const PlayerState> players);

/// Pairs one round. Throws InfeasiblePairingError listing the unmatched
/// players when no complete legal pairing exists.
RoundPairing pair_round(std::span<const PlayerState> players, const PairingConfig& config,
                        int round_no, int total_rounds, std::uint64_t seed);

/// Boards whose two players had different scores when paired.
int count_floats(std::span<const PlayerState> players, const RoundPairing& pairing);

void record_game(PlayerState& white, PlayerState& black, double white_score);
void record_bye(PlayerState& player);

}  // namespace swissfair
