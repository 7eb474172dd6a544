#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swissfair/pairing.hpp"
#include "swissfair/simulate.hpp"

namespace swissfair {

// Live tournament state consumed and produced by `swissfair pair`:
//
// {
//   "tournament": "club-open",            optional
//   "total_rounds": 9,
//   "pairing": { ...PairingConfig keys },  optional
//   "players": [ {"id": 1, "rating": 2450}, ... ],
//   "rounds": [
//     {"boards": [{"white": 1, "black": 7, "result": "1-0"}], "bye": 12}
//   ]
// }
//
// "result" is "1-0", "0-1", "1/2-1/2" or null while the round is being played.
// "bye" is optional. Unknown keys are rejected.

struct StateBoard {
    int white = 0;
    int black = 0;
    std::optional<double> white_score;
};

struct StateRound {
    std::vector<StateBoard> boards;
    std::optional<int> bye;
};

struct TournamentState {
    std::string tournament;
    int total_rounds = 0;
    PairingConfig pairing;
    std::vector<Entrant> players;
    std::vector<StateRound> rounds;
};

/// Throws ValidationError on schema violations.
TournamentState parse_state(const std::string& json_text);
TournamentState load_state(const std::string& path);
std::string state_to_json(const TournamentState& state);

/// Replays the recorded rounds into per-player states (in `players` order).
/// Throws DataError for pending results, unknown or repeated players within a
/// round, and rematches.
std::vector<PlayerState> replay(const TournamentState& state);

/// Appends a pairing as a new round with pending results.
void append_round(TournamentState& state, const RoundPairing& pairing);

/// PairingConfig from a JSON object; keys: mode ("standard"|"balanced"), beta,
/// base_weight, score_diff_penalty_per_point, bonus_absolute, bonus_strong,
/// bonus_mild, quantization_scale, allow_last_round_exception.
PairingConfig parse_pairing_config(const std::string& json_text);

// Experiment configuration for `swissfair simulate`:
//
// {
//   "rounds": 9,
//   "replications": 500,
//   "threads": 1,
//   "field": {"kind": "normal", "size": 100, "mean": 2343, "sd": 210}
//          | {"kind": "uniform", "size": 100, "min": 2200, "max": 2500}
//          | {"kind": "fixed", "ratings": [2500, 2480, ...]}
//          | {"kind": "file", "path": "ratings.txt"}   one rating per line
//   "model": {"delta": 30, "draw_ceiling": 0.35},
//   "pairing": { ...PairingConfig keys }
// }
//
// The master seed comes from the command line, never from the file.
ExperimentSpec parse_experiment(const std::string& json_text, const std::string& base_dir = ".");

}  // namespace swissfair
