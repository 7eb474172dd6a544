#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "swissfair/pairing.hpp"
#include "swissfair/records.hpp"

namespace swissfair {

/// Game outcome sampler. The draw share is d = min(draw_ceiling, 2p, 2(1-p))
/// and the remaining mass splits so that White's expected score equals p.
struct OutcomeModel {
    double delta = 0.0;
    double draw_ceiling = 0.35;

    void validate() const;
};

struct OutcomeProbabilities {
    double white_win = 0.0;
    double draw = 0.0;
    double black_win = 0.0;
};

OutcomeProbabilities outcome_probabilities(double r_white, double r_black, const OutcomeModel& model);

/// Returns White's score: 1.0, 0.5 or 0.0.
double sample_game(double r_white, double r_black, const OutcomeModel& model, std::mt19937_64& rng);

struct GameResult {
    int white_id = 0;
    int black_id = 0;
    double white_score = 0.0;
};

struct Entrant {
    int id = 0;
    double rating = 0.0;
};

struct TournamentResult {
    std::vector<PlayerRecord> records;  // in field order
    std::vector<RoundPairing> pairings;
    std::vector<std::vector<GameResult>> results;
    std::vector<PlayerState> final_states;
    int float_pairs = 0;
};

TournamentResult simulate_tournament(std::span<const Entrant> field, int rounds,
                                     const PairingConfig& pairing, const OutcomeModel& model,
                                     std::uint64_t seed, const std::string& tournament_id = "0");

enum class FieldKind { Normal, Uniform, Fixed };

struct FieldSpec {
    FieldKind kind = FieldKind::Normal;
    int size = 100;
    double mean = 2343.0;  // pooled 9-round field
    double sd = 210.0;
    double min = 2200.0;
    double max = 2500.0;
    std::vector<double> ratings;  // Fixed

    void validate() const;
};

/// Ids 1..n. Normal and uniform ratings are rounded to whole Elo points and
/// floored at 100.
std::vector<Entrant> generate_field(const FieldSpec& spec, std::mt19937_64& rng);

struct ExperimentSpec {
    FieldSpec field;
    int rounds = 9;
    int replications = 1;
    PairingConfig pairing;
    OutcomeModel model;
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const;
};

struct ExperimentResult {
    std::vector<PlayerRecord> records;
    long float_pairs = 0;
};

/// splitmix64 of (master + golden_gamma * (replication + 1)).
std::uint64_t replication_seed(std::uint64_t master, int replication);

/// Replication r draws its field from an mt19937_64 seeded with
/// replication_seed(seed, r) and runs simulate_tournament with that same seed
/// and tournament id std::to_string(r). Records are concatenated in
/// replication order whatever the thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace swissfair
