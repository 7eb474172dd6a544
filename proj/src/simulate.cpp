#include "swissfair/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "swissfair/error.hpp"

namespace swissfair {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent streams inside one tournament: outcomes and per-round pairing.
constexpr std::uint64_t kOutcomeStream = 0x6f7574636f6d6573ULL;
constexpr std::uint64_t kPairingStream = 0x70616972696e6773ULL;

}  // namespace

void OutcomeModel::validate() const {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ValidationError("model: delta must be >= 0");
    if (!(draw_ceiling >= 0.0 && draw_ceiling <= 1.0)) {
        throw ValidationError("model: draw_ceiling must lie in [0, 1]");
    }
}

OutcomeProbabilities outcome_probabilities(double r_white, double r_black, const OutcomeModel& model) {
    const double p = win_probability(r_white, r_black, model.delta);
    const double d = std::min({model.draw_ceiling, 2.0 * p, 2.0 * (1.0 - p)});
    return {p - d / 2.0, d, 1.0 - p - d / 2.0};
}

double sample_game(double r_white, double r_black, const OutcomeModel& model, std::mt19937_64& rng) {
    const auto probs = outcome_probabilities(r_white, r_black, model);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (u < probs.white_win) return 1.0;
    if (u < probs.white_win + probs.draw) return 0.5;
    return 0.0;
}

TournamentResult simulate_tournament(std::span<const Entrant> field, int rounds,
                                     const PairingConfig& pairing, const OutcomeModel& model,
                                     std::uint64_t seed, const std::string& tournament_id) {
    if (rounds < 1) throw ValidationError("simulate: rounds must be >= 1");
    if (field.size() < 2) throw ValidationError("simulate: field needs at least 2 players");
    model.validate();
    pairing.validate();

    TournamentResult out;
    std::vector<PlayerState> states;
    std::unordered_map<int, std::size_t> index;
    for (const auto& e : field) {
        if (!index.emplace(e.id, states.size()).second) {
            throw ValidationError("simulate: duplicate player id " + std::to_string(e.id));
        }
        if (!(e.rating > 0.0) || !std::isfinite(e.rating)) {
            throw ValidationError("simulate: rating must be finite and positive");
        }
        PlayerState s;
        s.id = e.id;
        s.rating = e.rating;
        states.push_back(std::move(s));
    }
    std::vector<std::vector<GameSlot>> schedules(states.size());

    std::mt19937_64 rng(splitmix64(seed ^ kOutcomeStream));
    for (int round = 1; round <= rounds; ++round) {
        const auto round_seed = splitmix64(seed ^ kPairingStream ^ static_cast<std::uint64_t>(round));
        RoundPairing rp = pair_round(states, pairing, round, rounds, round_seed);
        out.float_pairs += count_floats(states, rp);

        std::vector<GameResult> results;
        for (const auto& b : rp.boards) {
            auto& w = states[index.at(b.white)];
            auto& k = states[index.at(b.black)];
            const double score = sample_game(w.rating, k.rating, model, rng);
            schedules[index.at(b.white)].push_back({k.rating, Colour::White});
            schedules[index.at(b.black)].push_back({w.rating, Colour::Black});
            record_game(w, k, score);
            results.push_back({b.white, b.black, score});
        }
        if (rp.bye) record_bye(states[index.at(*rp.bye)]);
        out.pairings.push_back(std::move(rp));
        out.results.push_back(std::move(results));
    }

    const double mean =
        std::accumulate(field.begin(), field.end(), 0.0,
                        [](double acc, const Entrant& e) { return acc + e.rating; }) /
        static_cast<double>(field.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        out.records.push_back(make_record(tournament_id, states[i].id, states[i].rating, mean,
                                          states[i].score, schedules[i]));
    }
    out.final_states = std::move(states);
    return out;
}

void FieldSpec::validate() const {
    switch (kind) {
        case FieldKind::Normal:
            if (size < 2) throw ValidationError("field: size must be >= 2");
            if (!(sd >= 0.0)) throw ValidationError("field: sd must be >= 0");
            break;
        case FieldKind::Uniform:
            if (size < 2) throw ValidationError("field: size must be >= 2");
            if (!(min > 0.0 && max >= min)) throw ValidationError("field: need 0 < min <= max");
            break;
        case FieldKind::Fixed:
            if (ratings.size() < 2) throw ValidationError("field: need at least 2 ratings");
            for (double r : ratings) {
                if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("field: ratings must be positive");
            }
            break;
    }
}

std::vector<Entrant> generate_field(const FieldSpec& spec, std::mt19937_64& rng) {
    spec.validate();
    std::vector<Entrant> field;
    if (spec.kind == FieldKind::Fixed) {
        for (std::size_t i = 0; i < spec.ratings.size(); ++i) {
            field.push_back({static_cast<int>(i) + 1, spec.ratings[i]});
        }
        return field;
    }
    std::normal_distribution<double> normal(spec.mean, spec.sd);
    std::uniform_real_distribution<double> uniform(spec.min, spec.max);
    for (int i = 0; i < spec.size; ++i) {
        const double raw = spec.kind == FieldKind::Normal ? normal(rng) : uniform(rng);
        field.push_back({i + 1, std::max(100.0, std::round(raw))});
    }
    return field;
}

void ExperimentSpec::validate() const {
    field.validate();
    pairing.validate();
    model.validate();
    if (rounds < 1) throw ValidationError("experiment: rounds must be >= 1");
    if (replications < 1) throw ValidationError("experiment: replications must be >= 1");
    if (threads < 1) throw ValidationError("experiment: threads must be >= 1");
}

std::uint64_t replication_seed(std::uint64_t master, int replication) {
    return splitmix64(master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(replication) + 1));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<TournamentResult> per_rep(spec.replications);

    auto run_one = [&](int r) {
        const auto s = replication_seed(spec.seed, r);
        std::mt19937_64 field_rng(s);
        const auto field = generate_field(spec.field, field_rng);
        per_rep[r] = simulate_tournament(field, spec.rounds, spec.pairing, spec.model, s, std::to_string(r));
        per_rep[r].pairings.clear();
        per_rep[r].results.clear();
        per_rep[r].final_states.clear();
    };

    const int workers = std::min(spec.threads, spec.replications);
    if (workers <= 1) {
        for (int r = 0; r < spec.replications; ++r) run_one(r);
    } else {
        std::mutex mu;
        int next = 0;
        std::exception_ptr failure;
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    int r = 0;
                    {
                        std::lock_guard lock(mu);
                        if (next >= spec.replications || failure) return;
                        r = next++;
                    }
                    try {
                        run_one(r);
                    } catch (...) {
                        std::lock_guard lock(mu);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    ExperimentResult out;
    for (auto& t : per_rep) {
        out.float_pairs += t.float_pairs;
        out.records.insert(out.records.end(), std::make_move_iterator(t.records.begin()),
                           std::make_move_iterator(t.records.end()));
    }
    return out;
}

}  // namespace swissfair
