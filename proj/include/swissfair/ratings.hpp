#pragma once

#include <array>
#include <span>

namespace swissfair {

enum class Colour { White, Black };

inline constexpr Colour opposite(Colour c) {
    return c == Colour::White ? Colour::Black : Colour::White;
}

/// One game of a player's schedule, seen from that player's side.
struct GameSlot {
    double opponent_rating = 0.0;
    Colour colour = Colour::White;
};

/// White-advantage grid used for expected and surprise points in every record.
inline constexpr std::array<double, 6> kDeltaGrid = {0.0, 10.0, 20.0, 30.0, 40.0, 50.0};

/// Probability that White scores against Black under the Elo logistic curve,
/// with White's rating shifted up by `delta`.
double win_probability(double r_white, double r_black, double delta = 0.0);

/// Expected score of a player rated `rating` over a schedule. White games
/// contribute p(self, opp); black games contribute 1 - p(opp, self).
/// Throws ValidationError on an empty schedule.
double expected_points(double rating, std::span<const GameSlot> schedule, double delta = 0.0);

inline double surprise_points(double points, double expected) { return points - expected; }

/// Rating relative to the tournament mean, in hundred-point units.
inline double elo_centered(double rating, double tournament_mean) {
    return (rating - tournament_mean) / 100.0;
}

}  // namespace swissfair
