#include "swissfair/ratings.hpp"

#include <cmath>

#include "swissfair/error.hpp"

namespace swissfair {

double win_probability(double r_white, double r_black, double delta) {
    return 1.0 / (1.0 + std::pow(10.0, (r_black - r_white - delta) / 400.0));
}

double expected_points(double rating, std::span<const GameSlot> schedule, double delta) {
    if (schedule.empty()) {
        throw ValidationError("expected_points: schedule has no games");
    }
    double total = 0.0;
    for (const auto& slot : schedule) {
        if (slot.colour == Colour::White) {
            total += win_probability(rating, slot.opponent_rating, delta);
        } else {
            total += 1.0 - win_probability(slot.opponent_rating, rating, delta);
        }
    }
    return total;
}

}  // namespace swissfair
