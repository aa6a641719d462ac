#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "tullock/contest.hpp"
#include "tullock/design.hpp"

namespace testsupport {

inline std::vector<tullock::Player> random_players(std::mt19937_64& rng, std::size_t n,
                                                   double lo = 0.1, double hi = 10.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<tullock::Player> players;
    players.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        players.push_back(tullock::Player{dist(rng), dist(rng)});
    }
    return players;
}

inline tullock::ContestInstance random_instance(std::mt19937_64& rng,
                                                std::size_t min_n = 2,
                                                std::size_t max_n = 8) {
    std::uniform_int_distribution<std::size_t> nd(min_n, max_n);
    return tullock::ContestInstance(random_players(rng, nd(rng)));
}

inline tullock::CoordinatorInstance random_coordinator(std::mt19937_64& rng,
                                                       std::size_t num_opponents,
                                                       std::size_t num_subordinates) {
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    std::vector<double> costs(num_subordinates);
    for (double& c : costs) {
        c = dist(rng);
    }
    return tullock::CoordinatorInstance(random_players(rng, num_opponents),
                                        std::move(costs), dist(rng));
}

// The one-opponent/two-subordinate closed form is self-consistent when its
// excluded branch applies, or when the interior stationary point stays in
// the all-active region: min(sqrt c) * |sqrt c2 - sqrt c3| <= v_K * c1/v1.
// Strongly asymmetric subordinate costs can violate the second condition,
// in which case the closed-form value is not attained by any equilibrium.
inline bool closed_form_consistent(const tullock::CoordinatorInstance& coord,
                                   double margin = 1.0) {
    const double v_k = coord.coordinator_valuation();
    const double w1 = coord.opponents()[0].relative_cost();
    const double a = std::sqrt(coord.subordinate_costs()[0]);
    const double b = std::sqrt(coord.subordinate_costs()[1]);
    if (v_k * w1 >= 2.0 * a * b) {
        return true;
    }
    return std::min(a, b) * std::abs(a - b) <= margin * v_k * w1;
}

// Random one-opponent/two-subordinate instance in the requested regime of
// the closed form, kept away from the regime boundary and (for the interior
// regime) inside the closed form's consistency region.
inline tullock::CoordinatorInstance random_three_player_design(
    std::mt19937_64& rng, bool excluded_regime) {
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    for (;;) {
        const double v_k = dist(rng);
        const double v1 = dist(rng);
        const double c2 = dist(rng);
        const double c3 = dist(rng);
        const double threshold = 2.0 * std::sqrt(c2 * c3);
        double c1;
        if (excluded_regime) {
            std::uniform_real_distribution<double> ratio(1.05, 3.0);
            c1 = ratio(rng) * threshold * v1 / v_k;
        } else {
            std::uniform_real_distribution<double> ratio(0.1, 0.95);
            c1 = ratio(rng) * threshold * v1 / v_k;
        }
        if (!(c1 > 1e-4 && c1 < 1e4)) {
            continue;
        }
        tullock::CoordinatorInstance coord({tullock::Player{v1, c1}}, {c2, c3}, v_k);
        if (excluded_regime || closed_form_consistent(coord, 0.95)) {
            return coord;
        }
    }
}

// Penalty-method multi-start search over the raw subordinate valuations.
// Deliberately ignorant of the sqrt(c) structure and of the reduced scalar
// program; used as an independent check on the design solvers.
struct SearchResult {
    std::vector<double> valuations;
    double utility = 0.0;
    double residual = 0.0;
};

inline double penalized_objective(const tullock::CoordinatorInstance& coord,
                                  const std::vector<double>& valuations) {
    const tullock::ContestInstance inst = coord.induced_contest(valuations);
    const tullock::Equilibrium eq = tullock::equilibrium(inst);
    const double u = tullock::coordinator_utility(
        inst, coord.coalition_indices(), coord.coordinator_valuation(), eq.bids);
    double residual = 0.0;
    for (std::size_t k = 0; k < valuations.size(); ++k) {
        residual += (valuations[k] - coord.coordinator_valuation()) *
                    eq.bids[coord.num_opponents() + k];
    }
    return u - 1e6 * std::abs(residual);
}

inline SearchResult design_search_oracle(const tullock::CoordinatorInstance& coord,
                                         int starts = 100, std::uint64_t seed = 1234) {
    std::mt19937_64 rng(seed);
    const std::size_t k = coord.num_subordinates();
    const double v_k = coord.coordinator_valuation();
    std::uniform_real_distribution<double> start_dist(1e-3 * v_k, 5.0 * v_k);

    SearchResult best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        std::vector<double> vals(k);
        for (double& v : vals) {
            v = start_dist(rng);
        }
        double score = penalized_objective(coord, vals);
        double step = 0.5 * v_k;
        while (step >= 1e-7) {
            bool improved = false;
            for (std::size_t dim = 0; dim < k; ++dim) {
                for (double dir : {1.0, -1.0}) {
                    for (;;) {
                        const double candidate = vals[dim] + dir * step;
                        if (candidate <= 0.0) {
                            break;
                        }
                        const double old = vals[dim];
                        vals[dim] = candidate;
                        const double cand_score = penalized_objective(coord, vals);
                        if (cand_score > score) {
                            score = cand_score;
                            improved = true;
                        } else {
                            vals[dim] = old;
                            break;
                        }
                    }
                }
            }
            if (!improved) {
                step *= 0.5;
            }
        }
        if (score > best_score) {
            best_score = score;
            best.valuations = vals;
        }
    }

    const tullock::ContestInstance inst = coord.induced_contest(best.valuations);
    const tullock::Equilibrium eq = tullock::equilibrium(inst);
    best.utility = tullock::coordinator_utility(
        inst, coord.coalition_indices(), coord.coordinator_valuation(), eq.bids);
    best.residual = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        best.residual += (best.valuations[i] - v_k) * eq.bids[coord.num_opponents() + i];
    }
    return best;
}

}  // namespace testsupport
