#include "tullock/contest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tullock {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void check_bids(const ContestInstance& instance, std::span<const double> bids) {
    if (bids.size() != instance.size()) {
        throw ContestError("invalid-bids", "bid vector length " +
                                               std::to_string(bids.size()) +
                                               " does not match player count " +
                                               std::to_string(instance.size()));
    }
    double total = 0.0;
    for (double b : bids) {
        if (!std::isfinite(b) || b < 0.0) {
            throw ContestError("invalid-bids", "bids must be finite and nonnegative");
        }
        total += b;
    }
    if (total == 0.0) {
        throw ContestError("undefined-share",
                           "the all-zero bid profile has no defined share");
    }
}

}  // namespace

ContestInstance::ContestInstance(std::vector<Player> players)
    : players_(std::move(players)) {
    if (players_.size() < 2) {
        throw ContestError("invalid-instance", "a contest needs at least two players");
    }
    for (std::size_t i = 0; i < players_.size(); ++i) {
        if (!positive_finite(players_[i].valuation)) {
            throw ContestError("invalid-player", "player " + std::to_string(i + 1) +
                                                     ": valuation must be a positive "
                                                     "finite number");
        }
        if (!positive_finite(players_[i].cost)) {
            throw ContestError("invalid-player", "player " + std::to_string(i + 1) +
                                                     ": cost must be a positive "
                                                     "finite number");
        }
    }
}

double utility(const ContestInstance& instance, std::span<const double> bids,
               std::size_t player) {
    if (player >= instance.size()) {
        throw ContestError("index-out-of-range",
                           "player index " + std::to_string(player) + " out of range");
    }
    check_bids(instance, bids);
    const double total = std::accumulate(bids.begin(), bids.end(), 0.0);
    const Player& p = instance.player(player);
    return p.valuation * bids[player] / total - p.cost * bids[player];
}

AlphaSolution solve_alpha(const ContestInstance& instance) {
    const std::size_t n = instance.size();
    const auto& players = instance.players();

    AlphaSolution out;
    out.sorted_order.resize(n);
    std::iota(out.sorted_order.begin(), out.sorted_order.end(), std::size_t{0});
    std::stable_sort(out.sorted_order.begin(), out.sorted_order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return players[a].ratio() < players[b].ratio();
                     });

    // Relative costs in sorted order are nonincreasing; suffix[p] accumulates
    // them from the back so each candidate alpha is one division away.
    std::vector<double> w(n);
    for (std::size_t p = 0; p < n; ++p) {
        w[p] = players[out.sorted_order[p]].relative_cost();
    }
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t p = n; p-- > 0;) {
        suffix[p] = suffix[p + 1] + w[p];
    }

    double alpha = -1.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        const double m = static_cast<double>(n - (p + 1));
        const bool lower_ok = m * w[p] <= suffix[p];
        const bool upper_ok = p == 0 || suffix[p] <= m * w[p - 1];
        if (lower_ok && upper_ok) {
            alpha = m / suffix[p];
            break;
        }
    }
    if (alpha < 0.0) {
        // The bracket scan always succeeds for a valid instance.
        throw std::logic_error("alpha bracket scan found no cutoff");
    }

    std::size_t inactive = 0;
    while (inactive < n && w[inactive] * alpha >= 1.0) {
        ++inactive;
    }
    out.alpha = alpha;
    out.cutoff_index = inactive + 1;
    return out;
}

double solve_alpha_bisection(const ContestInstance& instance, double tol,
                             int max_iter) {
    const auto& players = instance.players();
    const auto f = [&](double alpha) {
        double s = -1.0;
        for (const Player& p : players) {
            s += std::max(0.0, 1.0 - p.relative_cost() * alpha);
        }
        return s;
    };

    double lo = 0.0;  // f(0) = n - 1 > 0
    double hi = 0.0;  // f(max ratio) = -1 < 0
    for (const Player& p : players) {
        hi = std::max(hi, p.ratio());
    }

    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Equilibrium equilibrium(const ContestInstance& instance) {
    const std::size_t n = instance.size();
    Equilibrium eq;
    eq.alpha_solution = solve_alpha(instance);
    eq.bids.assign(n, 0.0);
    eq.payoffs.assign(n, 0.0);

    const double alpha = eq.alpha_solution.alpha;
    for (std::size_t p = eq.alpha_solution.cutoff_index - 1; p < n; ++p) {
        const std::size_t i = eq.alpha_solution.sorted_order[p];
        const Player& pl = instance.player(i);
        eq.bids[i] = alpha * (1.0 - pl.relative_cost() * alpha);
        eq.payoffs[i] = std::max(0.0, pl.valuation - pl.cost * alpha);
    }
    return eq;
}

Equilibrium three_player_equilibrium(const ContestInstance& instance) {
    if (instance.size() != 3) {
        throw ContestError("wrong-shape", "three_player_equilibrium needs exactly "
                                          "three players");
    }
    const auto& players = instance.players();

    Equilibrium eq;
    eq.alpha_solution.sorted_order = {0, 1, 2};
    std::stable_sort(eq.alpha_solution.sorted_order.begin(),
                     eq.alpha_solution.sorted_order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return players[a].ratio() < players[b].ratio();
                     });
    const std::size_t s1 = eq.alpha_solution.sorted_order[0];
    const std::size_t s2 = eq.alpha_solution.sorted_order[1];
    const std::size_t s3 = eq.alpha_solution.sorted_order[2];
    const double w1 = players[s1].relative_cost();
    const double w2 = players[s2].relative_cost();
    const double w3 = players[s3].relative_cost();

    eq.bids.assign(3, 0.0);
    eq.payoffs.assign(3, 0.0);

    if (w2 + w3 <= w1) {
        // The highest relative cost abstains; the other two play the
        // two-player contest.
        const double d = w2 + w3;
        eq.alpha_solution.alpha = 1.0 / d;
        eq.alpha_solution.cutoff_index = 2;
        eq.bids[s2] = w3 / (d * d);
        eq.bids[s3] = w2 / (d * d);
        eq.payoffs[s2] = players[s2].valuation * w3 / d;
        eq.payoffs[s3] = players[s3].valuation * w2 / d;
    } else {
        const double s = w1 + w2 + w3;
        eq.alpha_solution.alpha = 2.0 / s;
        eq.alpha_solution.cutoff_index = 1;
        const std::size_t order[3] = {s1, s2, s3};
        for (std::size_t i : order) {
            const double wi = players[i].relative_cost();
            eq.bids[i] = std::max(0.0, 2.0 * s - 4.0 * wi) / (s * s);
            eq.payoffs[i] = std::max(0.0, players[i].valuation -
                                              2.0 * players[i].cost / s);
        }
    }
    return eq;
}

double coordinator_utility(const ContestInstance& instance,
                           std::span<const std::size_t> coalition,
                           double coordinator_valuation,
                           std::span<const double> bids) {
    if (!positive_finite(coordinator_valuation)) {
        throw ContestError("invalid-coalition",
                           "coordinator valuation must be a positive finite number");
    }
    if (coalition.empty() || coalition.size() >= instance.size()) {
        throw ContestError("invalid-coalition",
                           "coalition must be a nonempty strict subset of players");
    }
    std::vector<bool> seen(instance.size(), false);
    for (std::size_t idx : coalition) {
        if (idx >= instance.size()) {
            throw ContestError("invalid-coalition", "coalition index " +
                                                        std::to_string(idx) +
                                                        " out of range");
        }
        if (seen[idx]) {
            throw ContestError("invalid-coalition", "duplicate coalition index " +
                                                        std::to_string(idx));
        }
        seen[idx] = true;
    }
    check_bids(instance, bids);

    const double total = std::accumulate(bids.begin(), bids.end(), 0.0);
    double coalition_total = 0.0;
    for (std::size_t idx : coalition) {
        coalition_total += bids[idx];
    }
    return coordinator_valuation * coalition_total / total;
}

}  // namespace tullock
