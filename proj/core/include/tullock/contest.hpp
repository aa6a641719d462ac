#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Closed-form Nash equilibria of n-player Tullock contests.
//
// Each player i submits a bid x_i >= 0 and receives the payoff
//
//   U_i(x) = v_i * x_i / sum_j x_j - c_i * x_i,
//
// where v_i > 0 is the player's valuation of the prize and c_i > 0 its
// per-unit bid cost. The unique total equilibrium bid alpha solves
//
//   sum_i [1 - (c_i/v_i) * alpha]^+ = 1,
//
// from which individual bids and payoffs follow in closed form.

namespace tullock {

// Error with a stable machine-readable code ("undefined-share",
// "invalid-coalition", ...) next to the human-readable message.
class ContestError : public std::runtime_error {
public:
    ContestError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct Player {
    double valuation;  // v, worth of the prize to this player
    double cost;       // c, spend per unit of bid

    // w = c/v; high relative cost pushes a player out of the contest.
    double relative_cost() const { return cost / valuation; }
    // v/c; a player is active at equilibrium iff alpha < v/c.
    double ratio() const { return valuation / cost; }
};

// Immutable, validated contest. Player identity is the index in the
// original order passed to the constructor.
class ContestInstance {
public:
    // Requires at least two players, all with positive finite v and c.
    explicit ContestInstance(std::vector<Player> players);

    std::size_t size() const noexcept { return players_.size(); }
    const Player& player(std::size_t i) const { return players_.at(i); }
    const std::vector<Player>& players() const noexcept { return players_; }

private:
    std::vector<Player> players_;
};

struct AlphaSolution {
    // Total equilibrium bid, the unique root of sum_i [1 - w_i alpha]^+ = 1.
    double alpha;
    // 1-based index into the ratio-sorted order: players at sorted positions
    // before it satisfy w * alpha >= 1 and bid zero (exact ties count as
    // inactive); positions at or after it are active.
    std::size_t cutoff_index;
    // sorted position -> original player index, ascending by v/c
    // (ties keep the original order).
    std::vector<std::size_t> sorted_order;
};

struct Equilibrium {
    AlphaSolution alpha_solution;
    // x*, original player order.
    std::vector<double> bids;
    // Equilibrium payoff entries [v_i - c_i alpha]^+, original player order.
    // This equals v_i * x_i*/sum x* — the value of the share each player
    // wins, gross of the bid cost. The net figure, utility() at x*, works
    // out to payoffs[i]^2 / v_i for active players.
    std::vector<double> payoffs;

    bool active(std::size_t i) const { return bids.at(i) > 0.0; }
};

// Payoff of `player` at an arbitrary bid profile. The all-zero profile has
// no defined share and is rejected ("undefined-share").
double utility(const ContestInstance& instance, std::span<const double> bids,
               std::size_t player);

// Sort-and-scan solution of the alpha equation: sort players by v/c
// ascending, find the minimal cutoff whose bracketing inequalities hold, and
// read alpha off the suffix sum of relative costs.
AlphaSolution solve_alpha(const ContestInstance& instance);

// Independent cross-check: bisection on f(alpha) = sum [1 - w alpha]^+ - 1
// over (0, max_i v_i/c_i]. Agrees with solve_alpha to ~1e-12.
double solve_alpha_bisection(const ContestInstance& instance,
                             double tol = 1e-12, int max_iter = 200);

// Equilibrium bids x_i* = alpha [1 - w_i alpha]^+ and payoffs
// U_i* = [v_i - c_i alpha]^+. Inactive players bid exactly zero.
Equilibrium equilibrium(const ContestInstance& instance);

// Closed forms for n = 3 (abstention case and all-active case); a redundant
// verification path that must match equilibrium() to 1e-10.
Equilibrium three_player_equilibrium(const ContestInstance& instance);

// v_K * (coalition bid) / (total bid). `coalition` must be a nonempty strict
// subset of player indices without duplicates.
double coordinator_utility(const ContestInstance& instance,
                           std::span<const std::size_t> coalition,
                           double coordinator_valuation,
                           std::span<const double> bids);

}  // namespace tullock
