#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tullock/contest.hpp"

// The coordinator's valuation-design problem.
//
// A coordinator with valuation v_K profits from the total share won by a
// coalition of subordinate players. It cannot set their bids, only the
// valuations they are told to play with; redistribution of the coordinator's
// profit is valid when, at equilibrium,
//
//   sum_{i in K} v_i x_i* = v_K sum_{i in K} x_i*.
//
// Optimal reported valuations are proportional to sqrt(c_i) among active
// subordinates, v_i* = beta sqrt(c_i), which reduces the search to the single
// scalar beta: for each beta the induced equilibrium pins alpha, and
// feasibility becomes a scalar root-finding problem
//
//   g(beta) = sum_{k in K} (beta sqrt(c_k) - v_K) [beta - alpha sqrt(c_k)]^+ = 0.
//
// For one opponent and two subordinates the optimum is known in closed form
// (design_three_player); design_general solves the reduced program for any
// shape and serves as the cross-check.

namespace tullock {

enum class Regime {
    opponent_excluded,  // designed valuations push every opponent to a zero bid
    interior,           // at least one opponent stays active
};

const char* to_string(Regime regime);

// Opponents keep fixed (v, c); subordinate valuations are the design
// variables, so only their costs are recorded here.
class CoordinatorInstance {
public:
    CoordinatorInstance(std::vector<Player> opponents,
                        std::vector<double> subordinate_costs,
                        double coordinator_valuation);

    const std::vector<Player>& opponents() const noexcept { return opponents_; }
    const std::vector<double>& subordinate_costs() const noexcept {
        return subordinate_costs_;
    }
    double coordinator_valuation() const noexcept { return coordinator_valuation_; }
    std::size_t num_opponents() const noexcept { return opponents_.size(); }
    std::size_t num_subordinates() const noexcept { return subordinate_costs_.size(); }

    // Full contest with opponents first, then subordinates at the given
    // valuations (one per subordinate, in order).
    ContestInstance induced_contest(std::span<const double> subordinate_valuations) const;

    // Indices of the subordinates inside induced_contest().
    std::vector<std::size_t> coalition_indices() const;

private:
    std::vector<Player> opponents_;
    std::vector<double> subordinate_costs_;
    double coordinator_valuation_;
};

struct DesignResult {
    std::vector<double> valuations;  // reported v_i*, one per subordinate
    double beta;                     // v_i* = beta sqrt(c_i)
    double alpha;                    // induced equilibrium total bid
    double coordinator_utility;      // attained at the induced equilibrium
    Regime regime;
    double feasibility_residual;     // should be ~0 at a valid design
};

struct SweepRow {
    double v2;
    bool feasible;
    double v3 = 0.0;
    double coordinator_utility = 0.0;
    double alpha = 0.0;
};

// sum_{i in K} (v_i - v_K) x_i* at the equilibrium induced by the given
// subordinate valuations.
double feasibility_residual(const CoordinatorInstance& coord,
                            std::span<const double> subordinate_valuations);

// Closed-form optimum for one opponent and two subordinates. With
// w1 = c1/v1: if v_K w1 >= 2 sqrt(c2 c3) the opponent can be excluded
// entirely (utility v_K, sqrt(c)-proportional witness valuations); otherwise
// the interior optimum is
//
//   v_i* = (2 v_K w1 + (sqrt(c2) - sqrt(c3))^2) / (w1 (sqrt(c2) + sqrt(c3))) * sqrt(c_i).
//
// For strongly asymmetric subordinate costs the interior stationary point can
// leave the all-active region; the reported utility is always the value
// attained at the equilibrium the valuations actually induce.
DesignResult design_three_player(const CoordinatorInstance& coord);

// Reduced two-variable program for any instance shape: scan beta, root-find
// g(beta), evaluate the coordinator at every feasible root, return the best.
// Roots where every subordinate is inactive are discarded; throws
// "no-feasible-beta" when nothing remains after expanding the scan range.
DesignResult design_general(const CoordinatorInstance& coord);

// For two subordinates: the v3 > 0 making (v2, v3) feasible, i.e. the zero
// of the residual in v3. Picks the topmost root so the traced branch passes
// through (v_K, v_K); throws "no-feasible-companion" when no bracket is
// found after expansion.
double solve_feasible_companion(const CoordinatorInstance& coord, double v2);

// Feasible-segment sweep: for each grid value of v2, solve for the companion
// v3 and evaluate the coordinator at the induced equilibrium. Infeasible
// grid points are marked, not fatal.
std::vector<SweepRow> sweep(const CoordinatorInstance& coord,
                            std::span<const double> v2_grid);

}  // namespace tullock
