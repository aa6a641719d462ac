#pragma once

#include <span>
#include <vector>

#include "tullock/contest.hpp"

// Best-response machinery, used to verify the closed-form equilibrium from
// an independent direction: the payoff v x/(x+S) - c x over x >= 0 is
// maximized at [sqrt(v S / c) - S]^+ for a fixed opponent total S > 0.

namespace tullock {

// Thrown by br_fixed_point when the sweep budget runs out; carries the last
// iterate so callers can report how far the dynamics got.
class ConvergenceError : public ContestError {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_bids)
        : ContestError("no-convergence", what), last_bids_(std::move(last_bids)) {}

    const std::vector<double>& last_bids() const noexcept { return last_bids_; }

private:
    std::vector<double> last_bids_;
};

struct NashReport {
    double max_deviation_gain = 0.0;
    std::vector<double> per_player_gain;  // best-response payoff minus current
    double tolerance = 0.0;
    bool is_nash = false;  // max_deviation_gain <= tolerance
};

// Unique maximizer of v x/(x+S) - c x over x >= 0. At S = 0 the supremum is
// not attained; a minimal positive bid of 1e-12 * (v/c) is returned so that
// iteration never stalls on a degenerate start.
double best_response(double valuation, double cost, double opponent_total);

// Round-robin best-response iteration from strictly positive initial bids.
// Starts with undamped updates and halves the step whenever the residual
// stalls (undamped updates can cycle between strongly asymmetric players);
// damping does not move the fixed points. Returns once every player is
// within `tol` of its best response; throws ConvergenceError after
// `max_sweeps` sweeps otherwise.
std::vector<double> br_fixed_point(const ContestInstance& instance,
                                   std::span<const double> initial_bids,
                                   double tol = 1e-10, int max_sweeps = 100000);

// For each player, the payoff gained by deviating to the best response
// against the others' bids.
NashReport verify_nash(const ContestInstance& instance,
                       std::span<const double> bids, double tol = 1e-8);

}  // namespace tullock
