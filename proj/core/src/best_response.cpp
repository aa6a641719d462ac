#include "tullock/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tullock {

double best_response(double valuation, double cost, double opponent_total) {
    if (!(std::isfinite(valuation) && valuation > 0.0) ||
        !(std::isfinite(cost) && cost > 0.0)) {
        throw std::invalid_argument("best_response: valuation and cost must be positive");
    }
    if (!(std::isfinite(opponent_total) && opponent_total >= 0.0)) {
        throw std::invalid_argument("best_response: opponent total must be nonnegative");
    }
    if (opponent_total == 0.0) {
        return 1e-12 * (valuation / cost);
    }
    const double stationary =
        std::sqrt(valuation * opponent_total / cost) - opponent_total;
    return stationary > 0.0 ? stationary : 0.0;
}

namespace {

double others_total(std::span<const double> bids, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < bids.size(); ++j) {
        if (j != i) s += bids[j];
    }
    return s;
}

}  // namespace

std::vector<double> br_fixed_point(const ContestInstance& instance,
                                   std::span<const double> initial_bids,
                                   double tol, int max_sweeps) {
    const std::size_t n = instance.size();
    if (initial_bids.size() != n) {
        throw ContestError("invalid-bids", "initial bid vector length mismatch");
    }
    for (double b : initial_bids) {
        if (!std::isfinite(b) || b <= 0.0) {
            throw ContestError("invalid-bids",
                               "initial bids must be strictly positive");
        }
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("br_fixed_point: tol must be positive");
    }

    std::vector<double> bids(initial_bids.begin(), initial_bids.end());

    // Undamped updates can limit-cycle when two active players have very
    // different v/c ratios (the best-response derivative product exceeds 1
    // in magnitude). Damping leaves the fixed-point set untouched, so the
    // step shrinks only when the residual stops making progress.
    double step = 1.0;
    constexpr double kMinStep = 1.0 / 4096.0;
    constexpr int kStallWindow = 40;
    double window_start_residual = std::numeric_limits<double>::infinity();
    int sweeps_in_window = 0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Player& p = instance.player(i);
            const double br = best_response(p.valuation, p.cost, others_total(bids, i));
            residual = std::max(residual, std::abs(br - bids[i]));
            bids[i] = (1.0 - step) * bids[i] + step * br;
        }
        if (residual <= tol) {
            // Updates ran against moving totals; confirm the fixed-point
            // property on the frozen vector before accepting it.
            bool fixed_point = true;
            for (std::size_t i = 0; i < n && fixed_point; ++i) {
                const Player& p = instance.player(i);
                const double br =
                    best_response(p.valuation, p.cost, others_total(bids, i));
                fixed_point = std::abs(br - bids[i]) <= tol;
            }
            if (fixed_point) {
                return bids;
            }
        }

        if (++sweeps_in_window >= kStallWindow) {
            if (residual > 0.9 * window_start_residual && step > kMinStep) {
                step *= 0.5;
            }
            window_start_residual = residual;
            sweeps_in_window = 0;
        }
    }
    throw ConvergenceError("best-response iteration did not converge within " +
                               std::to_string(max_sweeps) + " sweeps",
                           std::move(bids));
}

NashReport verify_nash(const ContestInstance& instance,
                       std::span<const double> bids, double tol) {
    if (!(std::isfinite(tol) && tol >= 0.0)) {
        throw std::invalid_argument("verify_nash: tol must be nonnegative");
    }
    const std::size_t n = instance.size();

    NashReport report;
    report.tolerance = tol;
    report.per_player_gain.resize(n);

    std::vector<double> deviated(bids.begin(), bids.end());
    for (std::size_t i = 0; i < n; ++i) {
        const Player& p = instance.player(i);
        const double current = utility(instance, bids, i);
        const double br = best_response(p.valuation, p.cost, others_total(bids, i));
        const double keep = deviated[i];
        deviated[i] = br;
        report.per_player_gain[i] = utility(instance, deviated, i) - current;
        deviated[i] = keep;
    }

    report.max_deviation_gain = report.per_player_gain.empty()
                                    ? 0.0
                                    : *std::max_element(report.per_player_gain.begin(),
                                                        report.per_player_gain.end());
    report.is_nash = report.max_deviation_gain <= tol;
    return report;
}

}  // namespace tullock
