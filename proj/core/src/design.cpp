#include "tullock/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tullock {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void check_valuations(const CoordinatorInstance& coord,
                      std::span<const double> valuations) {
    if (valuations.size() != coord.num_subordinates()) {
        throw ContestError("invalid-valuations",
                           "expected one valuation per subordinate");
    }
    for (double v : valuations) {
        if (!positive_finite(v)) {
            throw ContestError("invalid-valuations",
                               "subordinate valuations must be positive finite numbers");
        }
    }
}

// sum_k (v_k - v_K) x_k* over subordinates, given the induced equilibrium.
double residual_at(const CoordinatorInstance& coord,
                   std::span<const double> valuations, const Equilibrium& eq) {
    const std::size_t offset = coord.num_opponents();
    double r = 0.0;
    for (std::size_t k = 0; k < coord.num_subordinates(); ++k) {
        r += (valuations[k] - coord.coordinator_valuation()) * eq.bids[offset + k];
    }
    return r;
}

}  // namespace

const char* to_string(Regime regime) {
    return regime == Regime::opponent_excluded ? "opponent-excluded" : "interior";
}

CoordinatorInstance::CoordinatorInstance(std::vector<Player> opponents,
                                         std::vector<double> subordinate_costs,
                                         double coordinator_valuation)
    : opponents_(std::move(opponents)),
      subordinate_costs_(std::move(subordinate_costs)),
      coordinator_valuation_(coordinator_valuation) {
    if (opponents_.empty()) {
        throw ContestError("invalid-coalition",
                           "the coalition must face at least one opponent");
    }
    if (subordinate_costs_.empty()) {
        throw ContestError("invalid-coalition",
                           "the coalition needs at least one subordinate");
    }
    for (const Player& p : opponents_) {
        if (!positive_finite(p.valuation) || !positive_finite(p.cost)) {
            throw ContestError("invalid-player",
                               "opponent valuations and costs must be positive");
        }
    }
    for (double c : subordinate_costs_) {
        if (!positive_finite(c)) {
            throw ContestError("invalid-player",
                               "subordinate costs must be positive finite numbers");
        }
    }
    if (!positive_finite(coordinator_valuation_)) {
        throw ContestError("invalid-coalition",
                           "coordinator valuation must be a positive finite number");
    }
}

ContestInstance CoordinatorInstance::induced_contest(
    std::span<const double> subordinate_valuations) const {
    std::vector<Player> players = opponents_;
    players.reserve(opponents_.size() + subordinate_costs_.size());
    for (std::size_t k = 0; k < subordinate_costs_.size(); ++k) {
        players.push_back(Player{subordinate_valuations[k], subordinate_costs_[k]});
    }
    return ContestInstance(std::move(players));
}

std::vector<std::size_t> CoordinatorInstance::coalition_indices() const {
    std::vector<std::size_t> idx(subordinate_costs_.size());
    std::iota(idx.begin(), idx.end(), opponents_.size());
    return idx;
}

double feasibility_residual(const CoordinatorInstance& coord,
                            std::span<const double> subordinate_valuations) {
    check_valuations(coord, subordinate_valuations);
    const ContestInstance inst = coord.induced_contest(subordinate_valuations);
    const Equilibrium eq = equilibrium(inst);
    return residual_at(coord, subordinate_valuations, eq);
}

namespace {

DesignResult finish_result(const CoordinatorInstance& coord,
                           std::vector<double> valuations, double beta,
                           const ContestInstance& inst, const Equilibrium& eq) {
    DesignResult out;
    out.beta = beta;
    out.alpha = eq.alpha_solution.alpha;
    const auto coalition = coord.coalition_indices();
    out.coordinator_utility =
        coordinator_utility(inst, coalition, coord.coordinator_valuation(), eq.bids);
    out.feasibility_residual = residual_at(coord, valuations, eq);

    bool opponents_out = true;
    for (std::size_t j = 0; j < coord.num_opponents() && opponents_out; ++j) {
        opponents_out = eq.bids[j] == 0.0;
    }
    out.regime = opponents_out ? Regime::opponent_excluded : Regime::interior;
    out.valuations = std::move(valuations);
    return out;
}

}  // namespace

DesignResult design_three_player(const CoordinatorInstance& coord) {
    if (coord.num_opponents() != 1 || coord.num_subordinates() != 2) {
        throw ContestError("wrong-shape", "design_three_player needs exactly one "
                                          "opponent and two subordinates");
    }
    const double v_k = coord.coordinator_valuation();
    const double w1 = coord.opponents()[0].relative_cost();
    const double r2 = std::sqrt(coord.subordinate_costs()[0]);
    const double r3 = std::sqrt(coord.subordinate_costs()[1]);

    double beta;
    if (v_k * w1 >= 2.0 * r2 * r3) {
        // The opponent can be priced out; this beta is the
        // sqrt(c)-proportional point on the feasibility curve.
        beta = v_k * (r2 + r3) / (2.0 * r2 * r3);
    } else {
        beta = (2.0 * v_k * w1 + (r2 - r3) * (r2 - r3)) / (w1 * (r2 + r3));
    }

    std::vector<double> valuations = {beta * r2, beta * r3};
    const ContestInstance inst = coord.induced_contest(valuations);
    const Equilibrium eq = equilibrium(inst);
    return finish_result(coord, std::move(valuations), beta, inst, eq);
}

namespace {

struct BetaProbe {
    double g = 0.0;
    bool opponents_excluded = true;
    bool any_sub_active = false;
};

BetaProbe probe_beta(const CoordinatorInstance& coord,
                     std::span<const double> sqrt_costs, double beta,
                     std::vector<double>& scratch_valuations) {
    const double v_k = coord.coordinator_valuation();
    scratch_valuations.resize(sqrt_costs.size());
    for (std::size_t k = 0; k < sqrt_costs.size(); ++k) {
        scratch_valuations[k] = beta * sqrt_costs[k];
    }
    const ContestInstance inst = coord.induced_contest(scratch_valuations);
    const AlphaSolution sol = solve_alpha(inst);

    BetaProbe probe;
    for (const Player& opp : coord.opponents()) {
        if (opp.relative_cost() * sol.alpha < 1.0) {
            probe.opponents_excluded = false;
            break;
        }
    }
    for (double rc : sqrt_costs) {
        const double slack = beta - sol.alpha * rc;
        if (slack > 0.0) {
            probe.any_sub_active = true;
            probe.g += (beta * rc - v_k) * slack;
        }
    }
    return probe;
}

double polish_beta_root(const CoordinatorInstance& coord,
                        std::span<const double> sqrt_costs, double lo, double hi,
                        double g_lo, std::vector<double>& scratch) {
    for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = probe_beta(coord, sqrt_costs, mid, scratch).g;
        if (g_mid == 0.0) {
            return mid;
        }
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

DesignResult design_general(const CoordinatorInstance& coord) {
    const double v_k = coord.coordinator_valuation();
    const std::size_t k = coord.num_subordinates();

    std::vector<double> sqrt_costs(k);
    for (std::size_t i = 0; i < k; ++i) {
        sqrt_costs[i] = std::sqrt(coord.subordinate_costs()[i]);
    }
    const auto [min_it, max_it] = std::minmax_element(sqrt_costs.begin(), sqrt_costs.end());
    const double min_sq = *min_it;
    const double max_sq = *max_it;

    const double lo = 1e-6 * v_k;
    // Any feasible beta with an active subordinate satisfies
    // beta * min_k sqrt(c_k) <= v_K, so the scan range provably brackets
    // every nondegenerate root; the doublings below are belt and braces.
    double hi = std::max(10.0 * v_k * max_sq / min_sq, 1.05 * v_k / min_sq);

    constexpr int kGridPoints = 4096;
    std::vector<double> scratch;
    std::vector<double> candidates;

    for (int attempt = 0;; ++attempt) {
        candidates.clear();
        std::vector<BetaProbe> probes(kGridPoints);
        std::vector<double> grid(kGridPoints);
        for (int j = 0; j < kGridPoints; ++j) {
            grid[j] = lo + (static_cast<double>(j) * (hi - lo)) /
                               static_cast<double>(kGridPoints - 1);
            probes[j] = probe_beta(coord, sqrt_costs, grid[j], scratch);
        }

        double g_max = 1.0;
        for (const BetaProbe& p : probes) {
            g_max = std::max(g_max, std::abs(p.g));
        }
        const double plateau_tol = 1e-12 * g_max;

        bool boundary_touch = false;
        int plateau_start = -1;
        for (int j = 0; j < kGridPoints; ++j) {
            // Exact roots sitting on a grid point.
            if (probes[j].g == 0.0 && probes[j].any_sub_active) {
                candidates.push_back(grid[j]);
                if (j == kGridPoints - 1) boundary_touch = true;
            }
            // Sign changes between neighbours.
            if (j + 1 < kGridPoints && probes[j].g * probes[j + 1].g < 0.0) {
                candidates.push_back(polish_beta_root(coord, sqrt_costs, grid[j],
                                                      grid[j + 1], probes[j].g,
                                                      scratch));
                if (j + 1 == kGridPoints - 1) boundary_touch = true;
            }
            // A flat stretch of feasible betas with every opponent priced
            // out: any point of it attains v_K, take the middle.
            const bool in_plateau = probes[j].opponents_excluded &&
                                    probes[j].any_sub_active &&
                                    std::abs(probes[j].g) <= plateau_tol;
            if (in_plateau && plateau_start < 0) {
                plateau_start = j;
            }
            if ((!in_plateau || j == kGridPoints - 1) && plateau_start >= 0) {
                const int last = in_plateau ? j : j - 1;
                if (last > plateau_start) {
                    candidates.push_back(0.5 * (grid[plateau_start] + grid[last]));
                    if (last == kGridPoints - 1) boundary_touch = true;
                }
                plateau_start = -1;
            }
        }

        if ((!candidates.empty() && !boundary_touch) || attempt == 4) {
            break;
        }
        hi *= 2.0;
    }

    if (candidates.empty()) {
        throw ContestError("no-feasible-beta",
                           "no feasible beta found on the expanded scan range");
    }
    std::sort(candidates.begin(), candidates.end());

    bool have_best = false;
    DesignResult best;
    for (double beta : candidates) {
        std::vector<double> valuations(k);
        for (std::size_t i = 0; i < k; ++i) {
            valuations[i] = beta * sqrt_costs[i];
        }
        const ContestInstance inst = coord.induced_contest(valuations);
        const Equilibrium eq = equilibrium(inst);

        bool any_active = false;
        for (std::size_t idx : coord.coalition_indices()) {
            any_active = any_active || eq.bids[idx] > 0.0;
        }
        if (!any_active) {
            continue;  // zero-bid coalition, not a usable design
        }
        DesignResult result = finish_result(coord, std::move(valuations), beta, inst, eq);
        if (!have_best || result.coordinator_utility > best.coordinator_utility) {
            best = std::move(result);
            have_best = true;
        }
    }
    if (!have_best) {
        throw ContestError("no-feasible-beta",
                           "every feasible beta leaves the coalition inactive");
    }
    return best;
}

double solve_feasible_companion(const CoordinatorInstance& coord, double v2) {
    if (coord.num_subordinates() != 2) {
        throw ContestError("wrong-shape",
                           "solve_feasible_companion needs exactly two subordinates");
    }
    if (!positive_finite(v2)) {
        throw std::invalid_argument("solve_feasible_companion: v2 must be positive");
    }
    const double v_k = coord.coordinator_valuation();

    double vals[2] = {v2, 0.0};
    const auto residual = [&](double v3) {
        vals[1] = v3;
        const ContestInstance inst = coord.induced_contest(vals);
        const Equilibrium eq = equilibrium(inst);
        return residual_at(coord, vals, eq);
    };
    const auto companion_active = [&](double v3) {
        vals[1] = v3;
        const ContestInstance inst = coord.induced_contest(vals);
        return equilibrium(inst).bids[coord.num_opponents() + 1] > 0.0;
    };

    const double lo = 1e-9 * v_k;
    double hi = 10.0 * std::max(v_k, v2);
    constexpr int kGridPoints = 1024;

    for (int attempt = 0; attempt <= 6; ++attempt) {
        std::vector<double> grid(kGridPoints);
        std::vector<double> res(kGridPoints);
        for (int j = 0; j < kGridPoints; ++j) {
            grid[j] = lo + (static_cast<double>(j) * (hi - lo)) /
                               static_cast<double>(kGridPoints - 1);
            res[j] = residual(grid[j]);
        }

        // Multiple roots can exist; walk down from the top so the branch
        // through (v_K, v_K) wins and degenerate zeros (companion inactive)
        // near v3 = 0 are never picked up.
        for (int j = kGridPoints - 2; j >= 0; --j) {
            if (res[j + 1] == 0.0) {
                if (companion_active(grid[j + 1])) {
                    return grid[j + 1];
                }
                continue;
            }
            if (res[j] * res[j + 1] < 0.0) {
                double a = grid[j];
                double b = grid[j + 1];
                double res_a = res[j];
                for (int it = 0; it < 200 && b - a > 1e-12 * std::max(1.0, b); ++it) {
                    const double mid = 0.5 * (a + b);
                    const double rm = residual(mid);
                    if (rm == 0.0) {
                        return mid;
                    }
                    if ((rm > 0.0) == (res_a > 0.0)) {
                        a = mid;
                        res_a = rm;
                    } else {
                        b = mid;
                    }
                }
                return 0.5 * (a + b);
            }
        }
        if (res[0] == 0.0 && companion_active(grid[0])) {
            return grid[0];
        }
        hi *= 2.0;
    }
    throw ContestError("no-feasible-companion",
                       "no feasible companion valuation found for v2 = " +
                           std::to_string(v2));
}

std::vector<SweepRow> sweep(const CoordinatorInstance& coord,
                            std::span<const double> v2_grid) {
    if (coord.num_subordinates() != 2) {
        throw ContestError("wrong-shape", "sweep needs exactly two subordinates");
    }
    for (double v2 : v2_grid) {
        if (!positive_finite(v2)) {
            throw ContestError("invalid-grid", "sweep grid values must be positive");
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(v2_grid.size());
    for (double v2 : v2_grid) {
        SweepRow row;
        row.v2 = v2;
        try {
            row.v3 = solve_feasible_companion(coord, v2);
            const double vals[2] = {v2, row.v3};
            const ContestInstance inst = coord.induced_contest(vals);
            const Equilibrium eq = equilibrium(inst);
            row.alpha = eq.alpha_solution.alpha;
            row.coordinator_utility = coordinator_utility(
                inst, coord.coalition_indices(), coord.coordinator_valuation(), eq.bids);
            row.feasible = true;
        } catch (const ContestError& e) {
            if (e.code() != "no-feasible-companion") {
                throw;
            }
            row.feasible = false;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tullock
