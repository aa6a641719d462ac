// tullock — closed-form Tullock contest equilibria, equilibrium verification
// by best-response iteration, coordinator valuation design, and feasible-
// segment sweeps.
//
// Exit codes: 0 success, 1 verification failure, 2 input error,
// 3 oracle non-convergence, 4 design infeasibility.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spec_io.hpp"
#include "tullock/best_response.hpp"
#include "tullock/contest.hpp"
#include "tullock/design.hpp"

namespace {

using nlohmann::json;
using tullock_cli::format_csv;
using tullock_cli::format_human;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitInfeasibleDesign = 4;

struct SweepOptions {
    double v2_min = 0.0;
    double v2_max = 0.0;
    int points = 0;
    std::string out_path;
};

int cmd_solve(const std::string& spec_path, bool as_json) {
    const auto spec = tullock_cli::load_spec_file(spec_path);
    const tullock::ContestInstance instance(spec.players);
    const tullock::Equilibrium eq = tullock::equilibrium(instance);

    if (as_json) {
        json out;
        out["alpha"] = eq.alpha_solution.alpha;
        out["bids"] = eq.bids;
        out["payoffs"] = eq.payoffs;
        json active = json::array();
        for (std::size_t i = 0; i < instance.size(); ++i) {
            active.push_back(eq.active(i));
        }
        out["active"] = active;
        std::cout << out.dump() << "\n";
        return kExitOk;
    }

    std::cout << "alpha = " << format_human(eq.alpha_solution.alpha) << "\n";
    for (std::size_t i = 0; i < instance.size(); ++i) {
        std::cout << "player " << (i + 1) << ": bid = " << format_human(eq.bids[i])
                  << "  payoff = " << format_human(eq.payoffs[i])
                  << "  active = " << (eq.active(i) ? "yes" : "no") << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& spec_path, double tol, int max_sweeps,
               bool as_json) {
    const auto spec = tullock_cli::load_spec_file(spec_path);
    const tullock::ContestInstance instance(spec.players);
    const tullock::Equilibrium eq = tullock::equilibrium(instance);

    // Interior, scale-aware default start for the fixed-point iteration.
    std::vector<double> start(instance.size());
    for (std::size_t i = 0; i < instance.size(); ++i) {
        const tullock::Player& p = instance.player(i);
        start[i] = p.valuation / (2.0 * p.cost * static_cast<double>(instance.size()));
    }
    const std::vector<double> fixed_point =
        tullock::br_fixed_point(instance, start, 1e-10, max_sweeps);

    double br_max_diff = 0.0;
    for (std::size_t i = 0; i < instance.size(); ++i) {
        br_max_diff = std::max(br_max_diff, std::abs(fixed_point[i] - eq.bids[i]));
    }
    const tullock::NashReport report = tullock::verify_nash(instance, eq.bids, tol);

    if (as_json) {
        json out;
        out["pass"] = report.is_nash;
        out["tol"] = tol;
        out["max_deviation_gain"] = report.max_deviation_gain;
        out["per_player_gain"] = report.per_player_gain;
        out["fixed_point_max_bid_diff"] = br_max_diff;
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "fixed-point max bid difference = " << format_human(br_max_diff)
                  << "\n";
        std::cout << "max deviation gain = " << format_human(report.max_deviation_gain)
                  << "\n";
        std::cout << (report.is_nash ? "PASS" : "FAIL") << " (tol = " << format_human(tol)
                  << ")\n";
    }
    return report.is_nash ? kExitOk : kExitVerifyFailed;
}

int cmd_design(const std::string& spec_path, bool force_general, bool as_json) {
    const auto spec = tullock_cli::load_spec_file(spec_path);
    const auto view = tullock_cli::coordinator_view(spec);

    const bool closed_form_shape =
        view.coord.num_opponents() == 1 && view.coord.num_subordinates() == 2;
    const tullock::DesignResult result = (closed_form_shape && !force_general)
                                             ? tullock::design_three_player(view.coord)
                                             : tullock::design_general(view.coord);

    if (as_json) {
        json out;
        out["regime"] = tullock::to_string(result.regime);
        out["beta"] = result.beta;
        out["subordinates"] = view.subordinate_player_numbers;
        out["valuations"] = result.valuations;
        out["alpha"] = result.alpha;
        out["coordinator_utility"] = result.coordinator_utility;
        out["feasibility_residual"] = result.feasibility_residual;
        out["solver"] = (closed_form_shape && !force_general) ? "three-player" : "general";
        std::cout << out.dump() << "\n";
        return kExitOk;
    }

    std::cout << "regime = " << tullock::to_string(result.regime) << "\n";
    std::cout << "beta = " << format_human(result.beta) << "\n";
    for (std::size_t k = 0; k < result.valuations.size(); ++k) {
        std::cout << "v*[player " << view.subordinate_player_numbers[k]
                  << "] = " << format_human(result.valuations[k]) << "\n";
    }
    std::cout << "alpha = " << format_human(result.alpha) << "\n";
    std::cout << "U_K = " << format_human(result.coordinator_utility) << "\n";
    std::cout << "feasibility residual = " << format_human(result.feasibility_residual)
              << "\n";
    return kExitOk;
}

void print_sweep_row(const char* label, const tullock::SweepRow& row) {
    std::cout << label << ": v2 = " << format_human(row.v2);
    if (row.feasible) {
        std::cout << "  v3 = " << format_human(row.v3)
                  << "  U_K = " << format_human(row.coordinator_utility)
                  << "  alpha = " << format_human(row.alpha) << "\n";
    } else {
        std::cout << "  (no feasible companion)\n";
    }
}

json sweep_row_json(const tullock::SweepRow& row) {
    json j;
    j["v2"] = row.v2;
    if (row.feasible) {
        j["v3"] = row.v3;
        j["U_K"] = row.coordinator_utility;
        j["alpha"] = row.alpha;
    } else {
        j["v3"] = nullptr;
        j["U_K"] = nullptr;
        j["alpha"] = nullptr;
    }
    return j;
}

int cmd_sweep(const std::string& spec_path, const SweepOptions& opt, bool as_json) {
    const auto spec = tullock_cli::load_spec_file(spec_path);
    const auto view = tullock_cli::coordinator_view(spec);
    if (view.coord.num_subordinates() != 2) {
        throw tullock_cli::SpecError("coalition: sweep needs exactly two subordinates");
    }
    if (!(opt.v2_min > 0.0) || !(opt.v2_max > opt.v2_min)) {
        throw tullock_cli::SpecError("sweep range: need 0 < v2-min < v2-max");
    }
    if (opt.points < 2) {
        throw tullock_cli::SpecError("sweep range: need at least 2 points");
    }
    if (opt.out_path.empty()) {
        throw tullock_cli::SpecError("sweep: --out path is required");
    }

    std::vector<double> grid(static_cast<std::size_t>(opt.points));
    for (int i = 0; i < opt.points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            opt.v2_min + (static_cast<double>(i) * (opt.v2_max - opt.v2_min)) /
                             static_cast<double>(opt.points - 1);
    }
    const std::vector<tullock::SweepRow> rows = tullock::sweep(view.coord, grid);

    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) {
        throw tullock_cli::SpecError("cannot open output file: " + opt.out_path);
    }
    out << "v2,v3,U_K,alpha\n";
    for (const tullock::SweepRow& row : rows) {
        out << format_csv(row.v2) << ",";
        if (row.feasible) {
            out << format_csv(row.v3) << "," << format_csv(row.coordinator_utility)
                << "," << format_csv(row.alpha) << "\n";
        } else {
            out << "NA,NA,NA\n";
        }
    }
    out.close();

    const tullock::SweepRow* argmax = nullptr;
    for (const tullock::SweepRow& row : rows) {
        if (row.feasible &&
            (argmax == nullptr || row.coordinator_utility > argmax->coordinator_utility)) {
            argmax = &row;
        }
    }

    // Baseline design v2 = v_K, evaluated exactly (not at the nearest grid
    // point) whenever it falls inside the requested range.
    const double v_k = view.coord.coordinator_valuation();
    std::optional<tullock::SweepRow> baseline;
    if (opt.v2_min <= v_k && v_k <= opt.v2_max) {
        const std::vector<double> single = {v_k};
        baseline = tullock::sweep(view.coord, single)[0];
    }

    if (as_json) {
        json out_json;
        out_json["out"] = opt.out_path;
        out_json["rows"] = rows.size();
        out_json["argmax"] = argmax ? sweep_row_json(*argmax) : json(nullptr);
        out_json["baseline"] = baseline ? sweep_row_json(*baseline) : json(nullptr);
        std::cout << out_json.dump() << "\n";
        return kExitOk;
    }

    std::cout << "wrote " << rows.size() << " rows to " << opt.out_path << "\n";
    if (argmax) {
        print_sweep_row("argmax", *argmax);
    } else {
        std::cout << "argmax: no feasible rows\n";
    }
    if (baseline) {
        print_sweep_row("baseline (v2 = v_K)", *baseline);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tullock contest equilibrium and incentive-design toolkit"};
    app.require_subcommand(1);

    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output at full precision");

    std::string spec_path;
    double tol = 1e-8;
    int max_sweeps = 100000;
    bool force_general = false;
    SweepOptions sweep_opt;

    CLI::App* solve = app.add_subcommand("solve", "compute the Nash equilibrium");
    solve->add_option("spec", spec_path, "contest spec file (JSON)")->required();
    solve->add_flag("--json", as_json, "machine-readable output");

    CLI::App* verify = app.add_subcommand(
        "verify", "check the closed form against best-response iteration");
    verify->add_option("spec", spec_path, "contest spec file (JSON)")->required();
    verify->add_option("--tol", tol, "max allowed deviation gain (default 1e-8)");
    verify->add_option("--max-sweeps", max_sweeps,
                       "best-response sweep budget (default 100000)");
    verify->add_flag("--json", as_json, "machine-readable output");

    CLI::App* design = app.add_subcommand(
        "design", "optimal reported valuations for the coalition");
    design->add_option("spec", spec_path, "contest spec file (JSON)")->required();
    design->add_flag("--force-general", force_general,
                     "use the reduced general solver even for the closed-form shape");
    design->add_flag("--json", as_json, "machine-readable output");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "trace coordinator utility along the feasible segment");
    sweep->add_option("spec", spec_path, "contest spec file (JSON)")->required();
    sweep->add_option("--v2-min", sweep_opt.v2_min, "lower end of the v2 grid")
        ->required();
    sweep->add_option("--v2-max", sweep_opt.v2_max, "upper end of the v2 grid")
        ->required();
    sweep->add_option("--points", sweep_opt.points, "number of grid points")
        ->required();
    sweep->add_option("--out", sweep_opt.out_path, "CSV output path")->required();
    sweep->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInputError;
    }

    try {
        if (solve->parsed()) {
            return cmd_solve(spec_path, as_json);
        }
        if (verify->parsed()) {
            return cmd_verify(spec_path, tol, max_sweeps, as_json);
        }
        if (design->parsed()) {
            return cmd_design(spec_path, force_general, as_json);
        }
        if (sweep->parsed()) {
            return cmd_sweep(spec_path, sweep_opt, as_json);
        }
    } catch (const tullock::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const tullock::ContestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == "no-feasible-beta" ? kExitInfeasibleDesign : kExitInputError;
    } catch (const tullock_cli::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
