#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tullock/contest.hpp"
#include "tullock/design.hpp"

namespace tullock_cli {

// Thrown on malformed spec files; the message names the offending key.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parsed contest description. `coalition` holds 0-based player indices,
// sorted ascending; it is empty when the spec has no coalition block.
struct SpecFile {
    std::vector<tullock::Player> players;
    std::vector<std::size_t> coalition;
    double coordinator_valuation = 0.0;

    bool has_coalition() const { return !coalition.empty(); }
};

SpecFile load_spec_file(const std::string& path);

// Coordinator view of a spec with a coalition: opponents keep their (v, c),
// coalition players contribute only their costs. The subordinate player
// numbers (1-based, as in the spec file) are kept for reporting.
struct CoordinatorView {
    tullock::CoordinatorInstance coord;
    std::vector<std::size_t> subordinate_player_numbers;
};

CoordinatorView coordinator_view(const SpecFile& spec);

// Locale-independent number formatting for the three report styles.
std::string format_human(double x);  // 6 significant digits
std::string format_csv(double x);    // 17 significant digits

}  // namespace tullock_cli
