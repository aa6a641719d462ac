#include "spec_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace tullock_cli {

namespace {

using nlohmann::json;

double require_positive_number(const json& node, const std::string& key) {
    if (!node.is_number()) {
        throw SpecError(key + ": must be a number");
    }
    const double x = node.get<double>();
    if (!std::isfinite(x) || x <= 0.0) {
        throw SpecError(key + ": must be a positive finite number");
    }
    return x;
}

}  // namespace

SpecFile load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SpecError("cannot open spec file: " + path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError("spec file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) {
        throw SpecError("spec file: top level must be an object");
    }
    if (!doc.contains("players") || !doc["players"].is_array()) {
        throw SpecError("players: required list of {v, c} objects");
    }

    SpecFile spec;
    const json& players = doc["players"];
    for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string prefix = "players[" + std::to_string(i) + "]";
        if (!players[i].is_object()) {
            throw SpecError(prefix + ": must be an object with keys v and c");
        }
        if (!players[i].contains("v")) {
            throw SpecError(prefix + ".v: missing");
        }
        if (!players[i].contains("c")) {
            throw SpecError(prefix + ".c: missing");
        }
        const double v = require_positive_number(players[i]["v"], prefix + ".v");
        const double c = require_positive_number(players[i]["c"], prefix + ".c");
        spec.players.push_back(tullock::Player{v, c});
    }
    if (spec.players.size() < 2) {
        throw SpecError("players: at least two players are required");
    }

    const bool has_coalition = doc.contains("coalition");
    const bool has_vk = doc.contains("v_K");
    if (has_coalition != has_vk) {
        throw SpecError("coalition and v_K must appear together");
    }
    if (has_coalition) {
        const json& coalition = doc["coalition"];
        if (!coalition.is_array() || coalition.empty()) {
            throw SpecError("coalition: must be a nonempty list of player numbers");
        }
        for (const json& entry : coalition) {
            if (!entry.is_number_integer()) {
                throw SpecError("coalition: entries must be 1-based player numbers");
            }
            const long long num = entry.get<long long>();
            if (num < 1 || static_cast<std::size_t>(num) > spec.players.size()) {
                throw SpecError("coalition: player number " + std::to_string(num) +
                                " out of range 1.." +
                                std::to_string(spec.players.size()));
            }
            spec.coalition.push_back(static_cast<std::size_t>(num - 1));
        }
        std::sort(spec.coalition.begin(), spec.coalition.end());
        if (std::adjacent_find(spec.coalition.begin(), spec.coalition.end()) !=
            spec.coalition.end()) {
            throw SpecError("coalition: player numbers must be distinct");
        }
        if (spec.coalition.size() >= spec.players.size()) {
            throw SpecError("coalition: must be a strict subset of the players");
        }
        spec.coordinator_valuation = require_positive_number(doc["v_K"], "v_K");
    }
    return spec;
}

CoordinatorView coordinator_view(const SpecFile& spec) {
    if (!spec.has_coalition()) {
        throw SpecError("coalition: required for this command");
    }
    std::vector<bool> in_coalition(spec.players.size(), false);
    for (std::size_t idx : spec.coalition) {
        in_coalition[idx] = true;
    }

    std::vector<tullock::Player> opponents;
    std::vector<double> subordinate_costs;
    std::vector<std::size_t> numbers;
    for (std::size_t i = 0; i < spec.players.size(); ++i) {
        if (in_coalition[i]) {
            subordinate_costs.push_back(spec.players[i].cost);
            numbers.push_back(i + 1);
        } else {
            opponents.push_back(spec.players[i]);
        }
    }
    return CoordinatorView{
        tullock::CoordinatorInstance(std::move(opponents), std::move(subordinate_costs),
                                     spec.coordinator_valuation),
        std::move(numbers)};
}

std::string format_human(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string format_csv(double x) {
    char buf[64];
    const auto result =
        std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, result.ptr);
}

}  // namespace tullock_cli
