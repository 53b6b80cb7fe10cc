#pragma once

// JSON forms used by the CLI and the elicitation service.
//
// Problem:  {"children": [...], "homes": [...],
//            "prefs": {"a": ["1", "2"], ...}, "evals": {...},
//            "edges": [["a", "1"], ...]}           (edges optional)
// Matching: {"a": "2", "b": null, ...}              (missing = unmatched)
//
// Labels may be strings or integers; integers are read as their decimal text.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "unanimity/sim.hpp"
#include "unanimity/types.hpp"

namespace unanimity::json_io {

using nlohmann::json;

Problem problem_from_json(const json& j);
json to_json(const Problem& problem);

Matching matching_from_json(const Market& market, const json& j);
json to_json(const Market& market, const Matching& m);

StrictRanking ranking_from_json(const Market& market, const json& j);
json to_json(const Market& market, const StrictRanking& r);

ChildId child_from_json(const Market& market, const json& j);

/// Dictator order given as child labels; must name every child once.
std::vector<ChildId> order_from_json(const Market& market, const json& j);

sim::SimConfig sim_config_from_json(const json& j);
json to_json(const sim::SimConfig& config);

/// Parses text, mapping syntax errors to kInvalidArgument.
json parse(std::string_view text);

}  // namespace unanimity::json_io
