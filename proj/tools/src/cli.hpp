#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "paraoptic/games.hpp"

namespace paraoptic::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

struct GameSpec {
  NormalFormGame game;
  // "argmax_each", "hicks_sum", or one "argmax"/"total" tag per player.
  std::vector<std::string> selection;
};

// Throws ParseError with a JSON pointer to the offending node.
GameSpec parse_game_spec(const nlohmann::json& j);
GameSpec load_game_spec(const std::string& path);

// Throws ParseError for an unknown selection.
std::vector<std::string> parse_selection(const std::string& text, std::size_t players);

struct SolveOptions {
  std::uint64_t max_strategies = kDefaultEnumerationCap;
  std::uint64_t max_costates = kDefaultEnumerationCap;
};

// {"solutions": [...], "oracle": [...], "agree": bool, ...} with profiles
// listed as arrays of strategy labels in ascending profile order.
nlohmann::ordered_json solve_report(const GameSpec& spec, const SolveOptions& opts = {});

enum class Fault { kNone, kGdSign, kPdCooperate };

struct CheckOptions {
  std::string filter;
  Fault fault = Fault::kNone;
  std::uint64_t seed = 2024;
};

// Runs every named property whose name contains `filter`; prints one line
// per property. Returns the number of failures.
int run_checks(const CheckOptions& opts, std::ostream& out);
std::vector<std::string> check_names();

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace paraoptic::cli
