#include <algorithm>

#include "cli.hpp"

namespace paraoptic::cli {

namespace {

template <class Index>
nlohmann::ordered_json profiles(const NormalFormGame& g, const std::vector<Index>& indices) {
  auto out = nlohmann::ordered_json::array();
  for (auto p : indices) {
    auto row = nlohmann::ordered_json::array();
    const auto prof = g.profile(p);
    for (std::size_t i = 0; i < prof.size(); ++i) row.push_back(g.strategies[i].label(prof[i]).str());
    out.push_back(std::move(row));
  }
  return out;
}

template <class A, class B>
bool same_indices(const std::vector<A>& a, const std::vector<B>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (static_cast<std::uint64_t>(a[i]) != static_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

}  // namespace

nlohmann::ordered_json solve_report(const GameSpec& spec, const SolveOptions& opts) {
  const auto& g = spec.game;
  nlohmann::ordered_json report;
  if (spec.selection.size() == 1 && spec.selection[0] == "hicks_sum") {
    const auto reparam = solution_set(hicks_game_reparametrised(g, opts.max_strategies));
    const auto pushed = solution_set(hicks_game_pushforward(g, std::min(opts.max_strategies, opts.max_costates)));
    const auto oracle = brute_force_hicks(g, opts.max_strategies);
    report["solutions"] = profiles(g, reparam);
    report["oracle"] = profiles(g, oracle);
    report["agree"] = same_indices(reparam, oracle);
    report["selection"] = "hicks_sum";
    report["routes"] = {{"reparametrised", profiles(g, reparam)},
                        {"pushforward", profiles(g, pushed)}};
    report["routes_agree"] = same_indices(reparam, pushed);
    return report;
  }
  std::vector<PlayerSelection> players;
  for (const auto& t : spec.selection) {
    players.push_back(t == "argmax" ? PlayerSelection::kArgmax : PlayerSelection::kTotal);
  }
  const auto solutions = solution_set(nash_game(g, players, opts.max_strategies));
  const auto oracle = brute_force_nash(g, players, opts.max_strategies);
  report["solutions"] = profiles(g, solutions);
  report["oracle"] = profiles(g, oracle);
  report["agree"] = same_indices(solutions, oracle);
  std::string sel;
  for (std::size_t i = 0; i < spec.selection.size(); ++i) sel += (i ? "," : "") + spec.selection[i];
  const bool all_argmax = std::all_of(players.begin(), players.end(),
                                      [](PlayerSelection s) { return s == PlayerSelection::kArgmax; });
  report["selection"] = all_argmax ? std::string("argmax_each") : sel;
  return report;
}

}  // namespace paraoptic::cli
