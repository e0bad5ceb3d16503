#include <fstream>
#include <set>

#include "cli.hpp"
#include "paraoptic/error.hpp"

namespace paraoptic::cli {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "/" + key, "missing field");
  return *it;
}

Payoff rational(const nlohmann::json& j, const std::string& path) {
  if (j.is_number_integer()) return Payoff(j.get<std::int64_t>());
  if (!j.is_string()) throw ParseError(path, "expected a rational as \"num/den\"");
  try {
    return parse_payoff(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, e.what());
  }
}

}  // namespace

std::vector<std::string> parse_selection(const std::string& text, std::size_t players) {
  if (text == "argmax_each") return std::vector<std::string>(players, "argmax");
  if (text == "hicks_sum") return {"hicks_sum"};
  std::vector<std::string> tags;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    tags.push_back(text.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (const auto& t : tags) {
    if (t != "argmax" && t != "total") {
      throw ParseError("/selection", "unknown selection \"" + t + "\"");
    }
  }
  if (tags.size() != players) {
    throw ParseError("/selection", "need one tag per player, got " + std::to_string(tags.size()));
  }
  return tags;
}

GameSpec parse_game_spec(const nlohmann::json& j) {
  GameSpec spec;
  auto& g = spec.game;
  const auto& players = field(j, "", "players");
  if (!players.is_array() || players.empty()) {
    throw ParseError("/players", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string path = "/players/" + std::to_string(i);
    const auto& name = field(players[i], path, "name");
    if (!name.is_string()) throw ParseError(path + "/name", "expected a string");
    const auto& strategies = field(players[i], path, "strategies");
    if (!strategies.is_array() || strategies.empty()) {
      throw ParseError(path + "/strategies", "expected a non-empty array");
    }
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      if (!strategies[s].is_string()) {
        throw ParseError(path + "/strategies/" + std::to_string(s), "expected a string");
      }
      labels.push_back(strategies[s].get<std::string>());
    }
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
      throw ParseError(path + "/strategies", "duplicate strategy labels");
    }
    g.names.push_back(name.get<std::string>());
    g.strategies.push_back(FinSet::atoms(labels));
  }

  const auto count = g.profile_count();
  const auto& payoffs = field(j, "", "payoffs");
  if (!payoffs.is_array()) throw ParseError("/payoffs", "expected an array");
  std::vector<std::optional<std::vector<Payoff>>> table(count);
  for (std::size_t e = 0; e < payoffs.size(); ++e) {
    const std::string path = "/payoffs/" + std::to_string(e);
    const auto& profile = field(payoffs[e], path, "profile");
    if (!profile.is_array() || profile.size() != g.players()) {
      throw ParseError(path + "/profile", "expected " + std::to_string(g.players()) + " labels");
    }
    std::vector<std::size_t> prof;
    for (std::size_t i = 0; i < g.players(); ++i) {
      const std::string ppath = path + "/profile/" + std::to_string(i);
      if (!profile[i].is_string()) throw ParseError(ppath, "expected a string");
      auto idx = g.strategies[i].find(Label::atom(profile[i].get<std::string>()));
      if (!idx) throw ParseError(ppath, "unknown strategy for " + g.names[i]);
      prof.push_back(*idx);
    }
    const auto& values = field(payoffs[e], path, "payoffs");
    if (!values.is_array() || values.size() != g.players()) {
      throw ParseError(path + "/payoffs", "expected " + std::to_string(g.players()) + " payoffs");
    }
    std::vector<Payoff> row;
    for (std::size_t i = 0; i < g.players(); ++i) {
      row.push_back(rational(values[i], path + "/payoffs/" + std::to_string(i)));
    }
    auto& slot = table[g.profile_index(prof)];
    if (slot) throw ParseError(path + "/profile", "profile listed twice");
    slot = std::move(row);
  }
  for (std::uint64_t p = 0; p < count; ++p) {
    if (!table[p]) {
      std::string missing;
      const auto prof = g.profile(p);
      for (std::size_t i = 0; i < prof.size(); ++i) {
        missing += (i ? "," : "") + g.strategies[i].label(prof[i]).str();
      }
      throw ParseError("/payoffs", "no payoffs for profile (" + missing + ")");
    }
    g.payoffs.push_back(*table[p]);
  }

  std::string selection = "argmax_each";
  if (auto it = j.find("selection"); it != j.end()) {
    if (it->is_string()) {
      selection = it->get<std::string>();
    } else if (it->is_array()) {
      selection.clear();
      for (std::size_t i = 0; i < it->size(); ++i) {
        if (!(*it)[i].is_string()) {
          throw ParseError("/selection/" + std::to_string(i), "expected a string");
        }
        selection += (i ? "," : "") + (*it)[i].get<std::string>();
      }
    } else {
      throw ParseError("/selection", "expected a string or an array of tags");
    }
  }
  spec.selection = parse_selection(selection, g.players());
  return spec;
}

GameSpec load_game_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_game_spec(j);
}

}  // namespace paraoptic::cli
