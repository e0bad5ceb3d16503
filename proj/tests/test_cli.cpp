#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "paraoptic/error.hpp"

using namespace paraoptic;
using namespace paraoptic::cli;
using nlohmann::json;

namespace {

const std::string kFixtures = PARAOPTIC_FIXTURE_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "paraoptic");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json pd_json() {
  std::ifstream in(kFixtures + "/pd.json");
  return json::parse(in);
}

std::string parse_error_path(const json& j) {
  try {
    parse_game_spec(j);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "<no error>";
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("paraoptic_test_" + name);
}

}  // namespace

TEST(Spec, LoadsPrisonersDilemma) {
  const auto spec = load_game_spec(kFixtures + "/pd.json");
  EXPECT_EQ(spec.game.names, (std::vector<std::string>{"row", "column"}));
  EXPECT_EQ(spec.game.payoffs, prisoners_dilemma().payoffs);
  EXPECT_EQ(spec.selection, (std::vector<std::string>{"argmax", "argmax"}));
}

TEST(Spec, ErrorPaths) {
  auto j = pd_json();
  j.erase("players");
  EXPECT_EQ(parse_error_path(j), "/players");

  j = pd_json();
  j["payoffs"][2]["profile"][1] = "X";
  EXPECT_EQ(parse_error_path(j), "/payoffs/2/profile/1");

  j = pd_json();
  j["payoffs"][1]["payoffs"][0] = "abc";
  EXPECT_EQ(parse_error_path(j), "/payoffs/1/payoffs/0");

  j = pd_json();
  j["payoffs"][3]["profile"] = json::array({"C", "C"});
  EXPECT_EQ(parse_error_path(j), "/payoffs/3/profile");

  j = pd_json();
  j["payoffs"].erase(3);
  EXPECT_EQ(parse_error_path(j), "/payoffs");

  j = pd_json();
  j["selection"] = "best";
  EXPECT_EQ(parse_error_path(j), "/selection");
}

TEST(Spec, MissingFileIsAParseError) {
  EXPECT_THROW(load_game_spec(kFixtures + "/missing.json"), ParseError);
}

TEST(Spec, Selection) {
  EXPECT_EQ(parse_selection("argmax_each", 3).size(), 3u);
  EXPECT_EQ(parse_selection("hicks_sum", 2), (std::vector<std::string>{"hicks_sum"}));
  EXPECT_EQ(parse_selection("argmax,total", 2), (std::vector<std::string>{"argmax", "total"}));
  EXPECT_THROW(parse_selection("argmax", 2), ParseError);
  EXPECT_THROW(parse_selection("nash", 2), ParseError);
}

TEST(Solve, Fixtures) {
  const auto pd = solve_report(load_game_spec(kFixtures + "/pd.json"));
  EXPECT_EQ(pd.dump(), R"({"solutions":[["D","D"]],"oracle":[["D","D"]],"agree":true,"selection":"argmax_each"})");
  const auto mp = solve_report(load_game_spec(kFixtures + "/matching_pennies.json"));
  EXPECT_TRUE(mp["solutions"].empty());
  EXPECT_TRUE(mp["agree"].get<bool>());
  const auto co = solve_report(load_game_spec(kFixtures + "/coordination.json"));
  EXPECT_EQ(co["solutions"], nlohmann::ordered_json::parse(R"([["A","A"],["B","B"]])"));
}

TEST(Solve, Hicks) {
  auto spec = load_game_spec(kFixtures + "/pd.json");
  spec.selection = {"hicks_sum"};
  const auto r = solve_report(spec);
  EXPECT_EQ(r["solutions"], nlohmann::ordered_json::parse(R"([["C","C"]])"));
  EXPECT_TRUE(r["agree"].get<bool>());
  EXPECT_TRUE(r["routes_agree"].get<bool>());
  EXPECT_EQ(r["routes"]["pushforward"], r["routes"]["reparametrised"]);
}

TEST(Solve, CapsRaise) {
  const auto spec = load_game_spec(kFixtures + "/pd.json");
  SolveOptions opts;
  opts.max_strategies = 3;
  EXPECT_THROW(solve_report(spec, opts), SizeError);
}

TEST(Run, SolveIsDeterministic) {
  const auto a = invoke({"solve", kFixtures + "/coordination.json"});
  const auto b = invoke({"solve", kFixtures + "/coordination.json"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(invoke({}).code, kUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kUsage);
  EXPECT_EQ(invoke({"solve"}).code, kUsage);
  EXPECT_EQ(invoke({"solve", kFixtures + "/pd.json", "--selection", "hicks_sum"}).code, kOk);
  EXPECT_EQ(invoke({"solve", kFixtures + "/pd.json", "--max-strategies", "2"}).code, kFailure);

  const auto bad = temp_path("bad.json");
  {
    std::ofstream out(bad);
    out << R"({"players": [{"name": "a", "strategies": ["x"]}], "payoffs": []})";
  }
  const auto r = invoke({"solve", bad.string()});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("/payoffs"), std::string::npos) << r.err;
  std::filesystem::remove(bad);
}

TEST(Run, Train) {
  const auto csv = temp_path("linreg.csv");
  const auto r = invoke({"train", "linreg", "--steps", "20", "--out", csv.string()});
  EXPECT_EQ(r.code, kOk) << r.err;
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "step,loss");
  std::filesystem::remove(csv);

  EXPECT_EQ(invoke({"train", "linreg", "--alpha", "fast"}).code, kUsage);
  EXPECT_EQ(invoke({"train", "unknown"}).code, kUsage);
  EXPECT_EQ(invoke({"train", "linreg", "--steps", "1", "--out", "/nonexistent/dir/x.csv"}).code,
            kFailure);
}

TEST(Run, CheckAndFaults) {
  const auto ok = invoke({"check", "--filter", "games.prisoners"});
  EXPECT_EQ(ok.code, kOk);
  EXPECT_NE(ok.out.find("PASS games.prisoners_dilemma"), std::string::npos) << ok.out;

  const auto gd = invoke({"check", "--filter", "learner.gradient_descent", "--inject-fault", "gd_sign"});
  EXPECT_EQ(gd.code, kFailure);
  EXPECT_NE(gd.out.find("FAIL learner.gradient_descent"), std::string::npos) << gd.out;

  // Changing the game changes the answer but both sides still agree.
  const auto pd = invoke({"check", "--filter", "games.prisoners", "--inject-fault", "pd_cooperate"});
  EXPECT_EQ(pd.code, kOk);
  EXPECT_NE(pd.out.find("[[\"C\",\"C\"]]"), std::string::npos) << pd.out;

  const auto list = invoke({"check", "--list"});
  EXPECT_EQ(list.code, kOk);
  for (const auto& n : check_names()) EXPECT_NE(list.out.find(n), std::string::npos);
}
