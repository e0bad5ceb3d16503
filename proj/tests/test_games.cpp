#include <gtest/gtest.h>

#include "paraoptic/error.hpp"
#include "paraoptic/games.hpp"
#include "support.hpp"

using namespace paraoptic;
using namespace testing_support;

namespace {

std::vector<std::vector<std::string>> labels_of(const OpenGame& game,
                                                const std::vector<std::size_t>& states,
                                                std::size_t players) {
  std::vector<std::vector<std::string>> out;
  for (auto s : states) out.push_back(unnest(game.lens().params().omega.label(s), players));
  return out;
}

using Profiles = std::vector<std::vector<std::string>>;

// Profiles maximising the payoff total, by direct enumeration.
Profiles hicks_oracle(const NormalFormGame& g) {
  Payoff best = 0;
  bool first = true;
  for (const auto& row : g.payoffs) {
    Payoff t = 0;
    for (const auto& v : row) t += v;
    if (first || t > best) best = t;
    first = false;
  }
  Profiles out;
  for (std::uint64_t p = 0; p < g.payoffs.size(); ++p) {
    Payoff t = 0;
    for (const auto& v : g.payoffs[p]) t += v;
    if (t != best) continue;
    std::vector<std::string> prof;
    std::uint64_t rest = p;
    std::vector<std::size_t> idx(g.players());
    for (std::size_t i = g.players(); i-- > 0;) {
      idx[i] = rest % g.strategies[i].size();
      rest /= g.strategies[i].size();
    }
    for (std::size_t i = 0; i < g.players(); ++i) prof.push_back(g.strategies[i].label(idx[i]).str());
    out.push_back(prof);
  }
  return out;
}

}  // namespace

TEST(Decision, NoObservationIsABendingWire) {
  const auto y = FinSet::atoms({"C", "D"});
  const auto d = decision(FinSet::unit(), y, FinSet::payoff_grid({0, 1}));
  EXPECT_EQ(d.params().omega, y);
  EXPECT_EQ(d.carrier().forward(Label::pair(Label::atom("D"), FinSet::unit().label(0))),
            Label::atom("D"));
}

TEST(Decision, StrategyCount) {
  const auto d = decision(FinSet::atoms({"x1", "x2"}), FinSet::atoms({"y1", "y2"}),
                          FinSet::payoff_grid({0}));
  EXPECT_EQ(d.params().omega.size(), 4u);
}

TEST(Decision, ConstantStrategyPlaysConstantly) {
  const auto x = FinSet::atoms({"a", "b", "c"});
  const auto y = FinSet::atoms({"u", "v"});
  const auto d = decision(x, y, FinSet::payoff_grid({0, 1}));
  const auto omega = d.params().omega;
  const auto constant_v = omega.label(omega.size() - 1);  // [a->v,b->v,c->v]
  EXPECT_EQ(constant_v.str(), "[a->v,b->v,c->v]");
  for (const auto& xl : x.labels()) {
    EXPECT_EQ(d.carrier().forward(Label::pair(constant_v, xl)), Label::atom("v"));
    // The reward flows back to the parameter port untouched.
    const auto back = d.carrier().backward(Label::pair(constant_v, xl), Label::payoff(1));
    EXPECT_EQ(back.first(), Label::payoff(1));
  }
}

TEST(Decision, CapOnStrategies) {
  EXPECT_THROW(decision(FinSet::atoms({"a", "b", "c"}), FinSet::atoms({"u", "v"}),
                        FinSet::payoff_grid({0}), 7),
               SizeError);
}

TEST(Context, DecisionContextIsTheCostate) {
  Rng rng(101);
  const auto y = FinSet::atoms({"u", "v", "w"});
  const auto grid = FinSet::payoff_grid({0, 1, 2});
  const OpenGame game(decision(FinSet::unit(), y, grid), argmax_rel(y, grid));
  for (int i = 0; i < 10; ++i) {
    const auto k = random_fn(rng, y, grid);
    EXPECT_EQ(context(game, FinSet::unit().label(0), k), k);
  }
}

TEST(Context, PrisonersScalarIsThePayoffTable) {
  const auto g = prisoners_dilemma();
  const auto game = nash_game(g);
  const auto unit = FinLensObj::unit();
  const auto k = context(game, make_state(unit, FinSet::unit().label(0)),
                         make_costate(unit, FinFn::identity(FinSet::unit())));
  EXPECT_EQ(k, g.payoff_fn());
}

TEST(Context, LensCompositionAgreesWithDirectFormula) {
  Rng rng(102);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_obj(rng), b = random_obj(rng);
    const auto p = random_para(rng, a, b);
    const OpenGame game(p, total_rel(p.params()));
    const auto h = a.fwd.label(pick(rng, 0, a.fwd.size() - 1));
    const auto k = random_fn(rng, b.fwd, b.bwd);
    ASSERT_EQ(context(game, h, k), context_direct(game, h, k));
  }
}

TEST(Equilibria, PrisonersDilemma) {
  const auto g = prisoners_dilemma();
  const auto u = FinSet::unit();
  const auto nash = nash_game(g);
  EXPECT_EQ(labels_of(nash, equilibria(nash, u.label(0), FinFn::identity(u)), 2),
            (Profiles{{"D", "D"}}));
  const auto hicks = hicks_game_pushforward(g);
  EXPECT_EQ(labels_of(hicks, equilibria(hicks, u.label(0), FinFn::identity(u)), 2),
            (Profiles{{"C", "C"}}));
  const auto total = nash_game(g, {PlayerSelection::kTotal, PlayerSelection::kTotal});
  EXPECT_EQ(equilibria(total, u.label(0), FinFn::identity(u)).size(), 4u);
}

TEST(SolutionSet, PrisonersNashAndHicksAreDisjoint) {
  const auto g = prisoners_dilemma();
  const auto nash = labels_of(nash_game(g), solution_set(nash_game(g)), 2);
  const auto reparam = hicks_game_reparametrised(g);
  const auto pushed = hicks_game_pushforward(g);
  const auto h1 = labels_of(reparam, solution_set(reparam), 2);
  const auto h2 = labels_of(pushed, solution_set(pushed), 2);
  EXPECT_EQ(nash, (Profiles{{"D", "D"}}));
  EXPECT_EQ(h1, (Profiles{{"C", "C"}}));
  EXPECT_EQ(h2, h1);
  for (const auto& p : nash) EXPECT_EQ(std::count(h1.begin(), h1.end(), p), 0);
}

TEST(SolutionSet, HicksRoutesDifferInParameters) {
  const auto g = prisoners_dilemma();
  const auto reparam = hicks_game_reparametrised(g);
  const auto pushed = hicks_game_pushforward(g);
  EXPECT_EQ(reparam.lens().params().omega, pushed.lens().params().omega);
  EXPECT_FALSE(reparam.lens().params().comega == pushed.lens().params().comega);
}

TEST(SolutionSet, OnePlayerConstantPayoff) {
  NormalFormGame g;
  g.names = {"solo"};
  g.strategies = {FinSet::atoms({"a", "b", "c"})};
  g.payoffs = {{4}, {4}, {4}};
  EXPECT_EQ(solution_set(nash_game(g)).size(), 3u);
}

TEST(SolutionSet, NonScalarThrows) {
  const auto y = FinSet::atoms({"C", "D"});
  const auto grid = FinSet::payoff_grid({0});
  const OpenGame game(decision(FinSet::unit(), y, grid), argmax_rel(y, grid));
  EXPECT_THROW(solution_set(game), CompositionError);
}

TEST(OpenGame, RelationMustSitOnParameters) {
  const auto y = FinSet::atoms({"C", "D"});
  const auto grid = FinSet::payoff_grid({0});
  EXPECT_THROW(OpenGame(decision(FinSet::unit(), y, grid), argmax_rel(FinSet::atoms({"C"}), grid)),
               CompositionError);
}

TEST(BruteForce, KnownGames) {
  EXPECT_EQ(brute_force_nash(prisoners_dilemma()), (std::vector<std::uint64_t>{3}));
  EXPECT_TRUE(brute_force_nash(matching_pennies()).empty());
  NormalFormGame g;
  g.names = {"a", "b"};
  g.strategies = {FinSet::atoms({"x", "y"}), FinSet::atoms({"x", "y", "z"})};
  g.payoffs = {{1, 0}, {0, 2}, {5, 5}, {0, 0}, {1, 1}, {0, 3}};
  const auto eq = brute_force_nash(g);
  EXPECT_NE(std::find(eq.begin(), eq.end(), 2u), eq.end());
  EXPECT_THROW(brute_force_nash(g, 5), SizeError);
}

TEST(NormalForm, Validation) {
  auto g = prisoners_dilemma();
  g.payoffs.pop_back();
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = prisoners_dilemma();
  g.payoffs[0].push_back(1);
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(NormalForm, ProfileIndexRoundTrip) {
  Rng rng(103);
  for (int i = 0; i < 20; ++i) {
    const auto g = random_game(rng);
    for (std::uint64_t p = 0; p < g.profile_count(); ++p) ASSERT_EQ(g.profile_index(g.profile(p)), p);
  }
}

TEST(OracleEquivalence, RandomGames) {
  Rng rng(104);
  for (int i = 0; i < 250; ++i) {
    const auto g = random_game(rng);
    const auto game = nash_game(g);
    ASSERT_EQ(labels_of(game, solution_set(game), g.players()), nash_oracle(g)) << "game " << i;
  }
}

TEST(OracleEquivalence, HicksRoutesOnRandomGames) {
  Rng rng(105);
  for (int i = 0; i < 60; ++i) {
    const auto g = random_game(rng, 2, 3);
    const auto a = hicks_game_reparametrised(g);
    const auto b = hicks_game_pushforward(g);
    const auto sa = labels_of(a, solution_set(a), g.players());
    ASSERT_EQ(sa, labels_of(b, solution_set(b), g.players()));
    ASSERT_EQ(sa, hicks_oracle(g));
  }
}

TEST(OracleEquivalence, MixedSelections) {
  Rng rng(106);
  for (int i = 0; i < 40; ++i) {
    const auto g = random_game(rng, 3, 3);
    std::vector<PlayerSelection> sel;
    for (std::size_t k = 0; k < g.players(); ++k) {
      sel.push_back(pick(rng, 0, 1) ? PlayerSelection::kArgmax : PlayerSelection::kTotal);
    }
    const auto got = solution_set(nash_game(g, sel));
    const auto want = brute_force_nash(g, sel);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k) ASSERT_EQ(got[k], want[k]);
  }
}

TEST(LabelSum, NestedPayoffs) {
  const auto l = Label::pair(Label::pair(Label::payoff(Payoff(1, 2)), Label::payoff(2)),
                             Label::payoff(-1));
  EXPECT_EQ(label_sum(l), Payoff(3, 2));
  EXPECT_THROW(label_sum(Label::atom("x")), std::invalid_argument);
}
