#include "paraoptic/games.hpp"

#include <algorithm>
#include <stdexcept>

#include "paraoptic/error.hpp"

namespace paraoptic {

OpenGame::OpenGame(const FinParaLens& lens, SelectionRelation sel)
    : lens_(flatten_params(lens)), sel_(std::move(sel)) {
  if (!(sel_.obj() == lens_.params())) {
    throw CompositionError(sel_.name() + " lives on " + sel_.obj().str() +
                           " but the game has parameters " + lens_.params().str());
  }
}

FinParaLens decision(const FinSet& observations, const FinSet& moves, const FinSet& rewards,
                     std::uint64_t cap) {
  const FinSet strategies = function_space(observations, moves, cap);
  const FinSet& unit = FinSet::unit();
  const std::size_t nx = observations.size();

  std::vector<std::size_t> get(strategies.size() * nx);
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const auto sigma = nth_function(observations, moves, s);
    for (std::size_t x = 0; x < nx; ++x) get[s * nx + x] = sigma(x);
  }
  const FinSet spliced = FinSet::product(strategies, observations);
  // ((σ, x), r) ↦ (r, •)
  std::vector<std::size_t> put(spliced.size() * rewards.size());
  for (std::size_t i = 0; i < put.size(); ++i) put[i] = i % rewards.size();

  FinLens carrier({spliced, FinSet::product(rewards, unit)}, {moves, rewards},
                  FinFn(spliced, moves, std::move(get)),
                  FinFn(FinSet::product(spliced, rewards), FinSet::product(rewards, unit),
                        std::move(put)));
  return FinParaLens({strategies, rewards}, {observations, unit}, {moves, rewards},
                     std::move(carrier));
}

FinFn context(const OpenGame& game, const FinLens& h, const FinLens& k) {
  const auto& p = game.lens();
  const auto params = p.params().as_lens_obj();
  const auto closed =
      lens_compose(lens_compose(lens_compose(lens_right_unitor_inv(params),
                                             lens_tensor(lens_id(params), h)),
                                p.carrier()),
                   k);
  return costate_function(closed);
}

FinFn context(const OpenGame& game, const Label& h, const FinFn& k) {
  return context(game, make_state(game.lens().src(), h), make_costate(game.lens().dst(), k));
}

FinFn context_direct(const OpenGame& game, const Label& h, const FinFn& k) {
  const auto& p = game.lens();
  const auto& c = p.carrier();
  if (!(k.dom() == p.dst().fwd) || !(k.cod() == p.dst().bwd)) {
    throw CompositionError("context costate must map " + p.dst().fwd.str() + " → " +
                           p.dst().bwd.str());
  }
  const std::size_t x = p.src().fwd.index_of(h);
  const std::size_t nx = p.src().fwd.size();
  const std::size_t nyb = p.dst().bwd.size();
  const std::size_t nxb = p.src().bwd.size();
  std::vector<std::size_t> table(p.params().omega.size());
  for (std::size_t w = 0; w < table.size(); ++w) {
    const std::size_t in = w * nx + x;
    const std::size_t r = k(c.get()(in));
    table[w] = c.put()(in * nyb + r) / nxb;
  }
  return FinFn(p.params().omega, p.params().comega, std::move(table));
}

namespace {

std::vector<std::size_t> accepted(const OpenGame& game, const FinFn& K) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < K.dom().size(); ++w) {
    if (game.sel().accepts(w, K)) out.push_back(w);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> equilibria(const OpenGame& game, const FinLens& h, const FinLens& k) {
  return accepted(game, context(game, h, k));
}

std::vector<std::size_t> equilibria(const OpenGame& game, const Label& h, const FinFn& k) {
  return accepted(game, context(game, h, k));
}

std::vector<std::size_t> solution_set(const OpenGame& game) {
  return accepted(game, costate_function(para_costate_solution_input(game.lens())));
}

Payoff label_sum(const Label& reward) {
  switch (reward.kind()) {
    case Label::Kind::kPayoff:
      return reward.as_payoff();
    case Label::Kind::kPair:
      return label_sum(reward.first()) + label_sum(reward.second());
    case Label::Kind::kAtom:
      break;
  }
  throw std::invalid_argument("reward " + reward.str() + " is not built from payoffs");
}

FinLens sum_of_payoffs_lens(const FinSet& omega, const FinSet& rewards) {
  std::vector<Payoff> sums;
  sums.reserve(rewards.size());
  for (const auto& r : rewards.labels()) sums.push_back(label_sum(r));
  const FinSet grid = FinSet::payoff_grid(sums);
  std::vector<std::size_t> to_grid(rewards.size());
  for (std::size_t r = 0; r < rewards.size(); ++r) {
    to_grid[r] = grid.index_of(Label::payoff(sums[r]));
  }
  std::vector<std::size_t> put(omega.size() * rewards.size());
  for (std::size_t i = 0; i < put.size(); ++i) put[i] = to_grid[i % rewards.size()];
  return FinLens({omega, grid}, {omega, rewards}, FinFn::identity(omega),
                 FinFn(FinSet::product(omega, rewards), grid, std::move(put)));
}

std::uint64_t NormalFormGame::profile_count() const {
  std::uint64_t n = 1;
  for (const auto& s : strategies) {
    if (s.size() != 0 && n > UINT64_MAX / s.size()) return UINT64_MAX;
    n *= s.size();
  }
  return n;
}

std::vector<std::size_t> NormalFormGame::profile(std::uint64_t index) const {
  std::vector<std::size_t> out(players());
  for (std::size_t i = players(); i-- > 0;) {
    out[i] = static_cast<std::size_t>(index % strategies[i].size());
    index /= strategies[i].size();
  }
  return out;
}

std::uint64_t NormalFormGame::profile_index(const std::vector<std::size_t>& prof) const {
  if (prof.size() != players()) throw std::invalid_argument("profile has the wrong arity");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < players(); ++i) {
    if (prof[i] >= strategies[i].size()) {
      throw std::out_of_range("strategy index out of range for player " + std::to_string(i));
    }
    index = index * strategies[i].size() + prof[i];
  }
  return index;
}

void NormalFormGame::validate() const {
  if (players() == 0) throw std::invalid_argument("a game needs at least one player");
  if (!names.empty() && names.size() != players()) {
    throw std::invalid_argument("player names do not match the number of players");
  }
  for (std::size_t i = 0; i < players(); ++i) {
    if (strategies[i].empty()) {
      throw std::invalid_argument("player " + std::to_string(i) + " has no strategies");
    }
  }
  if (payoffs.size() != profile_count()) {
    throw std::invalid_argument("payoff table has " + std::to_string(payoffs.size()) +
                                " rows for " + std::to_string(profile_count()) + " profiles");
  }
  for (std::size_t p = 0; p < payoffs.size(); ++p) {
    if (payoffs[p].size() != players()) {
      throw std::invalid_argument("profile " + std::to_string(p) + " has " +
                                  std::to_string(payoffs[p].size()) + " payoffs for " +
                                  std::to_string(players()) + " players");
    }
  }
}

FinSet NormalFormGame::profile_set() const {
  return detail::left_product<FiniteBase>(strategies);
}

FinSet NormalFormGame::reward_grid(std::size_t player) const {
  std::vector<Payoff> values;
  values.reserve(payoffs.size());
  for (const auto& row : payoffs) values.push_back(row.at(player));
  return FinSet::payoff_grid(std::move(values));
}

FinSet NormalFormGame::reward_set() const {
  std::vector<FinSet> grids;
  for (std::size_t i = 0; i < players(); ++i) grids.push_back(reward_grid(i));
  return detail::left_product<FiniteBase>(grids);
}

FinFn NormalFormGame::payoff_fn() const {
  validate();
  std::vector<FinSet> grids;
  for (std::size_t i = 0; i < players(); ++i) grids.push_back(reward_grid(i));
  std::vector<std::size_t> table(payoffs.size());
  for (std::size_t p = 0; p < payoffs.size(); ++p) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < players(); ++i) {
      index = index * grids[i].size() + grids[i].index_of(Label::payoff(payoffs[p][i]));
    }
    table[p] = index;
  }
  return FinFn(profile_set(), detail::left_product<FiniteBase>(grids), std::move(table));
}

FinParaLens normal_form_scalar(const NormalFormGame& g, std::uint64_t cap) {
  g.validate();
  if (g.profile_count() > cap) throw SizeError("strategy profiles", g.profile_count(), cap);
  std::optional<FinParaLens> players;
  for (std::size_t i = 0; i < g.players(); ++i) {
    auto d = decision(FinSet::unit(), g.strategies[i], g.reward_grid(i), cap);
    players = players ? para_tensor(*players, d) : d;
  }
  const auto start = embed_trivial(make_state(players->src(), players->src().fwd.label(0)));
  const auto payoff = embed_trivial(make_costate(players->dst(), g.payoff_fn()));
  return flatten_params(para_compose(para_compose(start, *players), payoff));
}

OpenGame nash_game(const NormalFormGame& g, const std::vector<PlayerSelection>& players,
                   std::uint64_t cap) {
  if (players.size() != g.players()) {
    throw std::invalid_argument("one selection per player expected");
  }
  const auto scalar = normal_form_scalar(g, cap);
  std::optional<SelectionRelation> sel;
  for (std::size_t i = 0; i < g.players(); ++i) {
    const FinSet grid = g.reward_grid(i);
    auto rel = players[i] == PlayerSelection::kArgmax
                   ? argmax_rel(g.strategies[i], grid)
                   : total_rel({g.strategies[i], grid});
    sel = sel ? nash_product(*sel, rel) : rel;
  }
  return OpenGame(scalar, *sel);
}

OpenGame nash_game(const NormalFormGame& g, std::uint64_t cap) {
  return nash_game(g, std::vector<PlayerSelection>(g.players(), PlayerSelection::kArgmax), cap);
}

OpenGame hicks_game_reparametrised(const NormalFormGame& g, std::uint64_t cap) {
  const auto scalar = normal_form_scalar(g, cap);
  const auto sum = sum_of_payoffs_lens(scalar.params().omega, scalar.params().comega);
  const auto agent = reparametrise(scalar, sum);
  return OpenGame(agent, argmax_rel(sum.src().fwd, sum.src().bwd));
}

OpenGame hicks_game_pushforward(const NormalFormGame& g, std::uint64_t cap) {
  const auto scalar = normal_form_scalar(g, cap);
  const auto sum = sum_of_payoffs_lens(scalar.params().omega, scalar.params().comega);
  return OpenGame(scalar, sel_pushforward(sum, argmax_rel(sum.src().fwd, sum.src().bwd), cap));
}

std::vector<std::uint64_t> brute_force_nash(const NormalFormGame& g, std::uint64_t cap) {
  return brute_force_nash(g, std::vector<PlayerSelection>(g.players(), PlayerSelection::kArgmax),
                          cap);
}

std::vector<std::uint64_t> brute_force_nash(const NormalFormGame& g,
                                            const std::vector<PlayerSelection>& players,
                                            std::uint64_t cap) {
  g.validate();
  if (players.size() != g.players()) {
    throw std::invalid_argument("one selection per player expected");
  }
  const auto n = g.profile_count();
  if (n > cap) throw SizeError("strategy profiles", n, cap);
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 0; p < n; ++p) {
    const auto prof = g.profile(p);
    bool stable = true;
    for (std::size_t i = 0; i < g.players() && stable; ++i) {
      if (players[i] != PlayerSelection::kArgmax) continue;
      auto dev = prof;
      for (std::size_t s = 0; s < g.strategies[i].size(); ++s) {
        dev[i] = s;
        if (g.payoffs[g.profile_index(dev)][i] > g.payoffs[p][i]) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.push_back(p);
  }
  return out;
}

std::vector<std::uint64_t> brute_force_hicks(const NormalFormGame& g, std::uint64_t cap) {
  g.validate();
  const auto n = g.profile_count();
  if (n > cap) throw SizeError("strategy profiles", n, cap);
  std::vector<Payoff> total(n);
  for (std::uint64_t p = 0; p < n; ++p) {
    for (const auto& v : g.payoffs[p]) total[p] += v;
  }
  const Payoff best = *std::max_element(total.begin(), total.end());
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 0; p < n; ++p) {
    if (total[p] == best) out.push_back(p);
  }
  return out;
}

NormalFormGame prisoners_dilemma() {
  NormalFormGame g;
  g.names = {"row", "column"};
  g.strategies = {FinSet::atoms({"C", "D"}), FinSet::atoms({"C", "D"})};
  g.payoffs = {{2, 2}, {0, 3}, {3, 0}, {1, 1}};
  return g;
}

NormalFormGame matching_pennies() {
  NormalFormGame g;
  g.names = {"matcher", "mismatcher"};
  g.strategies = {FinSet::atoms({"H", "T"}), FinSet::atoms({"H", "T"})};
  g.payoffs = {{1, -1}, {-1, 1}, {-1, 1}, {1, -1}};
  return g;
}

}  // namespace paraoptic
