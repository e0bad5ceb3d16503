#pragma once

// Open games: parametrised lenses over the finite base whose parameter
// port carries a selection relation. Decisions, the context a game induces
// on its parameters, equilibria, solution sets, and normal-form games with
// a brute-force equilibrium oracle.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "paraoptic/selection.hpp"

namespace paraoptic {

class OpenGame {
 public:
  // The lens is flattened; `sel` must live on the flattened parameters.
  OpenGame(const FinParaLens& lens, SelectionRelation sel);

  const FinParaLens& lens() const noexcept { return lens_; }
  const SelectionRelation& sel() const noexcept { return sel_; }

 private:
  FinParaLens lens_;
  SelectionRelation sel_;
};

// A choice of an element of `moves` after observing an element of
// `observations`, with rewards in `rewards`. Parameters ⟨moves^observations,
// rewards⟩; get((σ, x)) = σ(x); put((σ, x), r) = (r, •). With a single
// observation the strategy set is `moves` itself.
FinParaLens decision(const FinSet& observations, const FinSet& moves, const FinSet& rewards,
                     std::uint64_t cap = kDefaultEnumerationCap);

// The costate K_{h,k} : Ω → Ω̄ obtained by closing the game with the state h
// on its source and the costate k on its target, via lens composition.
FinFn context(const OpenGame& game, const FinLens& h, const FinLens& k);
FinFn context(const OpenGame& game, const Label& h, const FinFn& k);

// The same costate from the play and utility tables directly:
// ω ↦ U(ω, h, k(P(ω, h))).
FinFn context_direct(const OpenGame& game, const Label& h, const FinFn& k);

// Parameter states ω (as indices into Ω, ascending) with sel(ω, K_{h,k}).
std::vector<std::size_t> equilibria(const OpenGame& game, const FinLens& h, const FinLens& k);
std::vector<std::size_t> equilibria(const OpenGame& game, const Label& h, const FinFn& k);

// Equilibria of a scalar game in its unique context. Throws
// CompositionError for non-scalar games.
std::vector<std::size_t> solution_set(const OpenGame& game);

// Sum of the payoff components of a reward label (nested pairs of payoffs).
Payoff label_sum(const Label& reward);

// The lens ⟨Ω, S⟩ → ⟨Ω, Ω̄⟩ with get = id and put(ω, r) = sum of the
// components of r, where S is the set of all such sums.
FinLens sum_of_payoffs_lens(const FinSet& omega, const FinSet& rewards);

// n-player normal-form game. Profiles are indexed in mixed radix with the
// first player most significant, which is also the order of the
// left-associated product of strategy sets.
struct NormalFormGame {
  std::vector<std::string> names;
  std::vector<FinSet> strategies;
  // payoffs[profile][player]
  std::vector<std::vector<Payoff>> payoffs;

  std::size_t players() const { return strategies.size(); }
  std::uint64_t profile_count() const;
  std::vector<std::size_t> profile(std::uint64_t index) const;
  std::uint64_t profile_index(const std::vector<std::size_t>& profile) const;
  // Throws std::invalid_argument when the payoff table is not total or has
  // the wrong arity.
  void validate() const;

  // Strategy profiles as the left-associated product of strategy sets.
  FinSet profile_set() const;
  // Each player's observed payoff values as a sorted grid.
  FinSet reward_grid(std::size_t player) const;
  // Left-associated product of the reward grids.
  FinSet reward_set() const;
  // Profile ↦ tuple of payoffs, into reward_set().
  FinFn payoff_fn() const;
};

enum class PlayerSelection { kArgmax, kTotal };

// The scalar game I → I: the players' decisions in parallel, closed by the
// payoff costate, with flattened parameters ⟨Π strategies, Π grids⟩.
FinParaLens normal_form_scalar(const NormalFormGame& g,
                               std::uint64_t cap = kDefaultEnumerationCap);

// Nash product of the per-player relations over the scalar's parameters.
OpenGame nash_game(const NormalFormGame& g, const std::vector<PlayerSelection>& players,
                   std::uint64_t cap = kDefaultEnumerationCap);
OpenGame nash_game(const NormalFormGame& g, std::uint64_t cap = kDefaultEnumerationCap);

// One agent maximising the sum of payoffs: the scalar reparametrised by the
// sum-of-payoffs lens, coupled to argmax over the summed rewards.
OpenGame hicks_game_reparametrised(const NormalFormGame& g,
                                   std::uint64_t cap = kDefaultEnumerationCap);
// The same agent as the unmodified scalar coupled to argmax pushed forward
// along the sum-of-payoffs lens.
OpenGame hicks_game_pushforward(const NormalFormGame& g,
                                std::uint64_t cap = kDefaultEnumerationCap);

// Profiles (as profile indices, ascending) where no player whose selection
// is argmax has a strictly improving unilateral deviation. Throws SizeError
// above `cap` profiles.
std::vector<std::uint64_t> brute_force_nash(const NormalFormGame& g,
                                            std::uint64_t cap = kDefaultEnumerationCap);
std::vector<std::uint64_t> brute_force_nash(const NormalFormGame& g,
                                            const std::vector<PlayerSelection>& players,
                                            std::uint64_t cap = kDefaultEnumerationCap);
// Profiles maximising the total payoff.
std::vector<std::uint64_t> brute_force_hicks(const NormalFormGame& g,
                                             std::uint64_t cap = kDefaultEnumerationCap);

// The prisoner's dilemma with (C,C)=(2,2), (C,D)=(0,3), (D,C)=(3,0),
// (D,D)=(1,1).
NormalFormGame prisoners_dilemma();
// Payoffs ±1, antisymmetric; no pure equilibrium.
NormalFormGame matching_pennies();

}  // namespace paraoptic
