#pragma once

// Selection relations over the finite base: predicates on (state, costate)
// pairs of a parameter object ⟨Ω, Ω̄⟩, i.e. on a choice ω ∈ Ω and a context
// k : Ω → Ω̄. Includes the pushforward along a lens, the Nash product, and
// the morphism condition of the category of relation-equipped objects.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "paraoptic/finite.hpp"
#include "paraoptic/para.hpp"

namespace paraoptic {

using FinLens = Lens<FiniteBase>;
using FinLensObj = LensObj<FiniteBase>;
using FinParamObj = ParamObj<FiniteBase>;
using FinParaLens = ParaLens<FiniteBase>;

class SelectionRelation {
 public:
  using Predicate = std::function<bool(std::size_t state, const FinFn& costate)>;

  SelectionRelation(FinParamObj obj, Predicate accepts, std::string name = "relation")
      : obj_(std::move(obj)), accepts_(std::move(accepts)), name_(std::move(name)) {}

  const FinParamObj& obj() const noexcept { return obj_; }
  const std::string& name() const noexcept { return name_; }

  // `costate` must map obj.omega → obj.comega; throws CompositionError
  // otherwise.
  bool accepts(std::size_t state, const FinFn& costate) const;
  bool accepts(const Label& state, const FinFn& costate) const {
    return accepts(obj_.omega.index_of(state), costate);
  }

 private:
  FinParamObj obj_;
  Predicate accepts_;
  std::string name_;
};

// Accepts (x, k) iff k(x) ≥ k(x') for every x'. The reward carrier must be
// labelled by payoffs; comparison is exact. Throws std::invalid_argument
// for an empty choice set.
SelectionRelation argmax_rel(const FinSet& choices, const FinSet& rewards);

// Accepts everything.
SelectionRelation total_rel(const FinParamObj& obj);

// The precomposite f ; k of a lens with a costate, as a function
// f.src.fwd → f.src.bwd: x ↦ put_f(x, k(get_f(x))).
FinFn pull_costate(const FinLens& f, const FinFn& k);

// Relation on f.dst accepting (y, k) iff some x with get_f(x) = y has
// eps(x, f ; k). Throws SizeError when f.src.fwd has more than `cap` states.
SelectionRelation sel_pushforward(const FinLens& f, const SelectionRelation& eps,
                                  std::uint64_t cap = kDefaultEnumerationCap);

// Relation on the tensor object accepting ((x, y), k) iff eps(x, k_y) and
// delta(y, k_x), where k_y(x') is the first reward component of k(x', y)
// and k_x(y') the second component of k(x, y').
SelectionRelation nash_product(const SelectionRelation& eps, const SelectionRelation& delta);

// For all states h and costates k of f.dst: eps(h, f ; k) ⇒ delta(get h, k).
// Throws SizeError when the costate space of f.dst exceeds `cap`.
bool is_sel_morphism(const FinLens& f, const SelectionRelation& eps,
                     const SelectionRelation& delta, std::uint64_t cap = kDefaultEnumerationCap);

struct RelationWitness {
  std::size_t state;
  FinFn costate;
};

// A pair on which the two relations disagree, by exhaustive enumeration of
// states and costates. Throws SizeError above `cap` costates.
std::optional<RelationWitness> find_disagreement(const SelectionRelation& a,
                                                 const SelectionRelation& b,
                                                 std::uint64_t cap = kDefaultEnumerationCap);

// A pair accepted by `a` but not by `b`.
std::optional<RelationWitness> find_non_inclusion(const SelectionRelation& a,
                                                  const SelectionRelation& b,
                                                  std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace paraoptic
