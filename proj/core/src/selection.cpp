#include "paraoptic/selection.hpp"

#include <stdexcept>
#include <vector>

#include "paraoptic/error.hpp"

namespace paraoptic {

bool SelectionRelation::accepts(std::size_t state, const FinFn& costate) const {
  if (!(costate.dom() == obj_.omega) || !(costate.cod() == obj_.comega)) {
    throw CompositionError(name_ + " expects a context " + obj_.omega.str() + " → " +
                           obj_.comega.str() + ", got " + costate.dom().str() + " → " +
                           costate.cod().str());
  }
  if (state >= obj_.omega.size()) {
    throw std::out_of_range(name_ + ": state index " + std::to_string(state) + " out of range");
  }
  return accepts_(state, costate);
}

SelectionRelation argmax_rel(const FinSet& choices, const FinSet& rewards) {
  if (choices.empty()) throw std::invalid_argument("argmax over an empty choice set");
  for (const auto& l : rewards.labels()) {
    if (!l.is_payoff()) {
      throw std::invalid_argument("argmax needs payoff-labelled rewards, found " + l.str());
    }
  }
  std::vector<Payoff> value(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) value[i] = rewards.label(i).as_payoff();
  return SelectionRelation(
      {choices, rewards},
      [value](std::size_t x, const FinFn& k) {
        const auto& kx = value[k(x)];
        for (std::size_t other = 0; other < k.dom().size(); ++other) {
          if (value[k(other)] > kx) return false;
        }
        return true;
      },
      "argmax");
}

SelectionRelation total_rel(const FinParamObj& obj) {
  return SelectionRelation(obj, [](std::size_t, const FinFn&) { return true; }, "total");
}

FinFn pull_costate(const FinLens& f, const FinFn& k) {
  if (!(k.dom() == f.dst().fwd) || !(k.cod() == f.dst().bwd)) {
    throw CompositionError("costate " + k.dom().str() + " → " + k.cod().str() +
                           " does not fit the lens codomain " + f.dst().str());
  }
  const std::size_t rb = f.dst().bwd.size();
  std::vector<std::size_t> table(f.src().fwd.size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    table[x] = f.put()(x * rb + k(f.get()(x)));
  }
  return FinFn(f.src().fwd, f.src().bwd, std::move(table));
}

SelectionRelation sel_pushforward(const FinLens& f, const SelectionRelation& eps,
                                  std::uint64_t cap) {
  if (!(f.src() == eps.obj().as_lens_obj())) {
    throw CompositionError("cannot push " + eps.name() + " on " + eps.obj().str() +
                           " along a lens out of " + f.src().str());
  }
  if (f.src().fwd.size() > cap) {
    throw SizeError("pushforward state enumeration", f.src().fwd.size(), cap);
  }
  // Fibres of get, computed once.
  std::vector<std::vector<std::size_t>> fibre(f.dst().fwd.size());
  for (std::size_t x = 0; x < f.src().fwd.size(); ++x) fibre[f.get()(x)].push_back(x);
  return SelectionRelation(
      ParamObj<FiniteBase>::from(f.dst()),
      [f, eps, fibre](std::size_t y, const FinFn& k) {
        if (fibre[y].empty()) return false;
        const auto pulled = pull_costate(f, k);
        for (auto x : fibre[y]) {
          if (eps.accepts(x, pulled)) return true;
        }
        return false;
      },
      "push(" + eps.name() + ")");
}

SelectionRelation nash_product(const SelectionRelation& eps, const SelectionRelation& delta) {
  const FinParamObj obj{FinSet::product(eps.obj().omega, delta.obj().omega),
                        FinSet::product(eps.obj().comega, delta.obj().comega)};
  const std::size_t nx = eps.obj().omega.size();
  const std::size_t ny = delta.obj().omega.size();
  const std::size_t ry = delta.obj().comega.size();
  return SelectionRelation(
      obj,
      [eps, delta, nx, ny, ry](std::size_t s, const FinFn& k) {
        const std::size_t x = s / ny;
        const std::size_t y = s % ny;
        std::vector<std::size_t> ky(nx), kx(ny);
        for (std::size_t xi = 0; xi < nx; ++xi) ky[xi] = k(xi * ny + y) / ry;
        if (!eps.accepts(x, FinFn(eps.obj().omega, eps.obj().comega, std::move(ky)))) {
          return false;
        }
        for (std::size_t yi = 0; yi < ny; ++yi) kx[yi] = k(x * ny + yi) % ry;
        return delta.accepts(y, FinFn(delta.obj().omega, delta.obj().comega, std::move(kx)));
      },
      "(" + eps.name() + " ⊠ " + delta.name() + ")");
}

bool is_sel_morphism(const FinLens& f, const SelectionRelation& eps,
                     const SelectionRelation& delta, std::uint64_t cap) {
  if (!(f.src() == eps.obj().as_lens_obj()) || !(f.dst() == delta.obj().as_lens_obj())) {
    throw CompositionError("lens " + f.src().str() + " → " + f.dst().str() +
                           " does not connect " + eps.obj().str() + " to " + delta.obj().str());
  }
  const auto count = function_count(f.dst().fwd.size(), f.dst().bwd.size());
  if (count > cap) throw SizeError("costate enumeration", count, cap);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto k = nth_function(f.dst().fwd, f.dst().bwd, i);
    const auto pulled = pull_costate(f, k);
    for (std::size_t h = 0; h < f.src().fwd.size(); ++h) {
      if (eps.accepts(h, pulled) && !delta.accepts(f.get()(h), k)) return false;
    }
  }
  return true;
}

namespace {

template <class Bad>
std::optional<RelationWitness> search(const SelectionRelation& a, const SelectionRelation& b,
                                      std::uint64_t cap, Bad bad) {
  if (!(a.obj() == b.obj())) {
    throw CompositionError("relations live on different objects: " + a.obj().str() + " and " +
                           b.obj().str());
  }
  const auto& omega = a.obj().omega;
  const auto& comega = a.obj().comega;
  const auto count = function_count(omega.size(), comega.size());
  if (count > cap) throw SizeError("costate enumeration", count, cap);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto k = nth_function(omega, comega, i);
    for (std::size_t s = 0; s < omega.size(); ++s) {
      if (bad(a.accepts(s, k), b.accepts(s, k))) return RelationWitness{s, std::move(k)};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<RelationWitness> find_disagreement(const SelectionRelation& a,
                                                 const SelectionRelation& b, std::uint64_t cap) {
  return search(a, b, cap, [](bool x, bool y) { return x != y; });
}

std::optional<RelationWitness> find_non_inclusion(const SelectionRelation& a,
                                                  const SelectionRelation& b, std::uint64_t cap) {
  return search(a, b, cap, [](bool x, bool y) { return x && !y; });
}

}  // namespace paraoptic
