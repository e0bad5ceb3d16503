#pragma once

// Lenses over a cartesian base: a forward map `get` and a backward map
// `put : src.fwd × dst.bwd → src.bwd`. Over a cartesian base these are
// exactly the optics for the product action, with the forward input itself
// serving as the residual.

#include <string>
#include <utility>

#include "paraoptic/base.hpp"
#include "paraoptic/error.hpp"

namespace paraoptic {

// A pair ⟨fwd, bwd⟩ of carriers.
template <CartesianBase B>
struct LensObj {
  typename B::Object fwd;
  typename B::Object bwd;

  static LensObj unit() { return {B::unit(), B::unit()}; }

  std::string str() const {
    return "⟨" + B::describe(fwd) + ", " + B::describe(bwd) + "⟩";
  }

  friend bool operator==(const LensObj& a, const LensObj& b) {
    return B::same(a.fwd, b.fwd) && B::same(a.bwd, b.bwd);
  }
};

template <CartesianBase B>
LensObj<B> tensor_object(const LensObj<B>& a, const LensObj<B>& b) {
  return {B::product(a.fwd, b.fwd), B::product(a.bwd, b.bwd)};
}

template <CartesianBase B>
class Lens {
 public:
  using Object = typename B::Object;
  using Morphism = typename B::Morphism;
  using Element = typename B::Element;

  Lens(LensObj<B> src, LensObj<B> dst, Morphism get, Morphism put)
      : src_(std::move(src)), dst_(std::move(dst)), get_(std::move(get)), put_(std::move(put)) {
    if (!B::same(B::dom(get_), src_.fwd) || !B::same(B::cod(get_), dst_.fwd)) {
      throw CompositionError("lens get must map " + B::describe(src_.fwd) + " → " +
                             B::describe(dst_.fwd));
    }
    if (!B::same(B::dom(put_), B::product(src_.fwd, dst_.bwd)) ||
        !B::same(B::cod(put_), src_.bwd)) {
      throw CompositionError("lens put must map " +
                             B::describe(B::product(src_.fwd, dst_.bwd)) + " → " +
                             B::describe(src_.bwd));
    }
  }

  const LensObj<B>& src() const noexcept { return src_; }
  const LensObj<B>& dst() const noexcept { return dst_; }
  const Morphism& get() const noexcept { return get_; }
  const Morphism& put() const noexcept { return put_; }

  Element forward(const Element& x) const { return B::apply(get_, x); }
  Element backward(const Element& x, const Element& dy) const {
    return B::apply(put_, B::pair(src_.fwd, dst_.bwd, x, dy));
  }

 private:
  LensObj<B> src_;
  LensObj<B> dst_;
  Morphism get_;
  Morphism put_;
};

template <CartesianBase B>
Lens<B> lens_id(const LensObj<B>& a) {
  return Lens<B>(a, a, B::identity(a.fwd), B::proj2(a.fwd, a.bwd));
}

// get = l1.get ; l2.get, put(x, z') = l1.put(x, l2.put(l1.get(x), z')).
template <CartesianBase B>
Lens<B> lens_compose(const Lens<B>& l1, const Lens<B>& l2) {
  if (!(l1.dst() == l2.src())) {
    throw CompositionError("cannot compose lens ending at " + l1.dst().str() +
                           " with lens starting at " + l2.src().str());
  }
  const auto& x = l1.src().fwd;
  const auto& zb = l2.dst().bwd;
  const auto p1 = B::proj1(x, zb);
  const auto p2 = B::proj2(x, zb);
  const auto inner = B::compose(B::fanout(B::compose(p1, l1.get()), p2), l2.put());
  return Lens<B>(l1.src(), l2.dst(), B::compose(l1.get(), l2.get()),
                 B::compose(B::fanout(p1, inner), l1.put()));
}

template <CartesianBase B>
Lens<B> lens_tensor(const Lens<B>& l1, const Lens<B>& l2) {
  const auto swap_in = structural::interchange<B>(l1.src().fwd, l2.src().fwd,
                                                  l1.dst().bwd, l2.dst().bwd);
  return Lens<B>(tensor_object(l1.src(), l2.src()), tensor_object(l1.dst(), l2.dst()),
                 B::tensor(l1.get(), l2.get()),
                 B::compose(swap_in, B::tensor(l1.put(), l2.put())));
}

// A lens whose get is `fwd : src.fwd → dst.fwd` and whose put ignores the
// forward input and applies `bwd : dst.bwd → src.bwd`. With isomorphisms this
// gives the structural relabelling lenses.
template <CartesianBase B>
Lens<B> iso_lens(const LensObj<B>& src, const LensObj<B>& dst,
                 const typename B::Morphism& fwd, const typename B::Morphism& bwd) {
  return Lens<B>(src, dst, fwd, B::compose(B::proj2(src.fwd, dst.bwd), bwd));
}

// (a ⊗ b) ⊗ c → a ⊗ (b ⊗ c)
template <CartesianBase B>
Lens<B> lens_associator(const LensObj<B>& a, const LensObj<B>& b, const LensObj<B>& c) {
  return iso_lens<B>(tensor_object(tensor_object(a, b), c),
                     tensor_object(a, tensor_object(b, c)),
                     structural::assoc<B>(a.fwd, b.fwd, c.fwd),
                     structural::assoc_inv<B>(a.bwd, b.bwd, c.bwd));
}

template <CartesianBase B>
Lens<B> lens_associator_inv(const LensObj<B>& a, const LensObj<B>& b, const LensObj<B>& c) {
  return iso_lens<B>(tensor_object(a, tensor_object(b, c)),
                     tensor_object(tensor_object(a, b), c),
                     structural::assoc_inv<B>(a.fwd, b.fwd, c.fwd),
                     structural::assoc<B>(a.bwd, b.bwd, c.bwd));
}

// I ⊗ a → a
template <CartesianBase B>
Lens<B> lens_left_unitor(const LensObj<B>& a) {
  return iso_lens<B>(tensor_object(LensObj<B>::unit(), a), a,
                     structural::left_unitor<B>(a.fwd), structural::left_unitor_inv<B>(a.bwd));
}

// a → I ⊗ a
template <CartesianBase B>
Lens<B> lens_left_unitor_inv(const LensObj<B>& a) {
  return iso_lens<B>(a, tensor_object(LensObj<B>::unit(), a),
                     structural::left_unitor_inv<B>(a.fwd), structural::left_unitor<B>(a.bwd));
}

// a ⊗ I → a
template <CartesianBase B>
Lens<B> lens_right_unitor(const LensObj<B>& a) {
  return iso_lens<B>(tensor_object(a, LensObj<B>::unit()), a,
                     structural::right_unitor<B>(a.fwd), structural::right_unitor_inv<B>(a.bwd));
}

// a → a ⊗ I
template <CartesianBase B>
Lens<B> lens_right_unitor_inv(const LensObj<B>& a) {
  return iso_lens<B>(a, tensor_object(a, LensObj<B>::unit()),
                     structural::right_unitor_inv<B>(a.fwd), structural::right_unitor<B>(a.bwd));
}

template <CartesianBase B>
Lens<B> lens_symmetry(const LensObj<B>& a, const LensObj<B>& b) {
  return iso_lens<B>(tensor_object(a, b), tensor_object(b, a),
                     structural::swap<B>(a.fwd, b.fwd), structural::swap<B>(b.bwd, a.bwd));
}

// (a ⊗ b) ⊗ (c ⊗ d) → (a ⊗ c) ⊗ (b ⊗ d)
template <CartesianBase B>
Lens<B> lens_interchange(const LensObj<B>& a, const LensObj<B>& b, const LensObj<B>& c,
                         const LensObj<B>& d) {
  return iso_lens<B>(tensor_object(tensor_object(a, b), tensor_object(c, d)),
                     tensor_object(tensor_object(a, c), tensor_object(b, d)),
                     structural::interchange<B>(a.fwd, b.fwd, c.fwd, d.fwd),
                     structural::interchange<B>(a.bwd, c.bwd, b.bwd, d.bwd));
}

// A state I → a picking `point` from the forward carrier. Its put is the
// unique map to the unit.
template <CartesianBase B>
Lens<B> make_state(const LensObj<B>& a, const typename B::Element& point) {
  if (!B::contains(a.fwd, point)) {
    throw std::invalid_argument("state point is not an element of " + B::describe(a.fwd));
  }
  const auto unit = LensObj<B>::unit();
  return Lens<B>(unit, a, B::point(a.fwd, point),
                 B::terminal(B::product(unit.fwd, a.bwd)));
}

// A costate a → I with put(x, •) = f(x).
template <CartesianBase B>
Lens<B> make_costate(const LensObj<B>& a, const typename B::Morphism& f) {
  if (!B::same(B::dom(f), a.fwd) || !B::same(B::cod(f), a.bwd)) {
    throw CompositionError("costate of " + a.str() + " needs a map " + B::describe(a.fwd) +
                           " → " + B::describe(a.bwd) + ", got " + B::describe(B::dom(f)) +
                           " → " + B::describe(B::cod(f)));
  }
  const auto unit = LensObj<B>::unit();
  return Lens<B>(a, unit, B::terminal(a.fwd),
                 B::compose(B::proj1(a.fwd, unit.bwd), f));
}

// The map a.fwd → a.bwd underlying a costate.
template <CartesianBase B>
typename B::Morphism costate_function(const Lens<B>& costate) {
  if (!(costate.dst() == LensObj<B>::unit())) {
    throw CompositionError("not a costate: lens ends at " + costate.dst().str());
  }
  return B::compose(structural::right_unitor_inv<B>(costate.src().fwd), costate.put());
}

// The point selected by a state.
template <CartesianBase B>
typename B::Element state_point(const Lens<B>& state) {
  if (!(state.src() == LensObj<B>::unit())) {
    throw CompositionError("not a state: lens starts at " + state.src().str());
  }
  return state.forward(B::unique_point());
}

// Pointwise agreement of get and put. Only decidable over a finite base.
template <CartesianBase B>
bool lens_equal(const Lens<B>& l1, const Lens<B>& l2) {
  if constexpr (!B::kDecidableEquality) {
    throw UnsupportedOperation(std::string("lens equality is undecidable over the ") +
                               B::kName + " base");
  } else {
    return l1.src() == l2.src() && l1.dst() == l2.dst() && B::equal(l1.get(), l2.get()) &&
           B::equal(l1.put(), l2.put());
  }
}

}  // namespace paraoptic
