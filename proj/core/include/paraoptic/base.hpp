#pragma once

#include <concepts>
#include <string>

namespace paraoptic {

// A cartesian monoidal category that lenses can be built over. The
// product is the monoidal structure, `unit()` is the terminal object, and
// elements are global points used to evaluate morphisms.
template <class B>
concept CartesianBase = requires(const typename B::Object& a,
                                 const typename B::Morphism& f,
                                 const typename B::Element& x) {
  { B::kDecidableEquality } -> std::convertible_to<bool>;
  { B::unit() } -> std::convertible_to<typename B::Object>;
  { B::product(a, a) } -> std::convertible_to<typename B::Object>;
  { B::same(a, a) } -> std::convertible_to<bool>;
  { B::describe(a) } -> std::convertible_to<std::string>;
  { B::dom(f) } -> std::convertible_to<typename B::Object>;
  { B::cod(f) } -> std::convertible_to<typename B::Object>;
  { B::identity(a) } -> std::convertible_to<typename B::Morphism>;
  { B::compose(f, f) } -> std::convertible_to<typename B::Morphism>;
  { B::tensor(f, f) } -> std::convertible_to<typename B::Morphism>;
  { B::fanout(f, f) } -> std::convertible_to<typename B::Morphism>;
  { B::proj1(a, a) } -> std::convertible_to<typename B::Morphism>;
  { B::proj2(a, a) } -> std::convertible_to<typename B::Morphism>;
  { B::terminal(a) } -> std::convertible_to<typename B::Morphism>;
  { B::point(a, x) } -> std::convertible_to<typename B::Morphism>;
  { B::contains(a, x) } -> std::convertible_to<bool>;
  { B::apply(f, x) } -> std::convertible_to<typename B::Element>;
  { B::pair(a, a, x, x) } -> std::convertible_to<typename B::Element>;
  { B::first(a, a, x) } -> std::convertible_to<typename B::Element>;
  { B::second(a, a, x) } -> std::convertible_to<typename B::Element>;
};

// Structural isomorphisms, written once against the cartesian interface.
namespace structural {

// (a × b) × c → a × (b × c)
template <CartesianBase B>
typename B::Morphism assoc(const typename B::Object& a, const typename B::Object& b,
                           const typename B::Object& c) {
  const auto ab = B::product(a, b);
  const auto outer1 = B::proj1(ab, c);
  return B::fanout(B::compose(outer1, B::proj1(a, b)),
                   B::fanout(B::compose(outer1, B::proj2(a, b)), B::proj2(ab, c)));
}

// a × (b × c) → (a × b) × c
template <CartesianBase B>
typename B::Morphism assoc_inv(const typename B::Object& a, const typename B::Object& b,
                               const typename B::Object& c) {
  const auto bc = B::product(b, c);
  const auto outer2 = B::proj2(a, bc);
  return B::fanout(B::fanout(B::proj1(a, bc), B::compose(outer2, B::proj1(b, c))),
                   B::compose(outer2, B::proj2(b, c)));
}

// a × b → b × a
template <CartesianBase B>
typename B::Morphism swap(const typename B::Object& a, const typename B::Object& b) {
  return B::fanout(B::proj2(a, b), B::proj1(a, b));
}

// (a × b) × (c × d) → (a × c) × (b × d)
template <CartesianBase B>
typename B::Morphism interchange(const typename B::Object& a, const typename B::Object& b,
                                 const typename B::Object& c, const typename B::Object& d) {
  const auto ab = B::product(a, b);
  const auto cd = B::product(c, d);
  const auto left = B::proj1(ab, cd);
  const auto right = B::proj2(ab, cd);
  return B::fanout(
      B::fanout(B::compose(left, B::proj1(a, b)), B::compose(right, B::proj1(c, d))),
      B::fanout(B::compose(left, B::proj2(a, b)), B::compose(right, B::proj2(c, d))));
}

// 1 × a → a and back.
template <CartesianBase B>
typename B::Morphism left_unitor(const typename B::Object& a) {
  return B::proj2(B::unit(), a);
}
template <CartesianBase B>
typename B::Morphism left_unitor_inv(const typename B::Object& a) {
  return B::fanout(B::terminal(a), B::identity(a));
}

// a × 1 → a and back.
template <CartesianBase B>
typename B::Morphism right_unitor(const typename B::Object& a) {
  return B::proj1(a, B::unit());
}
template <CartesianBase B>
typename B::Morphism right_unitor_inv(const typename B::Object& a) {
  return B::fanout(B::identity(a), B::terminal(a));
}

}  // namespace structural
}  // namespace paraoptic
