#pragma once

// Parametrised lenses. A ParaLens X → Y with parameter pair ⟨Ω, Ω̄⟩ is a lens
// ⟨Ω × X, Ω̄ × X'⟩ → ⟨Y, Y'⟩: parameters flow in on the forward pass and
// parameter feedback flows out on the backward pass.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paraoptic/lens.hpp"

namespace paraoptic {

template <CartesianBase B>
struct ParamObj {
  typename B::Object omega;
  typename B::Object comega;

  static ParamObj unit() { return {B::unit(), B::unit()}; }
  static ParamObj from(const LensObj<B>& a) { return {a.fwd, a.bwd}; }
  LensObj<B> as_lens_obj() const { return {omega, comega}; }

  std::string str() const { return as_lens_obj().str(); }

  friend bool operator==(const ParamObj& a, const ParamObj& b) {
    return a.as_lens_obj() == b.as_lens_obj();
  }
};

// How a parameter object was assembled by composition and tensor. Leaves
// are atomic parameter objects; the unit node is the trivial parameter.
template <CartesianBase B>
class ParamShape {
 public:
  enum class Kind { kUnit, kLeaf, kPair };

  static ParamShape unit() { return ParamShape(std::make_shared<Node>(Node{Kind::kUnit, {}, {}, {}})); }
  static ParamShape leaf(ParamObj<B> obj) {
    return ParamShape(std::make_shared<Node>(Node{Kind::kLeaf, std::move(obj), {}, {}}));
  }
  static ParamShape pair(ParamShape left, ParamShape right) {
    return ParamShape(std::make_shared<Node>(
        Node{Kind::kPair, {}, std::move(left.node_), std::move(right.node_)}));
  }

  Kind kind() const noexcept { return node_->kind; }
  const ParamObj<B>& leaf_object() const { return *node_->leaf; }
  ParamShape left() const { return ParamShape(node_->left); }
  ParamShape right() const { return ParamShape(node_->right); }

  // The parameter object this tree denotes.
  ParamObj<B> object() const {
    switch (kind()) {
      case Kind::kUnit:
        return ParamObj<B>::unit();
      case Kind::kLeaf:
        return leaf_object();
      case Kind::kPair: {
        const auto l = left().object();
        const auto r = right().object();
        return {B::product(l.omega, r.omega), B::product(l.comega, r.comega)};
      }
    }
    return ParamObj<B>::unit();
  }

  // Leaves from left to right.
  std::vector<ParamObj<B>> leaves() const {
    std::vector<ParamObj<B>> out;
    collect(*this, out);
    return out;
  }

  std::size_t leaf_count() const { return leaves().size(); }

  std::string str() const {
    switch (kind()) {
      case Kind::kUnit:
        return "I";
      case Kind::kLeaf:
        return leaf_object().str();
      case Kind::kPair:
        return "(" + left().str() + " ⊗ " + right().str() + ")";
    }
    return {};
  }

 private:
  struct Node {
    Kind kind;
    std::optional<ParamObj<B>> leaf;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };
  explicit ParamShape(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static void collect(const ParamShape& s, std::vector<ParamObj<B>>& out) {
    switch (s.kind()) {
      case Kind::kUnit:
        return;
      case Kind::kLeaf:
        out.push_back(s.leaf_object());
        return;
      case Kind::kPair:
        collect(s.left(), out);
        collect(s.right(), out);
        return;
    }
  }

  std::shared_ptr<const Node> node_;
};

template <CartesianBase B>
class ParaLens {
 public:
  ParaLens(ParamObj<B> params, LensObj<B> src, LensObj<B> dst, Lens<B> carrier,
           ParamShape<B> shape)
      : params_(std::move(params)),
        src_(std::move(src)),
        dst_(std::move(dst)),
        carrier_(std::move(carrier)),
        shape_(std::move(shape)) {
    const auto spliced = tensor_object(params_.as_lens_obj(), src_);
    if (!(carrier_.src() == spliced) || !(carrier_.dst() == dst_)) {
      throw CompositionError("parametrised lens carrier must map " + spliced.str() + " → " +
                             dst_.str() + ", got " + carrier_.src().str() + " → " +
                             carrier_.dst().str());
    }
    if (!(shape_.object() == params_)) {
      throw CompositionError("parameter shape " + shape_.str() +
                             " does not denote the parameter object " + params_.str());
    }
  }

  // A single-leaf parametrised lens (unit shape when params is the unit).
  ParaLens(ParamObj<B> params, LensObj<B> src, LensObj<B> dst, Lens<B> carrier)
      : ParaLens(params, std::move(src), std::move(dst), std::move(carrier),
                 params == ParamObj<B>::unit() ? ParamShape<B>::unit()
                                              : ParamShape<B>::leaf(params)) {}

  const ParamObj<B>& params() const noexcept { return params_; }
  const LensObj<B>& src() const noexcept { return src_; }
  const LensObj<B>& dst() const noexcept { return dst_; }
  const Lens<B>& carrier() const noexcept { return carrier_; }
  const ParamShape<B>& shape() const noexcept { return shape_; }

  bool is_scalar() const { return src_ == LensObj<B>::unit() && dst_ == LensObj<B>::unit(); }

 private:
  ParamObj<B> params_;
  LensObj<B> src_;
  LensObj<B> dst_;
  Lens<B> carrier_;
  ParamShape<B> shape_;
};

// p1 : X → Y by M and p2 : Y → Z by N give X → Z by N ⊗ M: the second
// parameter sits leftmost.
template <CartesianBase B>
ParaLens<B> para_compose(const ParaLens<B>& p1, const ParaLens<B>& p2) {
  if (!(p1.dst() == p2.src())) {
    throw CompositionError("cannot compose parametrised lens ending at " + p1.dst().str() +
                           " with one starting at " + p2.src().str());
  }
  const auto m = p1.params().as_lens_obj();
  const auto n = p2.params().as_lens_obj();
  const auto carrier = lens_compose(
      lens_compose(lens_associator(n, m, p1.src()), lens_tensor(lens_id(n), p1.carrier())),
      p2.carrier());
  const auto nm = tensor_object(n, m);
  return ParaLens<B>(ParamObj<B>::from(nm), p1.src(), p2.dst(), carrier,
                     ParamShape<B>::pair(p2.shape(), p1.shape()));
}

// Parameters M ⊗ N; the mixed interchanger routes (M ⊗ N) ⊗ (X ⊗ X') to
// (M ⊗ X) ⊗ (N ⊗ X') before the two carriers run side by side.
template <CartesianBase B>
ParaLens<B> para_tensor(const ParaLens<B>& p1, const ParaLens<B>& p2) {
  const auto m = p1.params().as_lens_obj();
  const auto n = p2.params().as_lens_obj();
  const auto carrier = lens_compose(lens_interchange(m, n, p1.src(), p2.src()),
                                    lens_tensor(p1.carrier(), p2.carrier()));
  return ParaLens<B>(ParamObj<B>::from(tensor_object(m, n)),
                     tensor_object(p1.src(), p2.src()), tensor_object(p1.dst(), p2.dst()),
                     carrier, ParamShape<B>::pair(p1.shape(), p2.shape()));
}

// Precompose `r` on the parameter port. The new parameter object is r.src;
// `shape` describes it and defaults to p's shape when r keeps the object,
// otherwise to a single leaf.
template <CartesianBase B>
ParaLens<B> reparametrise(const ParaLens<B>& p, const Lens<B>& r,
                          std::optional<ParamShape<B>> shape = std::nullopt) {
  if (!(r.dst() == p.params().as_lens_obj())) {
    throw CompositionError("reparametrisation must end at the parameter object " +
                           p.params().str() + ", got " + r.dst().str());
  }
  const auto params = ParamObj<B>::from(r.src());
  if (!shape) {
    if (params == p.params()) {
      shape = p.shape();
    } else if (params == ParamObj<B>::unit()) {
      shape = ParamShape<B>::unit();
    } else {
      shape = ParamShape<B>::leaf(params);
    }
  }
  const auto carrier = lens_compose(lens_tensor(r, lens_id(p.src())), p.carrier());
  return ParaLens<B>(params, p.src(), p.dst(), carrier, *shape);
}

// Trivial parametrisation by the unit.
template <CartesianBase B>
ParaLens<B> embed_trivial(const Lens<B>& l) {
  return ParaLens<B>(ParamObj<B>::unit(), l.src(), l.dst(),
                     lens_compose(lens_left_unitor(l.src()), l),
                     ParamShape<B>::unit());
}

namespace detail {

// Left-associated product of objects; the unit for an empty list.
template <CartesianBase B>
typename B::Object left_product(const std::vector<typename B::Object>& objs) {
  if (objs.empty()) return B::unit();
  auto acc = objs.front();
  for (std::size_t i = 1; i < objs.size(); ++i) acc = B::product(acc, objs[i]);
  return acc;
}

// Component selector over a parameter object.
template <CartesianBase B>
using Component = typename B::Object (*)(const ParamObj<B>&);

template <CartesianBase B>
typename B::Object omega_of(const ParamObj<B>& p) { return p.omega; }
template <CartesianBase B>
typename B::Object comega_of(const ParamObj<B>& p) { return p.comega; }

// Projection from the left-associated product of `objs` onto entry k.
template <CartesianBase B>
typename B::Morphism canonical_projection(const std::vector<typename B::Object>& objs,
                                          std::size_t k) {
  std::vector<typename B::Object> prefix{objs.front()};
  for (std::size_t i = 1; i < objs.size(); ++i) prefix.push_back(B::product(prefix.back(), objs[i]));
  auto proj = B::identity(prefix.back());
  for (std::size_t j = objs.size() - 1; j > k; --j) {
    proj = B::compose(proj, B::proj1(prefix[j - 1], objs[j]));
  }
  if (k > 0) proj = B::compose(proj, B::proj2(prefix[k - 1], objs[k]));
  return proj;
}

// Map from the canonical product of the non-unit leaves onto the tree's
// nested product. `next` walks the leaves left to right.
template <CartesianBase B>
typename B::Morphism canonical_to_tree(const ParamShape<B>& s, Component<B> part,
                                       const std::vector<typename B::Object>& objs,
                                       const typename B::Object& canonical, std::size_t& next) {
  using Kind = typename ParamShape<B>::Kind;
  switch (s.kind()) {
    case Kind::kUnit:
      return B::terminal(canonical);
    case Kind::kLeaf:
      return canonical_projection<B>(objs, next++);
    case Kind::kPair: {
      auto l = canonical_to_tree<B>(s.left(), part, objs, canonical, next);
      auto r = canonical_to_tree<B>(s.right(), part, objs, canonical, next);
      return B::fanout(l, r);
    }
  }
  return B::identity(canonical);
}

// Projections from the tree's nested product onto each leaf, left to right.
template <CartesianBase B>
void tree_projections(const ParamShape<B>& s, Component<B> part, const typename B::Morphism& path,
                      std::vector<typename B::Morphism>& out) {
  using Kind = typename ParamShape<B>::Kind;
  switch (s.kind()) {
    case Kind::kUnit:
      return;
    case Kind::kLeaf:
      out.push_back(path);
      return;
    case Kind::kPair: {
      const auto l = part(s.left().object());
      const auto r = part(s.right().object());
      tree_projections<B>(s.left(), part, B::compose(path, B::proj1(l, r)), out);
      tree_projections<B>(s.right(), part, B::compose(path, B::proj2(l, r)), out);
      return;
    }
  }
}

template <CartesianBase B>
typename B::Morphism tree_to_canonical(const ParamShape<B>& s, Component<B> part) {
  const auto tree_obj = part(s.object());
  std::vector<typename B::Morphism> projs;
  tree_projections<B>(s, part, B::identity(tree_obj), projs);
  if (projs.empty()) return B::terminal(tree_obj);
  auto acc = projs.front();
  for (std::size_t i = 1; i < projs.size(); ++i) acc = B::fanout(acc, projs[i]);
  return acc;
}

}  // namespace detail

// The relabelling lens from the canonical flat parameter object (left-
// associated product of the non-unit leaves) onto p's nested parameters.
template <CartesianBase B>
Lens<B> flattening_lens(const ParamShape<B>& shape) {
  const auto leaves = shape.leaves();
  std::vector<typename B::Object> omegas, comegas;
  for (const auto& l : leaves) {
    omegas.push_back(l.omega);
    comegas.push_back(l.comega);
  }
  const typename B::Object canon_omega = detail::left_product<B>(omegas);
  const typename B::Object canon_comega = detail::left_product<B>(comegas);
  std::size_t next = 0;
  const auto fwd = detail::canonical_to_tree<B>(shape, &detail::omega_of<B>, omegas,
                                                canon_omega, next);
  const auto bwd = detail::tree_to_canonical<B>(shape, &detail::comega_of<B>);
  return iso_lens<B>({canon_omega, canon_comega}, shape.object().as_lens_obj(), fwd, bwd);
}

// Collapse the parameter tree to one leaf carrying the left-associated
// product of its non-unit leaves. Behaviour is unchanged up to that
// relabelling; a leaf or unit shape is returned as is.
template <CartesianBase B>
ParaLens<B> flatten_params(const ParaLens<B>& p) {
  using Kind = typename ParamShape<B>::Kind;
  if (p.shape().kind() != Kind::kPair) return p;
  const auto r = flattening_lens<B>(p.shape());
  const auto flat = ParamObj<B>::from(r.src());
  const auto shape = p.shape().leaf_count() == 0 ? ParamShape<B>::unit() : ParamShape<B>::leaf(flat);
  return reparametrise<B>(p, r, shape);
}

// For a scalar p : I → I, the costate ⟨Ω, Ω̄⟩ → I it induces on its
// parameters. Over the finite base this is a function Ω → Ω̄.
template <CartesianBase B>
Lens<B> para_costate_solution_input(const ParaLens<B>& p) {
  if (!p.is_scalar()) {
    throw CompositionError("expected a scalar I → I, got " + p.src().str() + " → " +
                           p.dst().str());
  }
  const auto params = p.params().as_lens_obj();
  return lens_compose(lens_right_unitor_inv(params), p.carrier());
}

}  // namespace paraoptic
