#pragma once

// Finite sets with symbolic labels and tabulated total functions between
// them. This is the base category for the game-theoretic instantiation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

namespace paraoptic {

// Exact payoff value. boost::rational keeps lowest terms with a positive
// denominator.
using Payoff = boost::rational<std::int64_t>;

std::string to_string(const Payoff& p);
// Accepts "n", "n/d", "-n/d" and decimals such as "0.05".
Payoff parse_payoff(const std::string& text);

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// A label is an atom, an exact payoff, or a pair of labels. Pairs are the
// labels of product sets and render as "(l1,l2)".
class Label {
 public:
  enum class Kind { kAtom, kPayoff, kPair };

  Label() : Label(atom("")) {}

  static Label atom(std::string name);
  static Label payoff(Payoff value);
  static Label pair(Label first, Label second);

  Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }
  bool is_atom() const noexcept { return kind() == Kind::kAtom; }
  bool is_payoff() const noexcept { return kind() == Kind::kPayoff; }
  bool is_pair() const noexcept { return kind() == Kind::kPair; }

  const std::string& as_atom() const;
  const Payoff& as_payoff() const;
  const Label& first() const;
  const Label& second() const;

  std::string str() const;
  std::size_t hash() const noexcept;

  friend bool operator==(const Label& a, const Label& b);
  friend bool operator<(const Label& a, const Label& b);

 private:
  using PairPtr = std::shared_ptr<const std::pair<Label, Label>>;
  explicit Label(std::variant<std::string, Payoff, PairPtr> v)
      : value_(std::move(v)) {}

  std::variant<std::string, Payoff, PairPtr> value_;
};

struct LabelHash {
  std::size_t operator()(const Label& l) const noexcept { return l.hash(); }
};

// Ordered set of pairwise distinct labels. Iteration follows declaration
// order. Copies share the immutable label table.
class FinSet {
 public:
  FinSet();  // the empty set
  explicit FinSet(std::vector<Label> labels);

  static FinSet atoms(std::initializer_list<std::string> names);
  static FinSet atoms(const std::vector<std::string>& names);
  // Sorted payoff labels.
  static FinSet payoff_grid(std::vector<Payoff> values);
  // The one-element set {•}.
  static const FinSet& unit();
  // Pair labels (a,b) in row-major order: index(a_i, b_j) = i * |b| + j.
  static FinSet product(const FinSet& a, const FinSet& b);

  std::size_t size() const noexcept { return impl_->labels.size(); }
  bool empty() const noexcept { return size() == 0; }
  const Label& label(std::size_t i) const { return impl_->labels.at(i); }
  const std::vector<Label>& labels() const noexcept { return impl_->labels; }
  std::optional<std::size_t> find(const Label& l) const;
  // Throws std::out_of_range naming the label.
  std::size_t index_of(const Label& l) const;
  bool contains(const Label& l) const { return find(l).has_value(); }

  std::string str() const;

  friend bool operator==(const FinSet& a, const FinSet& b);

 private:
  // The label index is built on first lookup; product sets are usually
  // addressed by index arithmetic only.
  struct Impl {
    std::vector<Label> labels;
    mutable std::once_flag index_once;
    mutable std::unordered_map<Label, std::size_t, LabelHash> index;
    const std::unordered_map<Label, std::size_t, LabelHash>& lookup() const;
  };
  explicit FinSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

// Total function between finite sets, stored as an index table.
class FinFn {
 public:
  FinFn() = default;
  FinFn(FinSet dom, FinSet cod, std::vector<std::size_t> table);

  static FinFn identity(const FinSet& x);
  static FinFn constant(const FinSet& dom, const FinSet& cod, const Label& value);
  static FinFn from_labels(const FinSet& dom, const FinSet& cod,
                           const std::function<Label(const Label&)>& f);

  const FinSet& dom() const noexcept { return dom_; }
  const FinSet& cod() const noexcept { return cod_; }
  const std::vector<std::size_t>& table() const noexcept { return table_; }

  std::size_t operator()(std::size_t i) const { return table_[i]; }
  Label operator()(const Label& x) const {
    return cod_.label(table_[dom_.index_of(x)]);
  }

  std::string str() const;

  friend bool operator==(const FinFn& a, const FinFn& b);

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<std::size_t> table_;
};

// f then g. Throws CompositionError when f.cod != g.dom.
FinFn fn_compose(const FinFn& f, const FinFn& g);
// Componentwise action on the product of domains.
FinFn fn_product(const FinFn& f, const FinFn& g);
// x ↦ (f(x), g(x)).
FinFn fn_fanout(const FinFn& f, const FinFn& g);
FinFn fn_proj1(const FinSet& a, const FinSet& b);
FinFn fn_proj2(const FinSet& a, const FinSet& b);

// |cod|^|dom|, saturating at UINT64_MAX.
std::uint64_t function_count(std::size_t dom_size, std::size_t cod_size);

// All total functions dom → cod in lexicographic order of their tables
// (first domain element most significant). Throws SizeError above `cap`.
std::vector<FinFn> enumerate_functions(const FinSet& dom, const FinSet& cod,
                                       std::uint64_t cap = kDefaultEnumerationCap);

// The i-th function in the order of enumerate_functions, without enumerating.
FinFn nth_function(const FinSet& dom, const FinSet& cod, std::uint64_t i);

// Finite set of functions dom → cod, indexed like enumerate_functions. When
// dom has a single element the labels are those of cod (the exponential is
// canonically isomorphic to cod); otherwise each label is an atom rendering
// the table, e.g. "[a->x,b->y]".
FinSet function_space(const FinSet& dom, const FinSet& cod,
                      std::uint64_t cap = kDefaultEnumerationCap);

// The finite base category: finite sets, tabulated functions, and the
// cartesian product. Elements are labels.
struct FiniteBase {
  using Object = FinSet;
  using Morphism = FinFn;
  using Element = Label;

  static constexpr bool kDecidableEquality = true;
  static constexpr const char* kName = "finite";

  static FinSet unit() { return FinSet::unit(); }
  static Label unique_point() { return FinSet::unit().label(0); }
  static FinSet product(const FinSet& a, const FinSet& b) { return FinSet::product(a, b); }
  static bool same(const FinSet& a, const FinSet& b) { return a == b; }
  static std::string describe(const FinSet& a) { return a.str(); }

  static const FinSet& dom(const FinFn& f) { return f.dom(); }
  static const FinSet& cod(const FinFn& f) { return f.cod(); }
  static FinFn identity(const FinSet& a) { return FinFn::identity(a); }
  static FinFn compose(const FinFn& f, const FinFn& g) { return fn_compose(f, g); }
  static FinFn tensor(const FinFn& f, const FinFn& g) { return fn_product(f, g); }
  static FinFn fanout(const FinFn& f, const FinFn& g) { return fn_fanout(f, g); }
  static FinFn proj1(const FinSet& a, const FinSet& b) { return fn_proj1(a, b); }
  static FinFn proj2(const FinSet& a, const FinSet& b) { return fn_proj2(a, b); }
  static FinFn terminal(const FinSet& a) {
    return FinFn(a, unit(), std::vector<std::size_t>(a.size(), 0));
  }
  static FinFn point(const FinSet& a, const Label& x) {
    return FinFn::constant(unit(), a, x);
  }
  static bool contains(const FinSet& a, const Label& x) { return a.contains(x); }
  static Label apply(const FinFn& f, const Label& x) { return f(x); }
  static Label pair(const FinSet&, const FinSet&, const Label& x, const Label& y) {
    return Label::pair(x, y);
  }
  static Label first(const FinSet&, const FinSet&, const Label& xy) { return xy.first(); }
  static Label second(const FinSet&, const FinSet&, const Label& xy) { return xy.second(); }
  static bool equal(const FinFn& f, const FinFn& g) { return f == g; }
};

}  // namespace paraoptic
