#include "paraoptic/finite.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "paraoptic/error.hpp"

namespace paraoptic {

std::string to_string(const Payoff& p) {
  if (p.denominator() == 1) return std::to_string(p.numerator());
  return std::to_string(p.numerator()) + "/" + std::to_string(p.denominator());
}

Payoff parse_payoff(const std::string& text) {
  auto parse_int = [&](const std::string& s) -> std::int64_t {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a rational: \"" + text + "\"");
    }
    if (used != s.size() || s.empty()) {
      throw std::invalid_argument("not a rational: \"" + text + "\"");
    }
    return v;
  };
  const auto dot = text.find('.');
  if (dot != std::string::npos && text.find('/') == std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 18 || frac.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("not a rational: \"" + text + "\"");
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::string whole = text.substr(0, dot);
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
    const std::int64_t f = parse_int(frac);
    return Payoff(w * scale + (negative ? -f : f), scale);
  }
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Payoff(parse_int(text));
  const auto num = parse_int(text.substr(0, slash));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: \"" + text + "\"");
  return Payoff(num, den);
}

// ---------------------------------------------------------------- Label

Label Label::atom(std::string name) { return Label(std::move(name)); }

Label Label::payoff(Payoff value) { return Label(value); }

Label Label::pair(Label first, Label second) {
  return Label(std::make_shared<const std::pair<Label, Label>>(std::move(first),
                                                              std::move(second)));
}

const std::string& Label::as_atom() const {
  if (!is_atom()) throw std::logic_error("label " + str() + " is not an atom");
  return std::get<std::string>(value_);
}

const Payoff& Label::as_payoff() const {
  if (!is_payoff()) throw std::logic_error("label " + str() + " is not a payoff");
  return std::get<Payoff>(value_);
}

const Label& Label::first() const {
  if (!is_pair()) throw std::logic_error("label " + str() + " is not a pair");
  return std::get<PairPtr>(value_)->first;
}

const Label& Label::second() const {
  if (!is_pair()) throw std::logic_error("label " + str() + " is not a pair");
  return std::get<PairPtr>(value_)->second;
}

std::string Label::str() const {
  switch (kind()) {
    case Kind::kAtom:
      return std::get<std::string>(value_);
    case Kind::kPayoff:
      return to_string(std::get<Payoff>(value_));
    case Kind::kPair:
      return "(" + first().str() + "," + second().str() + ")";
  }
  return {};
}

std::size_t Label::hash() const noexcept {
  auto mix = [](std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  };
  switch (kind()) {
    case Kind::kAtom:
      return mix(1, std::hash<std::string>{}(std::get<std::string>(value_)));
    case Kind::kPayoff: {
      const auto& p = std::get<Payoff>(value_);
      return mix(mix(2, std::hash<std::int64_t>{}(p.numerator())),
                 std::hash<std::int64_t>{}(p.denominator()));
    }
    case Kind::kPair: {
      const auto& pp = std::get<PairPtr>(value_);
      return mix(mix(3, pp->first.hash()), pp->second.hash());
    }
  }
  return 0;
}

bool operator==(const Label& a, const Label& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Label::Kind::kAtom:
      return std::get<std::string>(a.value_) == std::get<std::string>(b.value_);
    case Label::Kind::kPayoff:
      return std::get<Payoff>(a.value_) == std::get<Payoff>(b.value_);
    case Label::Kind::kPair: {
      const auto& pa = std::get<Label::PairPtr>(a.value_);
      const auto& pb = std::get<Label::PairPtr>(b.value_);
      return pa == pb || (pa->first == pb->first && pa->second == pb->second);
    }
  }
  return false;
}

bool operator<(const Label& a, const Label& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Label::Kind::kAtom:
      return std::get<std::string>(a.value_) < std::get<std::string>(b.value_);
    case Label::Kind::kPayoff:
      return std::get<Payoff>(a.value_) < std::get<Payoff>(b.value_);
    case Label::Kind::kPair: {
      if (a.first() == b.first()) return a.second() < b.second();
      return a.first() < b.first();
    }
  }
  return false;
}

// ---------------------------------------------------------------- FinSet

FinSet::FinSet() : FinSet(std::vector<Label>{}) {}

const std::unordered_map<Label, std::size_t, LabelHash>& FinSet::Impl::lookup() const {
  std::call_once(index_once, [this] {
    index.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  });
  return index;
}

FinSet::FinSet(std::vector<Label> labels) {
  auto impl = std::make_shared<Impl>();
  impl->labels = std::move(labels);
  if (impl->lookup().size() != impl->labels.size()) {
    std::unordered_map<Label, std::size_t, LabelHash> seen;
    for (const auto& l : impl->labels) {
      if (++seen[l] > 1) {
        throw std::invalid_argument("duplicate label " + l.str() + " in finite set");
      }
    }
  }
  impl_ = std::move(impl);
}

FinSet FinSet::atoms(std::initializer_list<std::string> names) {
  return atoms(std::vector<std::string>(names));
}

FinSet FinSet::atoms(const std::vector<std::string>& names) {
  std::vector<Label> labels;
  labels.reserve(names.size());
  for (const auto& n : names) labels.push_back(Label::atom(n));
  return FinSet(std::move(labels));
}

FinSet FinSet::payoff_grid(std::vector<Payoff> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Label> labels;
  labels.reserve(values.size());
  for (const auto& v : values) labels.push_back(Label::payoff(v));
  return FinSet(std::move(labels));
}

const FinSet& FinSet::unit() {
  static const FinSet one = FinSet::atoms({"•"});
  return one;
}

namespace {

// Products are rebuilt constantly by lens composition. Results are cached
// per pair of live factor tables so repeated products share one table and
// compare equal by pointer.
struct ProductCache {
  struct Entry {
    std::weak_ptr<const void> a;
    std::weak_ptr<const void> b;
    std::weak_ptr<const void> result;
  };
  std::mutex mutex;
  std::map<std::pair<const void*, const void*>, Entry> entries;
};

ProductCache& product_cache() {
  static ProductCache cache;
  return cache;
}

}  // namespace

FinSet FinSet::product(const FinSet& a, const FinSet& b) {
  auto& cache = product_cache();
  const auto key = std::make_pair(static_cast<const void*>(a.impl_.get()),
                                  static_cast<const void*>(b.impl_.get()));
  {
    std::lock_guard lock(cache.mutex);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) {
      if (!it->second.a.expired() && !it->second.b.expired()) {
        if (auto hit = it->second.result.lock()) {
          return FinSet(std::static_pointer_cast<const Impl>(hit));
        }
      }
      cache.entries.erase(it);
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->labels.reserve(a.size() * b.size());
  for (const auto& la : a.labels()) {
    for (const auto& lb : b.labels()) impl->labels.push_back(Label::pair(la, lb));
  }
  std::shared_ptr<const Impl> result = std::move(impl);
  {
    std::lock_guard lock(cache.mutex);
    if (cache.entries.size() > 4096) {
      std::erase_if(cache.entries, [](const auto& kv) {
        return kv.second.a.expired() || kv.second.b.expired() || kv.second.result.expired();
      });
    }
    cache.entries[key] = {a.impl_, b.impl_, result};
  }
  return FinSet(std::move(result));
}

std::optional<std::size_t> FinSet::find(const Label& l) const {
  const auto& index = impl_->lookup();
  auto it = index.find(l);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t FinSet::index_of(const Label& l) const {
  if (auto i = find(l)) return *i;
  throw std::out_of_range("label " + l.str() + " not in " + str());
}

std::string FinSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ",";
    out += label(i).str();
  }
  return out + "}";
}

bool operator==(const FinSet& a, const FinSet& b) {
  return a.impl_ == b.impl_ || a.impl_->labels == b.impl_->labels;
}

// ---------------------------------------------------------------- FinFn

FinFn::FinFn(FinSet dom, FinSet cod, std::vector<std::size_t> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  if (table_.size() != dom_.size()) {
    throw std::invalid_argument("function table has " + std::to_string(table_.size()) +
                                " entries, domain has " + std::to_string(dom_.size()));
  }
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (table_[i] >= cod_.size()) {
      throw std::invalid_argument("image of " + dom_.label(i).str() +
                                  " lies outside the codomain " + cod_.str());
    }
  }
}

FinFn FinFn::identity(const FinSet& x) {
  std::vector<std::size_t> table(x.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = i;
  return FinFn(x, x, std::move(table));
}

FinFn FinFn::constant(const FinSet& dom, const FinSet& cod, const Label& value) {
  return FinFn(dom, cod, std::vector<std::size_t>(dom.size(), cod.index_of(value)));
}

FinFn FinFn::from_labels(const FinSet& dom, const FinSet& cod,
                         const std::function<Label(const Label&)>& f) {
  std::vector<std::size_t> table;
  table.reserve(dom.size());
  for (const auto& l : dom.labels()) table.push_back(cod.index_of(f(l)));
  return FinFn(dom, cod, std::move(table));
}

std::string FinFn::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (i) out += ",";
    out += dom_.label(i).str() + "->" + cod_.label(table_[i]).str();
  }
  return out + "]";
}

bool operator==(const FinFn& a, const FinFn& b) {
  return a.table_ == b.table_ && a.dom_ == b.dom_ && a.cod_ == b.cod_;
}

FinFn fn_compose(const FinFn& f, const FinFn& g) {
  if (!(f.cod() == g.dom())) {
    throw CompositionError("cannot compose " + f.dom().str() + " → " + f.cod().str() +
                           " with " + g.dom().str() + " → " + g.cod().str());
  }
  std::vector<std::size_t> table(f.dom().size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = g(f(i));
  return FinFn(f.dom(), g.cod(), std::move(table));
}

FinFn fn_product(const FinFn& f, const FinFn& g) {
  const std::size_t n = g.dom().size();
  const std::size_t m = g.cod().size();
  std::vector<std::size_t> table(f.dom().size() * n);
  for (std::size_t i = 0; i < f.dom().size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = f(i) * m + g(j);
  }
  return FinFn(FinSet::product(f.dom(), g.dom()), FinSet::product(f.cod(), g.cod()),
               std::move(table));
}

FinFn fn_fanout(const FinFn& f, const FinFn& g) {
  if (!(f.dom() == g.dom())) {
    throw CompositionError("cannot pair functions out of " + f.dom().str() + " and " +
                           g.dom().str());
  }
  const std::size_t m = g.cod().size();
  std::vector<std::size_t> table(f.dom().size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = f(i) * m + g(i);
  return FinFn(f.dom(), FinSet::product(f.cod(), g.cod()), std::move(table));
}

FinFn fn_proj1(const FinSet& a, const FinSet& b) {
  std::vector<std::size_t> table(a.size() * b.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = i / b.size();
  return FinFn(FinSet::product(a, b), a, std::move(table));
}

FinFn fn_proj2(const FinSet& a, const FinSet& b) {
  std::vector<std::size_t> table(a.size() * b.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = i % b.size();
  return FinFn(FinSet::product(a, b), b, std::move(table));
}

std::uint64_t function_count(std::size_t dom_size, std::size_t cod_size) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < dom_size; ++i) {
    if (cod_size == 0) return 0;
    if (count > std::numeric_limits<std::uint64_t>::max() / cod_size) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= cod_size;
  }
  return count;
}

std::vector<FinFn> enumerate_functions(const FinSet& dom, const FinSet& cod,
                                       std::uint64_t cap) {
  const auto count = function_count(dom.size(), cod.size());
  if (count > cap) {
    throw SizeError("function space " + dom.str() + " → " + cod.str(), count, cap);
  }
  std::vector<FinFn> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(nth_function(dom, cod, i));
  return out;
}

FinFn nth_function(const FinSet& dom, const FinSet& cod, std::uint64_t i) {
  std::vector<std::size_t> table(dom.size());
  for (std::size_t k = dom.size(); k-- > 0;) {
    table[k] = static_cast<std::size_t>(i % cod.size());
    i /= cod.size();
  }
  return FinFn(dom, cod, std::move(table));
}

FinSet function_space(const FinSet& dom, const FinSet& cod, std::uint64_t cap) {
  if (dom.size() == 1) return cod;
  const auto count = function_count(dom.size(), cod.size());
  if (count > cap) {
    throw SizeError("function space " + dom.str() + " → " + cod.str(), count, cap);
  }
  std::vector<Label> labels;
  labels.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    labels.push_back(Label::atom(nth_function(dom, cod, i).str()));
  }
  return FinSet(std::move(labels));
}

}  // namespace paraoptic
