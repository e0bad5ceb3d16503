#pragma once

// Random instance generators and oracles shared by the test files. The
// oracles deliberately avoid the library code they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "paraoptic/games.hpp"
#include "paraoptic/learner.hpp"

namespace testing_support {

using namespace paraoptic;
using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline FinSet random_set(Rng& rng, std::size_t max_size, const std::string& prefix = "v") {
  std::vector<std::string> names;
  const auto n = pick(rng, 1, max_size);
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return FinSet::atoms(names);
}

inline FinFn random_fn(Rng& rng, const FinSet& dom, const FinSet& cod) {
  std::vector<std::size_t> t(dom.size());
  for (auto& v : t) v = pick(rng, 0, cod.size() - 1);
  return FinFn(dom, cod, std::move(t));
}

inline FinLensObj random_obj(Rng& rng, std::size_t max_size = 3) {
  return {random_set(rng, max_size), random_set(rng, max_size, "r")};
}

inline FinLens random_lens(Rng& rng, const FinLensObj& a, const FinLensObj& b) {
  return FinLens(a, b, random_fn(rng, a.fwd, b.fwd),
                 random_fn(rng, FinSet::product(a.fwd, b.bwd), a.bwd));
}

inline FinParaLens random_para(Rng& rng, const FinLensObj& a, const FinLensObj& b) {
  const FinLensObj m = random_obj(rng, 2);
  return FinParaLens(FinParamObj::from(m), a, b, random_lens(rng, tensor_object(m, a), b));
}

// Label-level evaluation of get and put, independent of index layout.
inline Label get_of(const FinLens& l, const Label& x) { return l.get()(x); }
inline Label put_of(const FinLens& l, const Label& x, const Label& dy) {
  return l.put()(Label::pair(x, dy));
}

// Extensional equality by walking labels, independent of lens_equal.
inline bool same_behaviour(const FinLens& a, const FinLens& b) {
  if (!(a.src() == b.src()) || !(a.dst() == b.dst())) return false;
  for (const auto& x : a.src().fwd.labels()) {
    if (!(get_of(a, x) == get_of(b, x))) return false;
    for (const auto& dy : a.dst().bwd.labels()) {
      if (!(put_of(a, x, dy) == put_of(b, x, dy))) return false;
    }
  }
  return true;
}

// Random normal-form game with small integer-or-half payoffs.
inline NormalFormGame random_game(Rng& rng, std::size_t max_players = 3,
                                  std::size_t max_strategies = 4) {
  NormalFormGame g;
  const auto n = pick(rng, 1, max_players);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> s;
    const auto k = pick(rng, 1, max_strategies);
    for (std::size_t j = 0; j < k; ++j) s.push_back("s" + std::to_string(j));
    g.names.push_back("p" + std::to_string(i));
    g.strategies.push_back(FinSet::atoms(s));
  }
  for (std::uint64_t p = 0; p < g.profile_count(); ++p) {
    std::vector<Payoff> row;
    for (std::size_t i = 0; i < n; ++i) {
      row.emplace_back(static_cast<std::int64_t>(pick(rng, 0, 6)) - 3,
                       static_cast<std::int64_t>(pick(rng, 1, 2)));
    }
    g.payoffs.push_back(row);
  }
  return g;
}

// Pure Nash equilibria by nested enumeration over label tuples. Returns
// profiles as vectors of strategy labels, in lexicographic order of
// strategy positions.
inline std::vector<std::vector<std::string>> nash_oracle(const NormalFormGame& g) {
  const std::size_t n = g.strategies.size();
  std::vector<std::size_t> sizes;
  for (const auto& s : g.strategies) sizes.push_back(s.size());
  auto flat = [&](const std::vector<std::size_t>& prof) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) idx = idx * sizes[i] + prof[i];
    return idx;
  };
  std::vector<std::vector<std::string>> out;
  std::vector<std::size_t> prof(n, 0);
  while (true) {
    bool stable = true;
    for (std::size_t i = 0; i < n && stable; ++i) {
      const auto here = g.payoffs[flat(prof)][i];
      auto dev = prof;
      for (std::size_t s = 0; s < sizes[i]; ++s) {
        dev[i] = s;
        if (g.payoffs[flat(dev)][i] > here) stable = false;
      }
    }
    if (stable) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < n; ++i) labels.push_back(g.strategies[i].label(prof[i]).str());
      out.push_back(labels);
    }
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++prof[i] < sizes[i]) break;
      prof[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

// Profile labels of a flattened parameter element: left-nested pairs.
inline std::vector<std::string> unnest(const Label& l, std::size_t players) {
  std::vector<std::string> out(players);
  Label cur = l;
  for (std::size_t i = players; i-- > 1;) {
    out[i] = cur.second().str();
    cur = cur.first();
  }
  out[0] = cur.str();
  return out;
}

inline Vector random_vec(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& e : v) e = u(rng);
  return v;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Central-difference gradient of a scalar function.
inline Vector fd_gradient(const std::function<double(const Vector&)>& phi, const Vector& at,
                          double h = 1e-5) {
  Vector g(at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    Vector up = at, down = at;
    up[i] += h;
    down[i] -= h;
    g[i] = (phi(up) - phi(down)) / (2 * h);
  }
  return g;
}

inline double max_rel_err(const Vector& a, const Vector& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a[i], b[i]));
  return worst;
}

}  // namespace testing_support
