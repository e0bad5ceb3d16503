#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "paraoptic/learner.hpp"

namespace paraoptic::cli {

namespace {

using Rng = std::mt19937_64;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

FinSet random_set(Rng& rng, std::size_t max_size) {
  std::vector<std::string> names;
  const auto n = pick(rng, 1, max_size);
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  return FinSet::atoms(names);
}

FinFn random_fn(Rng& rng, const FinSet& dom, const FinSet& cod) {
  std::vector<std::size_t> t(dom.size());
  for (auto& v : t) v = pick(rng, 0, cod.size() - 1);
  return FinFn(dom, cod, std::move(t));
}

FinLensObj random_obj(Rng& rng) { return {random_set(rng, 3), random_set(rng, 3)}; }

FinLens random_lens(Rng& rng, const FinLensObj& a, const FinLensObj& b) {
  return FinLens(a, b, random_fn(rng, a.fwd, b.fwd),
                 random_fn(rng, FinSet::product(a.fwd, b.bwd), a.bwd));
}

FinParaLens random_para(Rng& rng, const FinLensObj& a, const FinLensObj& b) {
  const FinLensObj m = random_obj(rng);
  return FinParaLens(FinParamObj::from(m), a, b, random_lens(rng, tensor_object(m, a), b));
}

Outcome lens_associativity(Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    const auto a = random_obj(rng), b = random_obj(rng), c = random_obj(rng), d = random_obj(rng);
    const auto f = random_lens(rng, a, b), g = random_lens(rng, b, c), h = random_lens(rng, c, d);
    if (!lens_equal(lens_compose(lens_compose(f, g), h), lens_compose(f, lens_compose(g, h)))) {
      return {false, "instance " + std::to_string(i) + ": (f;g);h != f;(g;h) for f get " +
                         f.get().str()};
    }
  }
  return {true, "200 instances"};
}

Outcome lens_unit(Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    const auto a = random_obj(rng), b = random_obj(rng);
    const auto f = random_lens(rng, a, b);
    if (!lens_equal(lens_compose(lens_id(a), f), f) || !lens_equal(lens_compose(f, lens_id(b)), f)) {
      return {false, "instance " + std::to_string(i) + ": identity law fails for get " +
                         f.get().str()};
    }
  }
  return {true, "200 instances"};
}

Outcome lens_interchange(Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    const auto a = random_obj(rng), b = random_obj(rng), c = random_obj(rng);
    const auto a2 = random_obj(rng), b2 = random_obj(rng), c2 = random_obj(rng);
    const auto f = random_lens(rng, a, b), h = random_lens(rng, b, c);
    const auto g = random_lens(rng, a2, b2), k = random_lens(rng, b2, c2);
    if (!lens_equal(lens_compose(lens_tensor(f, g), lens_tensor(h, k)),
                    lens_tensor(lens_compose(f, h), lens_compose(g, k)))) {
      return {false, "instance " + std::to_string(i) + ": (f⊗g);(h⊗k) != (f;h)⊗(g;k)"};
    }
  }
  return {true, "200 instances"};
}

Outcome para_associativity(Rng& rng) {
  for (int i = 0; i < 50; ++i) {
    const auto a = random_obj(rng), b = random_obj(rng), c = random_obj(rng), d = random_obj(rng);
    const auto p = random_para(rng, a, b), q = random_para(rng, b, c), r = random_para(rng, c, d);
    const auto left = flatten_params(para_compose(para_compose(p, q), r));
    const auto right = flatten_params(para_compose(p, para_compose(q, r)));
    if (!(left.params() == right.params()) || !lens_equal(left.carrier(), right.carrier())) {
      return {false, "instance " + std::to_string(i) + ": composites differ after flattening"};
    }
  }
  return {true, "50 instances"};
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

Vector random_vec(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& e : v) e = u(rng);
  return v;
}

// Worst relative error between reverse-mode cotangents of f and central
// differences of <ct, f>.
double gradient_error(const SmoothMap& f, const Vector& p, const Vector& x, const Vector& ct) {
  const auto fwd = forward_eval(f, p, x);
  const auto back = backward_eval(f, fwd.tape, ct);
  const Vector px = concat(p, x);
  const Vector analytic = concat(back.dp, back.dx);
  const auto phi = [&](const Vector& v) {
    return ct.dot(forward_eval(f, v.head(p.size()), v.tail(x.size())).y);
  };
  const double h = 1e-5;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < px.size(); ++i) {
    Vector up = px, down = px;
    up[i] += h;
    down[i] -= h;
    worst = std::max(worst, rel_err((phi(up) - phi(down)) / (2 * h), analytic[i]));
  }
  return worst;
}

// A single primitive wired to fresh input vectors: the first input is the
// parameter, the rest are packed into x.
SmoothMap lift_primitive(const PrimitivePtr& op) {
  std::size_t rest = 0;
  for (std::size_t i = 1; i < op->in_dims.size(); ++i) rest += op->in_dims[i];
  SmoothMapBuilder b(op->in_dims[0], rest);
  std::vector<SmoothMap::Wire> wires{b.param()};
  std::size_t offset = 0;
  for (std::size_t i = 1; i < op->in_dims.size(); ++i) {
    wires.push_back(b.apply(prim::slice(rest, offset, op->in_dims[i]), {b.input()}));
    offset += op->in_dims[i];
  }
  return b.build(b.apply(op, wires));
}

std::vector<PrimitivePtr> primitive_suite() {
  return {prim::linear(2, 3), prim::bias_add(3), prim::tanh(3),   prim::relu(3),
          prim::sigmoid(3),   prim::add(3),      prim::mul(3),    prim::negate(3),
          prim::sum(3),       prim::squared_error(3), prim::slice(4, 1, 2)};
}

// Inputs kept away from the relu kink.
Vector away_from_zero(Rng& rng, std::size_t n) {
  Vector v = random_vec(rng, n);
  for (auto& e : v) {
    if (std::abs(e) < 0.05) e = e < 0 ? -0.5 : 0.5;
  }
  return v;
}

Outcome primitive_gradients(Rng& rng) {
  for (const auto& op : primitive_suite()) {
    if (op->in_dims.size() == 1) {
      // Unary ops: wrap as a parameter-free map.
      SmoothMapBuilder b(0, op->in_dims[0]);
      const auto f = b.build(b.apply(op, {b.input()}));
      const double e = gradient_error(f, Vector(0), away_from_zero(rng, op->in_dims[0]),
                                      random_vec(rng, op->out_dim));
      if (e >= 1e-4) return {false, op->name + ": relative error " + std::to_string(e)};
      continue;
    }
    const auto f = lift_primitive(op);
    const double e = gradient_error(f, away_from_zero(rng, f.param_dim()),
                                    away_from_zero(rng, f.in_dim()), random_vec(rng, op->out_dim));
    if (e >= 1e-4) return {false, op->name + ": relative error " + std::to_string(e)};
  }
  return {true, std::to_string(primitive_suite().size()) + " primitives"};
}

SmoothMap random_graph(Rng& rng, std::size_t width, std::size_t depth) {
  std::vector<int> kinds;
  std::size_t params = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    const int k = static_cast<int>(pick(rng, 0, 5));
    kinds.push_back(k);
    if (k == 0) params += width * width;
    if (k == 1) params += width;
  }
  SmoothMapBuilder b(params, width);
  std::vector<SmoothMap::Wire> wires{b.input()};
  std::size_t offset = 0;
  for (int k : kinds) {
    const auto prev = wires.back();
    const auto other = wires[pick(rng, 0, wires.size() - 1)];
    SmoothMap::Wire w;
    switch (k) {
      case 0:
        w = b.apply(prim::linear(width, width), {b.param_slice(offset, width * width), prev});
        offset += width * width;
        break;
      case 1:
        w = b.apply(prim::bias_add(width), {b.param_slice(offset, width), prev});
        offset += width;
        break;
      case 2:
        w = b.apply(prim::tanh(width), {prev});
        break;
      case 3:
        w = b.apply(prim::sigmoid(width), {prev});
        break;
      case 4:
        w = b.apply(prim::add(width), {prev, other});
        break;
      default:
        w = b.apply(prim::mul(width), {prev, other});
        break;
    }
    wires.push_back(w);
  }
  return b.build(b.apply(prim::sum(width), {wires.back()}));
}

Outcome composite_gradients(Rng& rng) {
  for (int i = 0; i < 50; ++i) {
    const auto f = random_graph(rng, 3, pick(rng, 1, 6));
    const double e = gradient_error(f, random_vec(rng, f.param_dim()), random_vec(rng, 3),
                                    random_vec(rng, 1));
    if (e >= 1e-4) {
      return {false, "graph " + std::to_string(i) + ": relative error " + std::to_string(e)};
    }
  }
  return {true, "50 graphs"};
}

Outcome functoriality(Rng& rng) {
  for (int i = 0; i < 100; ++i) {
    const auto f = random_graph(rng, 3, pick(rng, 1, 4));
    SmoothMapBuilder b(3, 3);
    const auto g = b.build(b.apply(prim::tanh(3), {b.apply(prim::bias_add(3), {b.param(), b.input()})}));
    const auto whole = apply_R(sequence(g, f));
    const auto parts = para_compose(apply_R(g), apply_R(f));
    const Vector px = random_vec(rng, whole.params().omega.dim + 3);
    const Vector dy = random_vec(rng, 1);
    const Vector a = whole.carrier().backward(px, dy);
    const Vector c = parts.carrier().backward(px, dy);
    const double ya = whole.carrier().forward(px)[0];
    const double yc = parts.carrier().forward(px)[0];
    if ((a - c).cwiseAbs().maxCoeff() > 1e-10 || std::abs(ya - yc) > 1e-10) {
      return {false, "evaluation " + std::to_string(i) + ": lifted composite disagrees"};
    }
  }
  return {true, "100 evaluations"};
}

Outcome descent_step(Rng& rng, const std::function<SmoothLens(double, std::size_t)>& optimiser,
                     double sign) {
  for (int i = 0; i < 20; ++i) {
    const auto f = random_graph(rng, 3, pick(rng, 1, 5));
    if (f.param_dim() == 0) continue;
    const double alpha = 0.1;
    const auto model = reparametrise(apply_R(f), optimiser(alpha, f.param_dim()));
    const Vector p = random_vec(rng, f.param_dim());
    const Vector x = random_vec(rng, 3);
    const auto step = train_step(model, p, x, dx_costate(1));
    // Oracle gradient by central differences.
    const double h = 1e-5;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      Vector up = p, down = p;
      up[j] += h;
      down[j] -= h;
      const double grad =
          (forward_eval(f, up, x).y[0] - forward_eval(f, down, x).y[0]) / (2 * h);
      const double expected = p[j] - sign * alpha * grad;
      if (rel_err(step.p_next[j], expected) >= 1e-4) {
        std::ostringstream os;
        os << "graph " << i << ", coordinate " << j << ": got " << step.p_next[j] << ", expected "
           << expected;
        return {false, os.str()};
      }
    }
  }
  return {true, "20 graphs"};
}

Outcome nash_naturality(Rng& rng) {
  int tested = 0;
  while (tested < 100) {
    const FinSet x = random_set(rng, 3), y = random_set(rng, 2);
    const FinSet x2 = random_set(rng, 2), y2 = random_set(rng, 2);
    std::vector<Payoff> r1, r2;
    for (std::size_t i = 0; i < pick(rng, 1, 3); ++i) r1.push_back(Payoff(static_cast<std::int64_t>(pick(rng, 0, 4))));
    for (std::size_t i = 0; i < pick(rng, 1, 2); ++i) r2.push_back(Payoff(static_cast<std::int64_t>(pick(rng, 0, 4))));
    const FinSet rx = FinSet::payoff_grid(r1), rx2 = FinSet::payoff_grid(r2);
    const FinSet ry = random_set(rng, 2), ry2 = random_set(rng, 2);
    const auto f = random_lens(rng, {x, rx}, {y, ry});
    const auto g = random_lens(rng, {x2, rx2}, {y2, ry2});
    const auto eps = argmax_rel(x, rx);
    const auto delta = argmax_rel(x2, rx2);
    const FinLensObj tensor_dst = tensor_object(f.dst(), g.dst());
    if (function_count(tensor_dst.fwd.size(), tensor_dst.bwd.size()) > 20000) continue;
    const auto lhs = nash_product(sel_pushforward(f, eps), sel_pushforward(g, delta));
    const auto rhs = sel_pushforward(lens_tensor(f, g), nash_product(eps, delta));
    if (auto w = find_disagreement(lhs, rhs)) {
      return {false, "state " + std::to_string(w->state) + ", costate " + w->costate.str()};
    }
    ++tested;
  }
  return {true, "100 instances"};
}

NormalFormGame random_game(Rng& rng) {
  NormalFormGame g;
  const auto n = pick(rng, 1, 3);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> s;
    for (std::size_t k = 0; k < pick(rng, 1, 4); ++k) s.push_back("s" + std::to_string(k));
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

Outcome oracle_equivalence(Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    const auto g = random_game(rng);
    const auto got = solution_set(nash_game(g));
    const auto want = brute_force_nash(g);
    if (!std::equal(got.begin(), got.end(), want.begin(), want.end(),
                    [](std::size_t a, std::uint64_t b) { return a == b; })) {
      return {false, "game " + std::to_string(i) + ": compositional and brute-force sets differ"};
    }
  }
  return {true, "200 games"};
}

Outcome prisoners(const Fault fault) {
  auto g = prisoners_dilemma();
  if (fault == Fault::kPdCooperate) {
    // Cooperation now strictly dominates.
    g.payoffs = {{3, 3}, {2, 0}, {0, 2}, {1, 1}};
  }
  GameSpec spec{g, {"argmax", "argmax"}};
  const auto report = solve_report(spec);
  const bool ok = report["agree"].get<bool>();
  return {ok, "solutions " + report["solutions"].dump() + ", oracle " + report["oracle"].dump()};
}

struct Property {
  std::string name;
  std::function<Outcome(Rng&, Fault)> run;
};

std::vector<Property> properties() {
  auto gd = [](Fault f) -> std::function<SmoothLens(double, std::size_t)> {
    if (f == Fault::kGdSign) return [](double a, std::size_t n) { return gd_lens(-a, n); };
    return gd_lens;
  };
  return {
      {"lens.associativity", [](Rng& r, Fault) { return lens_associativity(r); }},
      {"lens.unit", [](Rng& r, Fault) { return lens_unit(r); }},
      {"lens.interchange", [](Rng& r, Fault) { return lens_interchange(r); }},
      {"para.associativity", [](Rng& r, Fault) { return para_associativity(r); }},
      {"autodiff.primitives", [](Rng& r, Fault) { return primitive_gradients(r); }},
      {"autodiff.composites", [](Rng& r, Fault) { return composite_gradients(r); }},
      {"learner.functoriality", [](Rng& r, Fault) { return functoriality(r); }},
      {"learner.gradient_descent", [gd](Rng& r, Fault f) { return descent_step(r, gd(f), 1.0); }},
      {"learner.gradient_ascent",
       [](Rng& r, Fault) {
         return descent_step(r, [](double a, std::size_t n) { return ga_lens(a, n); }, -1.0);
       }},
      {"selection.nash_naturality", [](Rng& r, Fault) { return nash_naturality(r); }},
      {"games.oracle_equivalence", [](Rng& r, Fault) { return oracle_equivalence(r); }},
      {"games.prisoners_dilemma", [](Rng&, Fault f) { return prisoners(f); }},
  };
}

}  // namespace

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& p : properties()) out.push_back(p.name);
  return out;
}

int run_checks(const CheckOptions& opts, std::ostream& out) {
  int failures = 0;
  int ran = 0;
  for (const auto& p : properties()) {
    if (p.name.find(opts.filter) == std::string::npos) continue;
    ++ran;
    Rng rng(opts.seed);
    Outcome o;
    try {
      o = p.run(rng, opts.fault);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    out << (o.ok ? "PASS " : "FAIL ") << p.name << ": " << o.detail << '\n';
    if (!o.ok) ++failures;
  }
  if (ran == 0) out << "no property matches '" << opts.filter << "'\n";
  return failures;
}

}  // namespace paraoptic::cli
