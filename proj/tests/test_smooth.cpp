#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "paraoptic/error.hpp"
#include "paraoptic/smooth.hpp"
#include "support.hpp"

using namespace paraoptic;
using namespace testing_support;

namespace {

// Wrap a primitive so that its inputs are the concatenation of all
// arguments, packed into x.
SmoothMap wrap(const PrimitivePtr& op) {
  std::size_t total = 0;
  for (auto d : op->in_dims) total += d;
  SmoothMapBuilder b(0, total);
  std::vector<SmoothMap::Wire> ins;
  std::size_t offset = 0;
  for (auto d : op->in_dims) {
    ins.push_back(b.apply(prim::slice(total, offset, d), {b.input()}));
    offset += d;
  }
  return b.build(b.apply(op, ins));
}

std::vector<PrimitivePtr> all_primitives() {
  return {prim::linear(3, 2), prim::linear(1, 4), prim::bias_add(3), prim::tanh(4),
          prim::relu(4),      prim::sigmoid(4),   prim::add(2),      prim::mul(3),
          prim::negate(2),    prim::sum(5),       prim::squared_error(3),
          prim::slice(5, 2, 3)};
}

// Inputs in [-2, 2] with the relu kink avoided.
Vector sample(Rng& rng, std::size_t n) {
  Vector v = random_vec(rng, n);
  for (auto& e : v) {
    if (std::abs(e) < 1e-2) e = 0.5;
  }
  return v;
}

// Straight-line 2-layer tanh network y = w2 · tanh(W1 x + b1) + b2.
double mlp_reference(const Vector& p, const Vector& x, std::size_t h, std::size_t n) {
  double y = p[h * n + h + h];
  for (std::size_t i = 0; i < h; ++i) {
    double a = p[h * n + i];
    for (std::size_t j = 0; j < n; ++j) a += p[i * n + j] * x[j];
    y += p[h * n + h + i] * std::tanh(a);
  }
  return y;
}

SmoothMap mlp_graph(std::size_t h, std::size_t n) {
  SmoothMapBuilder b(h * n + h + h + 1, n);
  auto z = b.apply(prim::linear(h, n), {b.param_slice(0, h * n), b.input()});
  z = b.apply(prim::bias_add(h), {b.param_slice(h * n, h), z});
  z = b.apply(prim::tanh(h), {z});
  z = b.apply(prim::linear(1, h), {b.param_slice(h * n + h, h), z});
  return b.build(b.apply(prim::bias_add(1), {b.param_slice(h * n + 2 * h, 1), z}));
}

}  // namespace

TEST(Forward, IdentityGraph) {
  const auto id = SmoothMap::identity(3);
  Vector x(3);
  x << 1, -2, 3;
  const auto r = forward_eval(id, Vector(0), x);
  EXPECT_EQ(r.y, x);
  EXPECT_TRUE(r.tape.node_inputs.empty());
  const auto ct = backward_eval(id, r.tape, x);
  EXPECT_EQ(ct.dp.size(), 0);
  EXPECT_EQ(ct.dx, x);
}

TEST(Forward, ScalarMultiplyAndProductRule) {
  SmoothMapBuilder b(1, 1);
  const auto f = b.build(b.apply(prim::linear(1, 1), {b.param(), b.input()}));
  Vector w(1), x(1), dy(1);
  w << 2;
  x << 3;
  dy << 1;
  const auto r = forward_eval(f, w, x);
  EXPECT_DOUBLE_EQ(r.y[0], 6.0);
  const auto ct = backward_eval(f, r.tape, dy);
  EXPECT_DOUBLE_EQ(ct.dp[0], 3.0);
  EXPECT_DOUBLE_EQ(ct.dx[0], 2.0);
}

TEST(Forward, MatchesStraightLineMlp) {
  Rng rng(61);
  const auto f = mlp_graph(4, 3);
  for (int i = 0; i < 50; ++i) {
    const Vector p = random_vec(rng, f.param_dim());
    const Vector x = random_vec(rng, 3);
    EXPECT_NEAR(forward_eval(f, p, x).y[0], mlp_reference(p, x, 4, 3), 1e-12);
  }
}

TEST(Forward, DimensionErrors) {
  const auto f = mlp_graph(2, 2);
  EXPECT_THROW(forward_eval(f, Vector::Zero(3), Vector::Zero(2)), DimensionError);
  EXPECT_THROW(forward_eval(f, Vector::Zero(f.param_dim()), Vector::Zero(5)), DimensionError);
}

TEST(Forward, NonFiniteNamesNode) {
  SmoothMapBuilder b(0, 1);
  auto sq = b.apply(prim::mul(1), {b.input(), b.input()});
  const auto f = b.build(b.apply(prim::mul(1), {sq, sq}));
  Vector x(1);
  x << 1e200;
  try {
    forward_eval(f, Vector(0), x);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("node 0 (mul)"), std::string::npos);
  }
}

TEST(Backward, RejectsForeignTape) {
  const auto f = mlp_graph(2, 2);
  const auto g = mlp_graph(2, 2);
  const auto r = forward_eval(f, Vector::Zero(f.param_dim()), Vector::Zero(2));
  EXPECT_THROW(backward_eval(g, r.tape, Vector::Ones(1)), std::invalid_argument);
  EXPECT_THROW(backward_eval(f, r.tape, Vector::Ones(2)), DimensionError);
}

TEST(Gradients, EveryPrimitiveMatchesFiniteDifferences) {
  Rng rng(62);
  for (const auto& op : all_primitives()) {
    const auto f = wrap(op);
    for (int rep = 0; rep < 10; ++rep) {
      const Vector x = sample(rng, f.in_dim());
      const Vector ct = random_vec(rng, f.out_dim());
      const auto r = forward_eval(f, Vector(0), x);
      const Vector dx = backward_eval(f, r.tape, ct).dx;
      const Vector fd = fd_gradient(
          [&](const Vector& v) { return ct.dot(forward_eval(f, Vector(0), v).y); }, x);
      ASSERT_LT(max_rel_err(dx, fd), 1e-4) << op->name;
    }
  }
}

TEST(Gradients, VjpIsLinearInCotangent) {
  Rng rng(63);
  for (const auto& op : all_primitives()) {
    std::vector<Vector> ins;
    for (auto d : op->in_dims) ins.push_back(sample(rng, d));
    const Vector u = random_vec(rng, op->out_dim), v = random_vec(rng, op->out_dim);
    const double a = 0.7, c = -1.3;
    const auto mixed = op->vjp(ins, a * u + c * v);
    const auto gu = op->vjp(ins, u);
    const auto gv = op->vjp(ins, v);
    for (std::size_t k = 0; k < ins.size(); ++k) {
      ASSERT_LT((mixed[k] - (a * gu[k] + c * gv[k])).cwiseAbs().maxCoeff(), 1e-10) << op->name;
    }
  }
}

TEST(Gradients, RandomMlpMatchesFiniteDifferences) {
  Rng rng(64);
  const auto f = mlp_graph(5, 3);
  for (int i = 0; i < 20; ++i) {
    const Vector p = random_vec(rng, f.param_dim());
    const Vector x = random_vec(rng, 3);
    const auto r = forward_eval(f, p, x);
    const auto ct = backward_eval(f, r.tape, Vector::Ones(1));
    const Vector px = concat(p, x);
    const Vector fd = fd_gradient(
        [&](const Vector& v) {
          return mlp_reference(v.head(f.param_dim()), v.tail(3), 5, 3);
        },
        px);
    ASSERT_LT(max_rel_err(concat(ct.dp, ct.dx), fd), 1e-4);
  }
}

TEST(Gradients, SharedWiresAccumulate) {
  // y = x * x: dx = 2x.
  SmoothMapBuilder b(0, 1);
  const auto f = b.build(b.apply(prim::mul(1), {b.input(), b.input()}));
  Vector x(1);
  x << 1.5;
  const auto r = forward_eval(f, Vector(0), x);
  EXPECT_DOUBLE_EQ(backward_eval(f, r.tape, Vector::Ones(1)).dx[0], 3.0);
}

TEST(Builder, RejectsDeadNodesAndBadDims) {
  SmoothMapBuilder b(0, 2);
  auto t = b.apply(prim::tanh(2), {b.input()});
  (void)t;
  auto s = b.apply(prim::sum(2), {b.input()});
  EXPECT_THROW(b.build(s), std::invalid_argument);
  EXPECT_THROW(b.apply(prim::tanh(3), {b.input()}), DimensionError);
}

TEST(Sequence, ParametersOfSecondMapComeFirst) {
  Rng rng(65);
  const auto f = mlp_graph(2, 2);  // ℝ^2 → ℝ
  SmoothMapBuilder b(1, 1);
  const auto g = b.build(b.apply(prim::tanh(1), {b.apply(prim::bias_add(1), {b.param(), b.input()})}));
  const auto fg = sequence(f, g);
  ASSERT_EQ(fg.param_dim(), 1 + f.param_dim());
  const Vector pf = random_vec(rng, f.param_dim());
  const Vector pg = random_vec(rng, 1);
  const Vector x = random_vec(rng, 2);
  const double expected = std::tanh(pg[0] + mlp_reference(pf, x, 2, 2));
  EXPECT_NEAR(forward_eval(fg, concat(pg, pf), x).y[0], expected, 1e-12);
}

TEST(Json, ParsesGraph) {
  const auto j = nlohmann::json::parse(R"({
    "param_dim": 6, "in_dim": 3,
    "nodes": [{"op": "linear", "rows": 2, "cols": 3, "inputs": ["param[0:6]", "input"]},
              {"op": "tanh", "n": 2, "inputs": ["0"]},
              {"op": "sum", "n": 2, "inputs": ["1"]}],
    "output": "2"})");
  const auto f = smooth_map_from_json(j);
  Vector p(6), x(3);
  p << 1, 0, 0, 0, 1, 0;
  x << 0.5, -0.25, 9;
  EXPECT_NEAR(forward_eval(f, p, x).y[0], std::tanh(0.5) + std::tanh(-0.25), 1e-15);
}

TEST(Json, ErrorsCarryPaths) {
  auto expect_path = [](const char* text, const std::string& path) {
    try {
      smooth_map_from_json(nlohmann::json::parse(text));
      FAIL() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.path(), path) << e.what();
    }
  };
  expect_path(R"({"in_dim": 1, "nodes": [], "output": "input"})", "/param_dim");
  expect_path(R"({"param_dim": 0, "in_dim": 1, "nodes": [{"op": "warp", "inputs": ["input"]}], "output": "0"})",
              "/nodes/0");
  expect_path(R"({"param_dim": 0, "in_dim": 1, "nodes": [{"op": "tanh", "n": 1, "inputs": ["3"]}], "output": "0"})",
              "/nodes/0/inputs/0");
  expect_path(R"({"param_dim": 2, "in_dim": 1, "nodes": [{"op": "tanh", "n": 1, "inputs": ["param[2:1]"]}], "output": "0"})",
              "/nodes/0/inputs/0");
  expect_path(R"({"param_dim": 0, "in_dim": 2, "nodes": [{"op": "tanh", "n": 3, "inputs": ["input"]}], "output": "0"})",
              "/nodes/0");
}

TEST(Registry, BuiltinNames) {
  const auto names = PrimitiveRegistry::builtin().names();
  for (const char* n : {"linear", "bias_add", "tanh", "relu", "sigmoid", "add", "mul", "negate",
                        "sum", "squared_error", "slice"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
  EXPECT_THROW(PrimitiveRegistry::builtin().make("nope", nlohmann::json::object()),
               std::invalid_argument);
}
