#include <benchmark/benchmark.h>

#include <random>

#include "paraoptic/games.hpp"
#include "paraoptic/learner.hpp"

using namespace paraoptic;

namespace {

FinSet atoms(std::size_t n, const std::string& prefix) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return FinSet::atoms(names);
}

FinFn random_fn(std::mt19937_64& rng, const FinSet& dom, const FinSet& cod) {
  std::uniform_int_distribution<std::size_t> u(0, cod.size() - 1);
  std::vector<std::size_t> t(dom.size());
  for (auto& v : t) v = u(rng);
  return FinFn(dom, cod, t);
}

FinLens random_lens(std::mt19937_64& rng, const FinLensObj& a, const FinLensObj& b) {
  return FinLens(a, b, random_fn(rng, a.fwd, b.fwd),
                 random_fn(rng, FinSet::product(a.fwd, b.bwd), a.bwd));
}

}  // namespace

static void BM_SolvePrisonersDilemma(benchmark::State& state) {
  const auto g = prisoners_dilemma();
  for (auto _ : state) benchmark::DoNotOptimize(solution_set(nash_game(g)));
}
BENCHMARK(BM_SolvePrisonersDilemma);

static void BM_SolveThreePlayers(benchmark::State& state) {
  NormalFormGame g;
  for (int i = 0; i < 3; ++i) {
    g.names.push_back("p" + std::to_string(i));
    g.strategies.push_back(atoms(static_cast<std::size_t>(state.range(0)), "s"));
  }
  std::mt19937_64 rng(1);
  for (std::uint64_t p = 0; p < g.profile_count(); ++p) {
    g.payoffs.push_back({Payoff(static_cast<std::int64_t>(rng() % 7)),
                         Payoff(static_cast<std::int64_t>(rng() % 7)),
                         Payoff(static_cast<std::int64_t>(rng() % 7))});
  }
  for (auto _ : state) benchmark::DoNotOptimize(solution_set(nash_game(g)));
}
BENCHMARK(BM_SolveThreePlayers)->Arg(2)->Arg(3)->Arg(4);

static void BM_LensCompose(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const FinLensObj a{atoms(n, "a"), atoms(n, "da")}, b{atoms(n, "b"), atoms(n, "db")},
      c{atoms(n, "c"), atoms(n, "dc")};
  const auto f = random_lens(rng, a, b);
  const auto g = random_lens(rng, b, c);
  for (auto _ : state) benchmark::DoNotOptimize(lens_compose(f, g));
}
BENCHMARK(BM_LensCompose)->Arg(4)->Arg(16)->Arg(64);

static void BM_EnumerateFunctions(benchmark::State& state) {
  const auto dom = atoms(static_cast<std::size_t>(state.range(0)), "x");
  const auto cod = atoms(3, "y");
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_functions(dom, cod));
}
BENCHMARK(BM_EnumerateFunctions)->Arg(4)->Arg(8);

static void BM_Product(benchmark::State& state) {
  const auto a = atoms(50, "a"), b = atoms(50, "b");
  for (auto _ : state) benchmark::DoNotOptimize(FinSet::product(a, b));
}
BENCHMARK(BM_Product);

static SmoothMap mlp(std::size_t width) {
  SmoothMapBuilder b(width * width * 2 + width * 2, width);
  auto h = b.apply(prim::linear(width, width), {b.param_slice(0, width * width), b.input()});
  h = b.apply(prim::bias_add(width), {b.param_slice(width * width, width), h});
  h = b.apply(prim::tanh(width), {h});
  h = b.apply(prim::linear(width, width), {b.param_slice(width * width + width, width * width), h});
  h = b.apply(prim::bias_add(width), {b.param_slice(2 * width * width + width, width), h});
  return b.build(b.apply(prim::sum(width), {h}));
}

static void BM_ForwardBackward(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  const auto f = mlp(w);
  const Vector p = Vector::Constant(static_cast<Eigen::Index>(f.param_dim()), 0.1);
  const Vector x = Vector::Constant(static_cast<Eigen::Index>(w), 0.5);
  for (auto _ : state) {
    const auto fwd = forward_eval(f, p, x);
    benchmark::DoNotOptimize(backward_eval(f, fwd.tape, Vector::Ones(1)));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(4)->Arg(32)->Arg(128);

static void BM_TrainStep(benchmark::State& state) {
  const auto f = mlp(16);
  const auto model = reparametrise(apply_R(f), gd_lens(0.01, f.param_dim()));
  Vector p = Vector::Constant(static_cast<Eigen::Index>(f.param_dim()), 0.1);
  const Vector x = Vector::Constant(16, 0.5);
  for (auto _ : state) {
    const auto step = train_step(model, p, x, dx_costate(1));
    benchmark::DoNotOptimize(step.p_next);
  }
}
BENCHMARK(BM_TrainStep);
BENCHMARK_MAIN();
