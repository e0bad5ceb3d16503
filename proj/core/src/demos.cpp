#include "paraoptic/demos.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>

#include "paraoptic/error.hpp"

namespace paraoptic {

namespace {

Vector uniform_init(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Vector p(static_cast<Eigen::Index>(n));
  for (auto& v : p) v = u(rng);
  return p;
}

double to_double(const Payoff& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// Sum of per-sample squared errors for a model mapping (params, x_i) to a
// scalar, over a batch packed as samples then targets.
template <class Model>
SmoothMap batch_loss(std::size_t param_dim, std::size_t sample_dim, std::size_t batch,
                     Model model) {
  SmoothMapBuilder b(param_dim, batch * (sample_dim + 1));
  const std::size_t in = batch * (sample_dim + 1);
  std::optional<SmoothMap::Wire> total;
  for (std::size_t i = 0; i < batch; ++i) {
    auto x = b.apply(prim::slice(in, i * sample_dim, sample_dim), {b.input()});
    auto y = b.apply(prim::slice(in, batch * sample_dim + i, 1), {b.input()});
    auto err = b.apply(prim::squared_error(1), {model(b, x), y});
    total = total ? b.apply(prim::add(1), {*total, err}) : err;
  }
  return b.build(*total);
}

struct Batch {
  std::size_t sample_dim;
  std::size_t size;
  Vector data;
};

DemoResult supervised(const SmoothMap& loss, const Vector& data, const RunConfig& cfg,
                      std::mt19937_64& rng) {
  const double alpha = to_double(cfg.alpha);
  const auto learner = apply_R(loss);
  const auto model = reparametrise(learner, gd_lens(alpha, loss.param_dim()));
  const auto seed = dx_costate(1);

  DemoResult r;
  r.columns = {"step", "loss"};
  r.metric = "loss";
  Vector p = uniform_init(loss.param_dim(), rng);
  r.initial_params = p;
  for (std::int64_t step = 0; step < cfg.steps; ++step) {
    r.snapshots.push_back(p);
    TrainStepResult s;
    try {
      s = train_step(model, p, data, seed);
    } catch (const NumericError& e) {
      throw NumericError("step " + std::to_string(step) + ": " + e.what());
    }
    r.rows.push_back({static_cast<double>(step), s.loss});
    p = s.p_next;
  }
  r.snapshots.push_back(p);
  r.final_params = p;
  r.final_metric = forward_eval(loss, p, data).y[0];
  if (!std::isfinite(r.final_metric)) {
    throw NumericError("step " + std::to_string(cfg.steps) + ": non-finite loss");
  }
  return r;
}

DemoResult run_linreg(const RunConfig& cfg, std::mt19937_64& rng) {
  return supervised(linreg_loss_graph(), linreg_batch(), cfg, rng);
}

// 2-4-1 tanh network on the XOR table.
DemoResult run_mlp(const RunConfig& cfg, std::mt19937_64& rng) {
  const std::size_t hidden = 4;
  const std::size_t pdim = hidden * 2 + hidden + hidden + 1;
  const auto loss = batch_loss(pdim, 2, 4, [&](SmoothMapBuilder& b, SmoothMap::Wire x) {
    auto w1 = b.param_slice(0, hidden * 2);
    auto b1 = b.param_slice(hidden * 2, hidden);
    auto w2 = b.param_slice(hidden * 3, hidden);
    auto b2 = b.param_slice(hidden * 4, 1);
    auto h = b.apply(prim::tanh(hidden),
                     {b.apply(prim::bias_add(hidden), {b1, b.apply(prim::linear(hidden, 2), {w1, x})})});
    return b.apply(prim::bias_add(1), {b2, b.apply(prim::linear(1, hidden), {w2, h})});
  });
  Vector data(12);
  data << 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 1, 0;
  return supervised(loss, data, cfg, rng);
}

// Affine map ℝ → ℝ with parameters (w, b), optionally squashed by tanh.
SmoothMap affine1(bool squash) {
  SmoothMapBuilder b(2, 1);
  auto y = b.apply(prim::bias_add(1),
                   {b.param_slice(1, 1), b.apply(prim::linear(1, 1), {b.param_slice(0, 1), b.input()})});
  if (squash) y = b.apply(prim::tanh(1), {y});
  return b.build(y);
}

DemoResult run_gan(const RunConfig& cfg, std::mt19937_64& rng) {
  const double alpha = to_double(cfg.alpha);
  const auto gen = apply_R(affine1(false));
  const auto disc = apply_R(affine1(true));
  Vector pg = uniform_init(2, rng);
  Vector pd = uniform_init(2, rng);
  std::normal_distribution<double> latent(0.0, 1.0);
  std::normal_distribution<double> data(3.0, 0.5);

  DemoResult r;
  r.columns = {"step", "d_fake", "d_real"};
  r.metric = "d_real - d_fake";
  r.initial_params = concat(pg, pd);
  double gap = 0.0;
  for (std::int64_t step = 0; step < cfg.steps; ++step) {
    r.snapshots.push_back(concat(pg, pd));
    Vector z(1), x(1);
    z << latent(rng);
    x << data(rng);
    GanStepResult s;
    try {
      s = gan_step(gen, disc, pg, pd, z, x, alpha);
    } catch (const NumericError& e) {
      throw NumericError("step " + std::to_string(step) + ": " + e.what());
    }
    r.rows.push_back({static_cast<double>(step), s.d_fake, s.d_real});
    pg = s.p_gen_next;
    pd = s.p_disc_next;
    gap = s.d_real - s.d_fake;
  }
  r.snapshots.push_back(concat(pg, pd));
  r.final_params = concat(pg, pd);
  r.final_metric = gap;
  return r;
}

}  // namespace

Vector linreg_batch() {
  Vector data(12);
  data << 0, 0, 1, 0, 0, 1, 1, 1,  //
      0.5, 2.5, -2.5, -0.5;
  return data;
}

SmoothMap linreg_loss_graph() {
  return batch_loss(3, 2, 4, [](SmoothMapBuilder& b, SmoothMap::Wire x) {
    auto wx = b.apply(prim::linear(1, 2), {b.param_slice(0, 2), x});
    return b.apply(prim::bias_add(1), {b.param_slice(2, 1), wx});
  });
}

std::vector<std::string> demo_names() { return {"linreg", "mlp", "gan"}; }

DemoResult run_demo(const std::string& demo, const RunConfig& config) {
  if (config.steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (!std::isfinite(to_double(config.alpha))) throw NumericError("alpha must be finite");
  std::mt19937_64 rng(config.seed);
  if (demo == "linreg") return run_linreg(config, rng);
  if (demo == "mlp") return run_mlp(config, rng);
  if (demo == "gan") return run_gan(config, rng);
  throw std::invalid_argument("unknown demo '" + demo + "'");
}

void write_csv(const DemoResult& result, std::ostream& out) {
  for (std::size_t i = 0; i < result.columns.size(); ++i) {
    out << (i ? "," : "") << result.columns[i];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        std::snprintf(buf, sizeof buf, "%.0f", row[i]);
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      }
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace paraoptic
