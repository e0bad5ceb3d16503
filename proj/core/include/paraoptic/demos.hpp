#pragma once

// Small deterministic training runs built from learner lenses.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "paraoptic/finite.hpp"
#include "paraoptic/learner.hpp"

namespace paraoptic {

struct RunConfig {
  std::uint64_t seed = 7;
  std::int64_t steps = 500;
  Payoff alpha{1, 20};
  std::string out;
};

struct DemoResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Vector initial_params;
  Vector final_params;
  // Parameters before each step, then after the last one.
  std::vector<Vector> snapshots;
  std::string metric;
  double final_metric = 0.0;
};

std::vector<std::string> demo_names();

// Parameters start uniform in [-0.5, 0.5] from a mt19937_64 seeded with
// config.seed. Throws std::invalid_argument for an unknown demo or negative
// steps, NumericError (naming the step) on a non-finite loss.
DemoResult run_demo(const std::string& demo, const RunConfig& config);

// Header row then one row per step; doubles printed round-trip exact.
void write_csv(const DemoResult& result, std::ostream& out);

// The linear-regression data set and model, exposed for tests: four points
// on y = 2 x1 - 3 x2 + 1/2, packed as (x1, x2) pairs then the targets.
Vector linreg_batch();
SmoothMap linreg_loss_graph();

}  // namespace paraoptic
