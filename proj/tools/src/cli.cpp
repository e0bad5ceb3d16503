#include "cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "paraoptic/demos.hpp"
#include "paraoptic/error.hpp"

namespace paraoptic::cli {

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parametrised lenses: compositional games and gradient-based learners"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve a normal-form game given as JSON");
  std::string spec_path, selection;
  SolveOptions solve_opts;
  solve->add_option("spec", spec_path, "Game description")->required();
  solve->add_option("--selection", selection,
                    "argmax_each, hicks_sum, or comma-separated argmax/total per player");
  solve->add_option("--max-strategies", solve_opts.max_strategies,
                    "Cap on strategy profiles and strategy-set sizes");
  solve->add_option("--max-costates", solve_opts.max_costates,
                    "Cap on enumerations inside selection relations");

  auto* train = app.add_subcommand("train", "Run a training demo and write per-step CSV");
  std::string demo, alpha = "1/20";
  RunConfig cfg;
  train->add_option("demo", demo, "linreg, mlp or gan")
      ->required()
      ->check(CLI::IsMember(demo_names()));
  train->add_option("--seed", cfg.seed, "Initialisation seed");
  train->add_option("--steps", cfg.steps, "Number of updates")->check(CLI::NonNegativeNumber);
  train->add_option("--alpha", alpha, "Learning rate, e.g. 0.05 or 1/20");
  train->add_option("--out", cfg.out, "CSV path (default <demo>.csv)");

  auto* check = app.add_subcommand("check", "Run the law and property suites");
  CheckOptions check_opts;
  std::string fault = "none";
  check->add_option("--filter", check_opts.filter, "Only properties whose name contains this");
  check->add_option("--seed", check_opts.seed, "Seed for random instances");
  check->add_option("--inject-fault", fault, "Mutate a component to exercise the suite")
      ->check(CLI::IsMember({"none", "gd_sign", "pd_cooperate"}))
      ->group("");
  check->add_flag_callback("--list", [&out] {
    for (const auto& n : check_names()) out << n << '\n';
    throw CLI::Success();
  }, "List property names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*solve) {
      auto spec = load_game_spec(spec_path);
      if (!selection.empty()) spec.selection = parse_selection(selection, spec.game.players());
      const auto report = solve_report(spec, solve_opts);
      out << report.dump() << '\n';
      const bool ok = report["agree"].get<bool>() &&
                      (!report.contains("routes_agree") || report["routes_agree"].get<bool>());
      return ok ? kOk : kFailure;
    }
    if (*train) {
      try {
        cfg.alpha = parse_payoff(alpha);
      } catch (const std::invalid_argument& e) {
        err << "--alpha: " << e.what() << '\n';
        return kUsage;
      }
      if (cfg.out.empty()) cfg.out = demo + ".csv";
      const auto result = run_demo(demo, cfg);
      std::ofstream csv(cfg.out);
      if (!csv) {
        err << "cannot write " << cfg.out << '\n';
        return kFailure;
      }
      write_csv(result, csv);
      csv.close();
      if (!csv) {
        err << "write failed for " << cfg.out << '\n';
        return kFailure;
      }
      out << demo << ": " << result.rows.size() << " steps, final " << result.metric << " = "
          << result.final_metric << ", csv " << cfg.out << '\n';
      return kOk;
    }
    if (fault == "gd_sign") check_opts.fault = Fault::kGdSign;
    if (fault == "pd_cooperate") check_opts.fault = Fault::kPdCooperate;
    return run_checks(check_opts, out) == 0 ? kOk : kFailure;
  } catch (const ParseError& e) {
    err << "parse error at " << e.what() << '\n';
    return kUsage;
  } catch (const SizeError& e) {
    err << "enumeration cap exceeded: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace paraoptic::cli
