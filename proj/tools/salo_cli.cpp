#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "salo/harness.hpp"

namespace {

using salo::harness::ExperimentConfig;

void add_common_options(CLI::App& cmd, ExperimentConfig& cfg) {
  cmd.add_option("--problem", cfg.problem, "quadratic|illcond|rosenbrock|multimodal|mlp");
  cmd.add_option("--steps", cfg.steps, "total step budget (0: epochs * batches)");
  cmd.add_option("--epochs", cfg.epochs, "epoch count when --steps is 0");
  cmd.add_option("--batch", cfg.batch, "mini-batch size (mlp)");
  cmd.add_option("--seed", cfg.seed, "run seed (mandatory for reproducibility)");
  cmd.add_option("--samples", cfg.samples, "dataset size (mlp)");
  cmd.add_option("--coeffs", cfg.quad_coeffs, "quadratic diagonal coefficients");
  cmd.add_option("--layers", cfg.mlp_layers, "mlp layer sizes");
  cmd.add_option("--lr", cfg.hyper.alpha, "learning rate (baselines)");
  cmd.add_option("--momentum", cfg.hyper.momentum, "sgd momentum");
  cmd.add_option("--weight-decay", cfg.hyper.weight_decay, "adamw decoupled decay");
  cmd.add_option("--salo-lr", cfg.salo_hyper.alpha, "salo learning rate");
  cmd.add_option("--beta1", cfg.salo_hyper.beta1, "salo first-moment decay");
  cmd.add_option("--beta2", cfg.salo_hyper.beta2, "salo squared-gradient decay");
  cmd.add_option("--beta3", cfg.salo_hyper.beta3, "salo curvature-EMA decay");
  cmd.add_option("--hess-floor", cfg.salo_hyper.hess_floor, "minimum curvature in the update");
  cmd.add_option("--step-cap", cfg.salo_hyper.step_cap, "per-coordinate update cap");
  cmd.add_option("--scheduler", cfg.scheduler, "off|direct|table");
  cmd.add_option("--lr-scale", cfg.sched.lr_scale, "scheduler lr multiplier");
  cmd.add_option("--total-steps", cfg.sched.total_steps, "scheduler horizon T");
  cmd.add_flag("--per-epoch", cfg.sched.per_epoch, "refresh schedule once per epoch");
  cmd.add_option_function<std::string>(
      "--rules", [&cfg](const std::string& p) { cfg.rules_path = p; }, "rule definition file");
  cmd.add_option("--threshold", cfg.threshold, "loss threshold for summary statistic");
  cmd.configurable();
}

void print_summary(const salo::harness::Summary& s) {
  salo::harness::write_summary_line(s, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"second-order optimizer benchmark harness"};
  app.require_subcommand(1);
  app.fallthrough();
  // Keys live under a section named after the subcommand, e.g. [run].
  app.set_config("--config", "", "key=value config file; command-line flags override");

  ExperimentConfig cfg;
  std::string out_path;

  auto* run_cmd = app.add_subcommand("run", "run one seeded experiment, write per-step CSV");
  add_common_options(*run_cmd, cfg);
  run_cmd->add_option("--optimizer", cfg.optimizer, "sgd|adam|adamw|salo");
  run_cmd->add_option("--out", cfg.out_path, "per-step CSV path");

  ExperimentConfig cmp_cfg;
  std::vector<std::string> optimizers = {"sgd", "adam", "adamw", "salo"};
  auto* cmp_cmd = app.add_subcommand("compare", "run several optimizers on one problem");
  add_common_options(*cmp_cmd, cmp_cfg);
  cmp_cmd->add_option("--optimizers", optimizers, "optimizer ids to compare");
  cmp_cmd->add_option("--out", out_path, "long-format comparison CSV path");

  std::string ch_problem = "rosenbrock";
  std::vector<double> ch_point;
  std::vector<double> ch_r = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  std::string ch_out;
  auto* ch_cmd = app.add_subcommand("check-hessian", "FD-vs-oracle error sweep");
  ch_cmd->configurable();
  ch_cmd->add_option("--problem", ch_problem, "problem with analytic oracle");
  ch_cmd->add_option("--point", ch_point, "evaluation point (default: problem start)");
  ch_cmd->add_option("--r", ch_r, "perturbation step list");
  ch_cmd->add_option("--out", ch_out, "also write the table to this path");

  std::size_t ft_loss_n = 61, ft_iter_n = 61;
  std::string ft_out = "fuzzy_table.csv";
  std::string ft_rules;
  auto* ft_cmd = app.add_subcommand("fuzzy-table", "precompute the fuzzy lookup table");
  ft_cmd->configurable();
  ft_cmd->add_option("--loss-n", ft_loss_n, "loss grid size");
  ft_cmd->add_option("--iter-n", ft_iter_n, "iteration grid size");
  ft_cmd->add_option("--rules", ft_rules, "rule definition file");
  ft_cmd->add_option("--out", ft_out, "output CSV path");

  try {
    app.parse(argc, argv);

    if (run_cmd->parsed()) {
      const auto res = salo::harness::run_experiment(cfg);
      print_summary(res.summary);
      return res.summary.diverged ? salo::harness::kExitDiverged : salo::harness::kExitOk;
    }
    if (cmp_cmd->parsed()) {
      std::vector<ExperimentConfig> cfgs;
      for (const auto& id : optimizers) {
        ExperimentConfig c = cmp_cfg;
        c.optimizer = id;
        cfgs.push_back(std::move(c));
      }
      const auto results = salo::harness::compare(cfgs, out_path);
      bool diverged = false;
      for (const auto& r : results) {
        print_summary(r.summary);
        diverged = diverged || r.summary.diverged;
      }
      return diverged ? salo::harness::kExitDiverged : salo::harness::kExitOk;
    }
    if (ch_cmd->parsed()) {
      const int rc = salo::harness::check_hessian(ch_problem, ch_point, ch_r, std::cout);
      if (rc == salo::harness::kExitOk && !ch_out.empty()) {
        std::ofstream out(ch_out);
        if (!out) {
          std::cerr << "cannot open output file: " << ch_out << "\n";
          return salo::harness::kExitIo;
        }
        salo::harness::check_hessian(ch_problem, ch_point, ch_r, out);
      }
      return rc;
    }
    if (ft_cmd->parsed()) {
      return salo::harness::fuzzy_table(
          ft_out, ft_loss_n, ft_iter_n,
          ft_rules.empty() ? std::nullopt : std::optional<std::string>(ft_rules), std::cerr);
    }
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : salo::harness::kExitUsage;
  } catch (const salo::harness::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return salo::harness::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return salo::harness::kExitUsage;
  }
  return salo::harness::kExitUsage;
}
