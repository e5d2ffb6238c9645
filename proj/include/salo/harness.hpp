#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "salo/mlp.hpp"
#include "salo/objective.hpp"
#include "salo/optim.hpp"
#include "salo/salo_optimizer.hpp"
#include "salo/scheduler.hpp"

namespace salo::harness {

// Exit codes shared by the library entry points and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDiverged = 2;
inline constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string problem = "quadratic";     // quadratic|illcond|rosenbrock|multimodal|mlp
  Vec quad_coeffs = {1.0, 3.0};
  std::size_t illcond_dim = 10;
  double illcond_cond = 1e4;
  std::vector<std::size_t> mlp_layers = {2, 16, 2};
  std::size_t samples = 512;

  std::string optimizer = "salo";        // sgd|adam|adamw|salo
  HyperParams hyper;                     // baselines
  SaloHyper salo_hyper;                  // salo

  std::string scheduler = "off";         // off|direct|table
  SchedulerConfig sched;
  std::optional<std::string> rules_path;

  std::int64_t steps = 0;                // 0: use epochs * batches_per_epoch
  std::int64_t epochs = 1;
  std::size_t batch = 32;
  std::uint64_t seed = 1;
  std::string out_path;                  // empty: no CSV written
  double threshold = 1e-6;               // steps-to-threshold statistic
};

struct Summary {
  std::string optimizer;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double best_loss = 0.0;
  std::int64_t steps_to_threshold = -1;
  bool diverged = false;
  // Classification-only metrics (MLP problems).
  std::optional<double> train_loss, val_loss, train_acc, val_acc;
};

struct ExperimentResult {
  RunResult run;
  Summary summary;
};

std::unique_ptr<Objective> make_problem(const ExperimentConfig& cfg);
Stepper make_stepper(const ExperimentConfig& cfg, std::size_t dim);

// Executes one seeded run; writes the per-step CSV (plus a trailing
// `# summary` line) when out_path is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Runs each config on the shared problem and writes a long-format CSV.
// All configs must agree on problem and step budget.
std::vector<ExperimentResult> compare(const std::vector<ExperimentConfig>& cfgs,
                                      const std::string& out_path);

void write_run_csv(const std::vector<TrainRecord>& records, const Summary& s, std::ostream& out);
void write_summary_line(const Summary& s, std::ostream& out);

// r-sweep of both FD modes against the analytic oracle; text table.
int check_hessian(const std::string& problem, const Vec& point, const std::vector<double>& r_list,
                  std::ostream& out);

// Lookup-table export (fuzzy module CSV schema).
int fuzzy_table(const std::string& out_path, std::size_t loss_n, std::size_t iter_n,
                const std::optional<std::string>& rules_path, std::ostream& err);

}  // namespace salo::harness
