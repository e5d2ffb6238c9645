#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "salo/objective.hpp"

namespace salo {

struct HyperParams {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 0.01;
  double momentum = 0.9;
  double eps = 1e-8;

  void validate() const;
};

struct MomentState {
  Vec m;
  Vec v;
  std::int64_t t = 0;

  static MomentState zeros(std::size_t dim) { return {Vec(dim, 0.0), Vec(dim, 0.0), 0}; }
};

// All step functions are pure: same inputs give bit-identical outputs.
std::pair<Vec, MomentState> sgd_step(const Vec& w, const Vec& g, MomentState state,
                                     const HyperParams& h);
std::pair<Vec, MomentState> adam_step(const Vec& w, const Vec& g, MomentState state,
                                      const HyperParams& h);
std::pair<Vec, MomentState> adamw_step(const Vec& w, const Vec& g, MomentState state,
                                       const HyperParams& h);

// One row of training output. Loss is recorded before the step is applied.
struct TrainRecord {
  std::int64_t step = 0;
  std::int64_t epoch = 0;
  double loss = 0.0;
  double lr = 0.0;
  double beta1 = 0.0;
  double beta3 = 0.0;
  double grad_norm = 0.0;
  double elapsed_ms = 0.0;
};

struct RunResult {
  std::vector<TrainRecord> records;
  Vec final_w;
  bool diverged = false;
  double best_loss = 0.0;
};

// Per-step hook: given (batch loss, 1-based step), may adjust hyperparameters
// before the update; returns the (lr, beta1, beta3) actually used for logging.
using ScheduleHook = std::function<std::array<double, 3>(double loss, std::int64_t step)>;

// Optimizer abstraction used by the run loop.
struct Stepper {
  std::string id;
  // Applies one update in place; returns false on non-finite input gradient.
  std::function<Vec(const Vec& w, const Vec& g)> step;
  std::function<std::array<double, 3>()> logged_hypers;  // (lr, beta1, beta3)
  std::function<void(double lr, double b1, double b3)> set_hypers;
};

struct RunOptions {
  std::int64_t steps = 0;      // total step budget; 0 = epochs * batches_per_epoch
  std::int64_t epochs = 1;
  ScheduleHook schedule;       // optional
};

RunResult run(Stepper& opt, const Objective& obj, const Vec& w0, const RunOptions& opts);

// Factories binding state + hyperparameters into a Stepper.
Stepper make_sgd(std::size_t dim, HyperParams h);
Stepper make_adam(std::size_t dim, HyperParams h);
Stepper make_adamw(std::size_t dim, HyperParams h);

}  // namespace salo
