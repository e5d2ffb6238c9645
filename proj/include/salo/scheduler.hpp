#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "salo/fuzzy.hpp"
#include "salo/optim.hpp"

namespace salo {

enum class SchedulerMode { direct, table };

struct SchedulerConfig {
  SchedulerMode mode = SchedulerMode::direct;
  std::int64_t total_steps = 1;
  double lr_scale = 1e4;       // maps the 1e-7-scale lr universe onto a usable step
  double loss_clamp = 6.0;
  std::size_t table_loss_n = 61;
  std::size_t table_iter_n = 61;
  bool per_epoch = false;      // refresh once per epoch instead of every step
  double loss_ema_decay = 0.9;

  void validate() const;
};

struct ScheduleResult {
  double alpha;
  double beta1;
  double beta3;
};

// Pure mapping from (smoothed loss, step) to hyperparameters. Loss is clamped
// to [0, loss_clamp], the step to iter_frac = min(step/T, 1); beta outputs are
// clamped to [0, 0.995].
ScheduleResult schedule(const SchedulerConfig& cfg, const fuzzy::FuzzySystem& sys,
                        const fuzzy::LookupTable* table, double loss, std::int64_t step);

// Stateful wrapper owning the loss EMA; produces the hook the run loop calls
// before each optimizer step.
class FuzzyScheduler {
 public:
  FuzzyScheduler(SchedulerConfig cfg, fuzzy::FuzzySystem sys);

  ScheduleResult on_step(double batch_loss, std::int64_t step);
  ScheduleHook hook();

  const SchedulerConfig& config() const { return cfg_; }
  const fuzzy::FuzzySystem& system() const { return sys_; }

 private:
  SchedulerConfig cfg_;
  fuzzy::FuzzySystem sys_;
  std::optional<fuzzy::LookupTable> table_;
  double loss_ema_ = 0.0;
  bool ema_started_ = false;
  std::int64_t batches_per_epoch_ = 1;
  ScheduleResult held_{};  // last output, reused within an epoch in per-epoch mode
  std::int64_t held_epoch_ = -1;

 public:
  void set_batches_per_epoch(std::int64_t bpe) { batches_per_epoch_ = bpe; }
};

}  // namespace salo
