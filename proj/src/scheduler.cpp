#include "salo/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace salo {

void SchedulerConfig::validate() const {
  if (total_steps < 1) throw std::invalid_argument("scheduler: total_steps must be >= 1");
  if (!(lr_scale > 0.0)) throw std::invalid_argument("scheduler: lr_scale must be positive");
  if (table_loss_n < 2 || table_iter_n < 2) {
    throw std::invalid_argument("scheduler: table dims must be >= 2");
  }
  if (loss_ema_decay < 0.0 || loss_ema_decay >= 1.0) {
    throw std::invalid_argument("scheduler: loss_ema_decay must be in [0,1)");
  }
}

ScheduleResult schedule(const SchedulerConfig& cfg, const fuzzy::FuzzySystem& sys,
                        const fuzzy::LookupTable* table, double loss, std::int64_t step) {
  const double clamped = std::clamp(loss, 0.0, cfg.loss_clamp);
  const double iter_frac =
      std::min(static_cast<double>(step) / static_cast<double>(cfg.total_steps), 1.0);
  const fuzzy::FuzzyOutput o =
      table ? fuzzy::lookup(*table, clamped, iter_frac) : sys.infer(clamped, iter_frac);
  return {o.lr * cfg.lr_scale, std::clamp(o.beta1, 0.0, 0.995), std::clamp(o.beta3, 0.0, 0.995)};
}

FuzzyScheduler::FuzzyScheduler(SchedulerConfig cfg, fuzzy::FuzzySystem sys)
    : cfg_(cfg), sys_(std::move(sys)) {
  cfg_.validate();
  if (cfg_.mode == SchedulerMode::table) {
    table_ = fuzzy::build_lookup_table(sys_, cfg_.table_loss_n, cfg_.table_iter_n);
  }
}

ScheduleResult FuzzyScheduler::on_step(double batch_loss, std::int64_t step) {
  if (step < 1) throw std::invalid_argument("scheduler: step must be >= 1");
  if (ema_started_) {
    loss_ema_ = cfg_.loss_ema_decay * loss_ema_ + (1.0 - cfg_.loss_ema_decay) * batch_loss;
  } else {
    loss_ema_ = batch_loss;
    ema_started_ = true;
  }
  if (cfg_.per_epoch) {
    const std::int64_t epoch = (step - 1) / std::max<std::int64_t>(batches_per_epoch_, 1);
    if (epoch != held_epoch_) {
      held_ = schedule(cfg_, sys_, table_ ? &*table_ : nullptr, loss_ema_, step);
      held_epoch_ = epoch;
    }
    return held_;
  }
  return schedule(cfg_, sys_, table_ ? &*table_ : nullptr, loss_ema_, step);
}

ScheduleHook FuzzyScheduler::hook() {
  return [this](double loss, std::int64_t step) {
    const ScheduleResult r = on_step(loss, step);
    return std::array<double, 3>{r.alpha, r.beta1, r.beta3};
  };
}

}  // namespace salo
