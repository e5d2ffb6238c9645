#include <doctest.h>

#include <cmath>

#include "salo/scheduler.hpp"

using namespace salo;

TEST_CASE("scheduler config validation") {
  SchedulerConfig c;
  c.total_steps = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SchedulerConfig{};
  c.lr_scale = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SchedulerConfig{};
  c.loss_ema_decay = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SchedulerConfig{};
  c.table_iter_n = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_NOTHROW(SchedulerConfig{}.validate());
}

TEST_CASE("schedule: clamps loss and iteration fraction") {
  const fuzzy::FuzzySystem sys = fuzzy::default_system();
  SchedulerConfig c;
  c.total_steps = 100;
  // Past the horizon, iter_frac saturates at 1.
  const ScheduleResult at_end = schedule(c, sys, nullptr, 1.0, 100);
  const ScheduleResult past_end = schedule(c, sys, nullptr, 1.0, 5000);
  CHECK(at_end.alpha == past_end.alpha);
  CHECK(at_end.beta1 == past_end.beta1);
  // Losses beyond the clamp behave like the clamp value.
  const ScheduleResult big = schedule(c, sys, nullptr, 1e9, 10);
  const ScheduleResult edge = schedule(c, sys, nullptr, 6.0, 10);
  CHECK(big.alpha == edge.alpha);
  CHECK(big.beta3 == edge.beta3);
}

TEST_CASE("schedule: output ranges") {
  const fuzzy::FuzzySystem sys = fuzzy::default_system();
  SchedulerConfig c;
  c.total_steps = 50;
  for (double loss : {0.0, 0.7, 2.5, 6.0}) {
    for (std::int64_t step : {std::int64_t{1}, std::int64_t{25}, std::int64_t{50}}) {
      const ScheduleResult r = schedule(c, sys, nullptr, loss, step);
      CHECK(r.alpha > 0.0);
      CHECK(r.alpha <= 1.5e-7 * c.lr_scale);
      CHECK(r.beta1 >= 0.0);
      CHECK(r.beta1 <= 0.995);
      CHECK(r.beta3 >= 0.0);
      CHECK(r.beta3 <= 0.995);
    }
  }
}

TEST_CASE("schedule: lr_scale multiplies the defuzzified rate") {
  const fuzzy::FuzzySystem sys = fuzzy::default_system();
  SchedulerConfig a;
  a.total_steps = 10;
  SchedulerConfig b = a;
  b.lr_scale = 2.0 * a.lr_scale;
  const double ra = schedule(a, sys, nullptr, 1.0, 5).alpha;
  const double rb = schedule(b, sys, nullptr, 1.0, 5).alpha;
  CHECK(rb == doctest::Approx(2.0 * ra).epsilon(1e-14));
}

TEST_CASE("schedule: table mode agrees with direct mode at grid nodes") {
  const fuzzy::FuzzySystem sys = fuzzy::default_system();
  SchedulerConfig c;
  c.total_steps = 60;  // step 30 lands exactly on iter grid node 0.5 of a 61-point grid
  const fuzzy::LookupTable t = fuzzy::build_lookup_table(sys, 61, 61);
  const ScheduleResult direct = schedule(c, sys, nullptr, 3.0, 30);
  const ScheduleResult table = schedule(c, sys, &t, 3.0, 30);
  CHECK(table.alpha == doctest::Approx(direct.alpha).epsilon(1e-12));
  CHECK(table.beta1 == doctest::Approx(direct.beta1).epsilon(1e-12));
  CHECK(table.beta3 == doctest::Approx(direct.beta3).epsilon(1e-12));
}

TEST_CASE("fuzzy scheduler: first observation seeds the loss EMA") {
  SchedulerConfig c;
  c.total_steps = 100;
  FuzzyScheduler sched(c, fuzzy::default_system());
  // First call must behave as if the EMA equals the raw loss.
  const ScheduleResult r1 = sched.on_step(2.0, 1);
  const ScheduleResult ref = schedule(c, fuzzy::default_system(), nullptr, 2.0, 1);
  CHECK(r1.alpha == ref.alpha);
  CHECK(r1.beta1 == ref.beta1);
  CHECK_THROWS_AS(sched.on_step(1.0, 0), std::invalid_argument);
}

TEST_CASE("fuzzy scheduler: EMA smoothing replays deterministically") {
  SchedulerConfig c;
  c.total_steps = 20;
  FuzzyScheduler a(c, fuzzy::default_system());
  FuzzyScheduler b(c, fuzzy::default_system());
  double ema = 0.0;
  for (std::int64_t s = 1; s <= 20; ++s) {
    const double loss = 5.0 / static_cast<double>(s);
    ema = (s == 1) ? loss : 0.9 * ema + (1.0 - 0.9) * loss;
    const ScheduleResult ra = a.on_step(loss, s);
    const ScheduleResult rb = b.on_step(loss, s);
    CHECK(ra.alpha == rb.alpha);
    const ScheduleResult expect = schedule(c, a.system(), nullptr, ema, s);
    CHECK(ra.alpha == expect.alpha);
    CHECK(ra.beta3 == expect.beta3);
  }
}

TEST_CASE("fuzzy scheduler: per-epoch mode holds outputs within an epoch") {
  SchedulerConfig c;
  c.total_steps = 12;
  c.per_epoch = true;
  FuzzyScheduler sched(c, fuzzy::default_system());
  sched.set_batches_per_epoch(4);
  const ScheduleResult r1 = sched.on_step(3.0, 1);
  const ScheduleResult r2 = sched.on_step(0.1, 2);  // same epoch: held
  const ScheduleResult r4 = sched.on_step(0.1, 4);
  CHECK(r1.alpha == r2.alpha);
  CHECK(r1.alpha == r4.alpha);
  const ScheduleResult r5 = sched.on_step(0.1, 5);  // epoch boundary: refresh
  CHECK(r5.alpha != r1.alpha);
}

TEST_CASE("fuzzy scheduler: table mode is built once and used by the hook") {
  SchedulerConfig c;
  c.total_steps = 10;
  c.mode = SchedulerMode::table;
  c.table_loss_n = 31;
  c.table_iter_n = 31;
  FuzzyScheduler sched(c, fuzzy::default_system());
  ScheduleHook hook = sched.hook();
  const auto h = hook(1.5, 1);
  CHECK(h[0] > 0.0);
  CHECK(h[1] <= 0.995);
  CHECK(h[2] <= 0.995);
  // Hook output matches a fresh scheduler fed the same sequence.
  FuzzyScheduler ref(c, fuzzy::default_system());
  const ScheduleResult r = ref.on_step(1.5, 1);
  CHECK(h[0] == r.alpha);
  CHECK(h[1] == r.beta1);
  CHECK(h[2] == r.beta3);
}
