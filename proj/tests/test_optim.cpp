#include <doctest.h>

#include <cmath>

#include "salo/objective.hpp"
#include "salo/optim.hpp"

using namespace salo;

namespace {

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("sgd: two-step hand trace on f = w^2") {
  HyperParams h;
  h.alpha = 0.1;
  h.momentum = 0.9;
  Vec w = {1.0};
  auto st = MomentState::zeros(1);
  // g = 2w. Step 1: m = 2, w = 1 - 0.1*2 = 0.8.
  std::tie(w, st) = sgd_step(w, {2.0 * w[0]}, st, h);
  CHECK(near(w[0], 0.8));
  CHECK(near(st.m[0], 2.0));
  CHECK(st.t == 1);
  // Step 2: g = 1.6, m = 0.9*2 + 1.6 = 3.4, w = 0.8 - 0.34 = 0.46.
  std::tie(w, st) = sgd_step(w, {2.0 * w[0]}, st, h);
  CHECK(near(w[0], 0.46));
  CHECK(near(st.m[0], 3.4));
}

TEST_CASE("adam: three-step golden trace on f = w^2") {
  HyperParams h;
  h.alpha = 0.1;
  h.beta1 = 0.9;
  h.beta2 = 0.999;
  h.eps = 1e-8;
  Vec w = {1.0};
  auto st = MomentState::zeros(1);

  std::tie(w, st) = adam_step(w, {2.0 * w[0]}, st, h);
  CHECK(near(w[0], 0.90000000049999995));
  CHECK(near(st.m[0], 0.19999999999999996));
  CHECK(near(st.v[0], 0.0040000000000000036));

  std::tie(w, st) = adam_step(w, {2.0 * w[0]}, st, h);
  CHECK(near(w[0], 0.80041222869179285));
  CHECK(near(st.m[0], 0.36000000009999988));
  CHECK(near(st.v[0], 0.0072360000036000068));

  std::tie(w, st) = adam_step(w, {2.0 * w[0]}, st, h);
  CHECK(near(w[0], 0.70158627294603026));
  CHECK(near(st.m[0], 0.48408244582835847));
  CHECK(near(st.v[0], 0.0097914029469538602));
  CHECK(st.t == 3);
}

TEST_CASE("adamw: zero decay reduces to adam bit-for-bit") {
  HyperParams h;
  h.weight_decay = 0.0;
  const Vec w = {1.5, -0.5};
  const Vec g = {0.3, -0.7};
  auto [wa, sa] = adam_step(w, g, MomentState::zeros(2), h);
  auto [ww, sw] = adamw_step(w, g, MomentState::zeros(2), h);
  CHECK(wa == ww);
  CHECK(sa.m == sw.m);
  CHECK(sa.v == sw.v);
}

TEST_CASE("adamw: decoupled decay shrinks weights before the adam update") {
  HyperParams h;
  h.alpha = 0.1;
  h.weight_decay = 0.01;
  // Zero gradient keeps the adam update at zero, leaving only the decay.
  auto [w2, st] = adamw_step({1.0}, {0.0}, MomentState::zeros(1), h);
  CHECK(near(w2[0], 0.999));
  (void)st;
}

TEST_CASE("step functions are pure") {
  HyperParams h;
  const Vec w = {0.2, -0.9};
  const Vec g = {1.0, 2.0};
  const auto st = MomentState::zeros(2);
  for (auto* fn : {&sgd_step, &adam_step, &adamw_step}) {
    auto [w1, s1] = (*fn)(w, g, st, h);
    auto [w2, s2] = (*fn)(w, g, st, h);
    CHECK(w1 == w2);
    CHECK(s1.m == s2.m);
    CHECK(s1.v == s2.v);
  }
}

TEST_CASE("hyperparameter validation") {
  HyperParams h;
  h.alpha = 0.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = HyperParams{};
  h.beta2 = 1.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = HyperParams{};
  h.momentum = -0.1;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  CHECK_NOTHROW(HyperParams{}.validate());
}

TEST_CASE("run: sgd above the stability bound is flagged diverged") {
  const Quadratic q({1.0, 3.0});  // L = 6, stable only below alpha = 1/3
  HyperParams h;
  h.alpha = 1.0;
  h.momentum = 0.0;
  Stepper opt = make_sgd(2, h);
  RunOptions opts;
  opts.steps = 2000;
  const RunResult res = run(opt, q, {1.0, 1.0}, opts);
  CHECK(res.diverged);
  CHECK(res.records.size() < 2000);
  CHECK_FALSE(std::isfinite(res.records.back().loss));
}

TEST_CASE("run: adam converges on the quadratic") {
  const Quadratic q({1.0, 3.0});
  HyperParams h;
  h.alpha = 0.4;
  Stepper opt = make_adam(2, h);
  RunOptions opts;
  opts.steps = 200;
  const RunResult res = run(opt, q, {1.0, 1.0}, opts);
  CHECK_FALSE(res.diverged);
  CHECK(res.records.size() == 200);
  CHECK(res.best_loss < 1e-3);
  CHECK(q.loss(res.final_w) < 1e-3);
}

TEST_CASE("run: record bookkeeping and schedule hook application") {
  const Quadratic q({1.0});
  Stepper opt = make_sgd(1, HyperParams{});
  RunOptions opts;
  opts.steps = 3;
  opts.schedule = [](double, std::int64_t step) {
    return std::array<double, 3>{1e-3 * static_cast<double>(step), 0.5, 0.0};
  };
  const RunResult res = run(opt, q, {1.0}, opts);
  REQUIRE(res.records.size() == 3);
  CHECK(res.records[0].step == 1);
  CHECK(res.records[0].loss == 1.0);  // loss recorded before the step
  CHECK(res.records[2].lr == 3e-3);   // hook output is what gets logged
  CHECK(res.records[0].grad_norm == 2.0);
}

TEST_CASE("run: zero steps uses epochs times batches_per_epoch") {
  const Quadratic q({1.0});
  Stepper opt = make_sgd(1, HyperParams{});
  RunOptions opts;
  opts.epochs = 4;  // batches_per_epoch = 1 for full-batch objectives
  const RunResult res = run(opt, q, {1.0}, opts);
  CHECK(res.records.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(res.records[i].epoch == static_cast<std::int64_t>(i));
  }
}
