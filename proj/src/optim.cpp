#include "salo/optim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

namespace salo {

void HyperParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("hyper: alpha must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0) throw std::invalid_argument("hyper: beta1 must be in [0,1)");
  if (beta2 < 0.0 || beta2 >= 1.0) throw std::invalid_argument("hyper: beta2 must be in [0,1)");
  if (weight_decay < 0.0) throw std::invalid_argument("hyper: weight_decay must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0) throw std::invalid_argument("hyper: momentum must be in [0,1)");
  if (!(eps > 0.0)) throw std::invalid_argument("hyper: eps must be positive");
}

namespace {

void check_dims(const Vec& w, const Vec& g, const MomentState& s, const char* what) {
  require_dim(g, w.size(), what);
  require_dim(s.m, w.size(), what);
  require_dim(s.v, w.size(), what);
}

}  // namespace

std::pair<Vec, MomentState> sgd_step(const Vec& w, const Vec& g, MomentState state,
                                     const HyperParams& h) {
  check_dims(w, g, state, "sgd_step");
  Vec out = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    state.m[i] = h.momentum * state.m[i] + g[i];
    out[i] = w[i] - h.alpha * state.m[i];
  }
  state.t += 1;
  return {std::move(out), std::move(state)};
}

std::pair<Vec, MomentState> adam_step(const Vec& w, const Vec& g, MomentState state,
                                      const HyperParams& h) {
  check_dims(w, g, state, "adam_step");
  state.t += 1;
  const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(state.t));
  Vec out = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g[i];
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g[i] * g[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    const double u = h.alpha * mhat / (std::sqrt(vhat) + h.eps);
    if (!std::isfinite(u)) {
      throw std::runtime_error("adam_step: non-finite update at coordinate " + std::to_string(i));
    }
    out[i] = w[i] - u;
  }
  return {std::move(out), std::move(state)};
}

std::pair<Vec, MomentState> adamw_step(const Vec& w, const Vec& g, MomentState state,
                                       const HyperParams& h) {
  check_dims(w, g, state, "adamw_step");
  Vec decayed = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    decayed[i] = w[i] - h.alpha * h.weight_decay * w[i];
  }
  return adam_step(decayed, g, std::move(state), h);
}

RunResult run(Stepper& opt, const Objective& obj, const Vec& w0, const RunOptions& opts) {
  require_dim(w0, obj.dim(), "run");
  const std::int64_t bpe = static_cast<std::int64_t>(obj.batches_per_epoch());
  const std::int64_t total = opts.steps > 0 ? opts.steps : opts.epochs * bpe;
  if (total < 1) throw std::invalid_argument("run: step budget must be >= 1");

  RunResult res;
  res.records.reserve(static_cast<std::size_t>(total));
  Vec w = w0;
  res.best_loss = std::numeric_limits<double>::infinity();
  for (std::int64_t s = 1; s <= total; ++s) {
    const auto t0 = std::chrono::steady_clock::now();
    TrainRecord rec;
    rec.step = s;
    rec.epoch = (s - 1) / bpe;
    const BatchRef batch{rec.epoch, (s - 1) % bpe};
    rec.loss = obj.loss(w, batch);
    if (!std::isfinite(rec.loss)) {
      res.diverged = true;
      res.records.push_back(rec);
      break;
    }
    res.best_loss = std::min(res.best_loss, rec.loss);
    if (opts.schedule) {
      const auto hyp = opts.schedule(rec.loss, s);
      opt.set_hypers(hyp[0], hyp[1], hyp[2]);
    }
    const auto logged = opt.logged_hypers();
    rec.lr = logged[0];
    rec.beta1 = logged[1];
    rec.beta3 = logged[2];
    const Vec g = obj.grad(w, batch);
    rec.grad_norm = norm2(g);
    w = opt.step(w, g);
    rec.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.records.push_back(rec);
  }
  res.final_w = std::move(w);
  return res;
}

Stepper make_sgd(std::size_t dim, HyperParams h) {
  h.validate();
  auto state = std::make_shared<MomentState>(MomentState::zeros(dim));
  auto hp = std::make_shared<HyperParams>(h);
  Stepper s;
  s.id = "sgd";
  s.step = [state, hp](const Vec& w, const Vec& g) {
    auto [w2, st2] = sgd_step(w, g, *state, *hp);
    *state = std::move(st2);
    return w2;
  };
  s.logged_hypers = [hp]() { return std::array<double, 3>{hp->alpha, hp->momentum, 0.0}; };
  s.set_hypers = [hp](double lr, double, double) { hp->alpha = lr; };
  return s;
}

namespace {

Stepper make_adam_like(std::size_t dim, HyperParams h, bool decoupled) {
  h.validate();
  auto state = std::make_shared<MomentState>(MomentState::zeros(dim));
  auto hp = std::make_shared<HyperParams>(h);
  Stepper s;
  s.id = decoupled ? "adamw" : "adam";
  s.step = [state, hp, decoupled](const Vec& w, const Vec& g) {
    auto [w2, st2] = decoupled ? adamw_step(w, g, *state, *hp) : adam_step(w, g, *state, *hp);
    *state = std::move(st2);
    return w2;
  };
  s.logged_hypers = [hp]() { return std::array<double, 3>{hp->alpha, hp->beta1, 0.0}; };
  s.set_hypers = [hp](double lr, double b1, double) {
    hp->alpha = lr;
    hp->beta1 = b1;
  };
  return s;
}

}  // namespace

Stepper make_adam(std::size_t dim, HyperParams h) { return make_adam_like(dim, h, false); }
Stepper make_adamw(std::size_t dim, HyperParams h) { return make_adam_like(dim, h, true); }

}  // namespace salo
