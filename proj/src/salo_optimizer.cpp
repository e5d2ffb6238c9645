#include "salo/salo_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace salo {

void SaloHyper::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("salo: alpha must be positive");
  for (double b : {beta1, beta2, beta3}) {
    if (b < 0.0 || b >= 1.0) throw std::invalid_argument("salo: betas must be in [0,1)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("salo: eps must be positive");
  if (!(hess_floor > 0.0)) throw std::invalid_argument("salo: hess_floor must be positive");
  if (!(step_cap > 0.0)) throw std::invalid_argument("salo: step_cap must be positive");
}

SaloState SaloState::init(std::size_t dim) {
  SaloState s;
  s.m.assign(dim, 0.0);
  s.v.assign(dim, 0.0);
  s.H.assign(dim, 0.001);
  s.prev_g.assign(dim, 0.0);
  s.delta_w.assign(dim, 0.01);
  return s;
}

Vec estimate_der2nd(const Vec& prev_g, const Vec& m, const Vec& delta_w, double eps,
                    std::int64_t* nonfinite_count) {
  require_dim(m, prev_g.size(), "estimate_der2nd");
  require_dim(delta_w, prev_g.size(), "estimate_der2nd");
  if (!(eps > 0.0)) throw std::invalid_argument("estimate_der2nd: eps must be positive");
  Vec out(prev_g.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (prev_g[i] - m[i]) / (delta_w[i] + eps);
    if (!std::isfinite(out[i])) {
      out[i] = 0.0;  // defer to the beta3 EMA's memory
      if (nonfinite_count) ++*nonfinite_count;
    }
  }
  return out;
}

Vec bias_correct(const Vec& x, double beta, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("bias_correct: t must be >= 1");
  if (beta < 0.0 || beta >= 1.0) throw std::invalid_argument("bias_correct: beta must be in [0,1)");
  const double denom = 1.0 - std::pow(beta, static_cast<double>(t));
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / denom;
  return out;
}

Vec clip_curvature(const Vec& h_hat, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("clip_curvature: floor must be positive");
  Vec out(h_hat.size());
  for (std::size_t i = 0; i < h_hat.size(); ++i) out[i] = std::max(std::abs(h_hat[i]), floor);
  return out;
}

std::pair<Vec, SaloState> salo_step(const Vec& w, const Vec& g, SaloState state,
                                    const SaloHyper& h) {
  require_dim(g, w.size(), "salo_step");
  require_dim(state.m, w.size(), "salo_step");
  if (!all_finite(g)) throw std::invalid_argument("salo_step: non-finite gradient entry");

  state.t += 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g[i];
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g[i] * g[i];
  }
  const Vec der2nd =
      estimate_der2nd(state.prev_g, state.m, state.delta_w, h.eps, &state.nonfinite_der2nd);
  state.prev_g = state.m;
  for (std::size_t i = 0; i < w.size(); ++i) {
    state.H[i] = h.beta3 * state.H[i] + (1.0 - h.beta3) * der2nd[i];
  }
  const Vec m_hat = bias_correct(state.m, h.beta1, state.t);
  const Vec v_hat = bias_correct(state.v, h.beta2, state.t);
  const Vec h_hat = clip_curvature(bias_correct(state.H, h.beta3, state.t), h.hess_floor);

  Vec out = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double u = h.alpha * m_hat[i] / ((h_hat[i] + h.eps) * (std::sqrt(v_hat[i]) + h.eps));
    u = std::clamp(u, -h.step_cap, h.step_cap);
    out[i] = w[i] - u;
    state.delta_w[i] = -u;
  }
  return {std::move(out), std::move(state)};
}

Stepper make_salo(std::size_t dim, SaloHyper h) {
  h.validate();
  auto state = std::make_shared<SaloState>(SaloState::init(dim));
  auto hp = std::make_shared<SaloHyper>(h);
  Stepper s;
  s.id = "salo";
  s.step = [state, hp](const Vec& w, const Vec& g) {
    auto [w2, st2] = salo_step(w, g, *state, *hp);
    *state = std::move(st2);
    return w2;
  };
  s.logged_hypers = [hp]() { return std::array<double, 3>{hp->alpha, hp->beta1, hp->beta3}; };
  s.set_hypers = [hp](double lr, double b1, double b3) {
    hp->alpha = lr;
    hp->beta1 = b1;
    hp->beta3 = b3;
  };
  return s;
}

}  // namespace salo
