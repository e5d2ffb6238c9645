#pragma once

#include <cstdint>

#include "salo/optim.hpp"

namespace salo {

struct SaloHyper {
  double alpha = 0.001;
  double beta1 = 0.95;
  double beta2 = 0.97;
  double beta3 = 0.9;
  double eps = 1e-8;
  double hess_floor = 0.01;
  double step_cap = 1.0;

  void validate() const;
};

// Per-parameter optimizer state. delta_w holds the signed change applied in
// the previous step (w_t - w_{t-1}); the 0.01 start value seeds the first
// curvature estimate.
struct SaloState {
  Vec m;        // first-moment EMA
  Vec v;        // squared-gradient EMA
  Vec H;        // second-derivative EMA (third moment)
  Vec prev_g;   // gradient-EMA snapshot from the previous step
  Vec delta_w;  // last applied per-parameter update
  std::int64_t t = 0;
  std::int64_t nonfinite_der2nd = 0;  // diagnostics: clamped curvature entries

  static SaloState init(std::size_t dim);
};

// Online directional second-derivative estimate: (prev_g - m) / (delta_w + eps)
// elementwise. Non-finite entries are replaced by 0 and counted.
Vec estimate_der2nd(const Vec& prev_g, const Vec& m, const Vec& delta_w, double eps,
                    std::int64_t* nonfinite_count = nullptr);

// Elementwise x / (1 - beta^t). Rejects t = 0.
Vec bias_correct(const Vec& x, double beta, std::int64_t t);

// Elementwise max(|h|, floor).
Vec clip_curvature(const Vec& h_hat, double floor);

std::pair<Vec, SaloState> salo_step(const Vec& w, const Vec& g, SaloState state,
                                    const SaloHyper& h);

Stepper make_salo(std::size_t dim, SaloHyper h);

}  // namespace salo
