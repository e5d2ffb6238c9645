#include "salo/hessian_fd.hpp"

#include <algorithm>
#include <cmath>

namespace salo {

namespace {

void require_step(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("fd: perturbation r must be positive and finite");
  }
}

void require_finite_entry(double v, std::size_t i) {
  if (!std::isfinite(v)) {
    throw std::runtime_error("fd: non-finite estimate at coordinate " + std::to_string(i));
  }
}

}  // namespace

Vec fd_diag_forward(const Objective& obj, const Vec& w, double r) {
  require_step(r);
  require_dim(w, obj.dim(), "fd_diag_forward");
  const Vec g0 = obj.grad(w);
  Vec out(w.size());
  Vec wp = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wp[i] = w[i] + r;
    out[i] = (obj.grad(wp)[i] - g0[i]) / r;
    wp[i] = w[i];
    require_finite_entry(out[i], i);
  }
  return out;
}

Vec fd_diag_central(const Objective& obj, const Vec& w, double r) {
  require_step(r);
  require_dim(w, obj.dim(), "fd_diag_central");
  Vec out(w.size());
  Vec wp = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wp[i] = w[i] + r / 2.0;
    const double gp = obj.grad(wp)[i];
    wp[i] = w[i] - r / 2.0;
    const double gm = obj.grad(wp)[i];
    wp[i] = w[i];
    out[i] = (gp - gm) / r;
    require_finite_entry(out[i], i);
  }
  return out;
}

std::vector<FdErrorRow> fd_error_report(const Objective& obj, const Vec& w,
                                        std::vector<double> r_list) {
  const auto oracle = obj.hess_diag(w);
  if (!oracle) {
    throw std::runtime_error("fd_error_report: objective '" + obj.name() +
                             "' has no analytic Hessian diagonal");
  }
  std::sort(r_list.begin(), r_list.end(), std::greater<>());
  std::vector<FdErrorRow> rows;
  rows.reserve(r_list.size() * 2);
  for (double r : r_list) {
    for (FdMode mode : {FdMode::forward, FdMode::central}) {
      const Vec est = (mode == FdMode::forward) ? fd_diag_forward(obj, w, r)
                                                : fd_diag_central(obj, w, r);
      double err = 0.0;
      for (std::size_t i = 0; i < est.size(); ++i) {
        err = std::max(err, std::abs(est[i] - (*oracle)[i]));
      }
      rows.push_back({r, mode, err});
    }
  }
  return rows;
}

std::string to_string(FdMode m) { return m == FdMode::forward ? "forward" : "central"; }

}  // namespace salo
