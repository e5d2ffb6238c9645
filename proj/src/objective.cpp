#include "salo/objective.hpp"

#include <cmath>

namespace salo {

Quadratic::Quadratic(Vec coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("quadratic: empty coefficient list");
  if (!all_finite(coeffs_)) throw std::invalid_argument("quadratic: non-finite coefficient");
}

double Quadratic::loss(const Vec& w) const {
  check(w);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += coeffs_[i] * w[i] * w[i];
  return s;
}

Vec Quadratic::grad(const Vec& w) const {
  check(w);
  Vec g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) g[i] = 2.0 * coeffs_[i] * w[i];
  return g;
}

std::optional<Vec> Quadratic::hess_diag(const Vec& w) const {
  check(w);
  Vec h(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) h[i] = 2.0 * coeffs_[i];
  return h;
}

double Rosenbrock::loss(const Vec& w) const {
  check(w);
  const double x = w[0], y = w[1];
  const double a = 1.0 - x, b = y - x * x;
  return a * a + 100.0 * b * b;
}

Vec Rosenbrock::grad(const Vec& w) const {
  check(w);
  const double x = w[0], y = w[1];
  return {-2.0 * (1.0 - x) - 400.0 * x * (y - x * x), 200.0 * (y - x * x)};
}

std::optional<Vec> Rosenbrock::hess_diag(const Vec& w) const {
  check(w);
  const double x = w[0], y = w[1];
  return Vec{2.0 - 400.0 * y + 1200.0 * x * x, 200.0};
}

double Multimodal::loss(const Vec& w) const {
  check(w);
  const double x = w[0];
  return x * x + 2.0 * std::sin(5.0 * x);
}

Vec Multimodal::grad(const Vec& w) const {
  check(w);
  const double x = w[0];
  return {2.0 * x + 10.0 * std::cos(5.0 * x)};
}

std::optional<Vec> Multimodal::hess_diag(const Vec& w) const {
  check(w);
  const double x = w[0];
  return Vec{2.0 - 50.0 * std::sin(5.0 * x)};
}

std::unique_ptr<Quadratic> make_ill_conditioned(std::size_t n, double cond) {
  if (n < 1) throw std::invalid_argument("ill-conditioned quadratic: n must be >= 1");
  Vec c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (n == 1) ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    c[i] = std::pow(cond, t);
  }
  return std::make_unique<Quadratic>(std::move(c));
}

}  // namespace salo
