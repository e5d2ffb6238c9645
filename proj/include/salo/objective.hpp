#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "salo/vec.hpp"

namespace salo {

// Identifies one seeded mini-batch slice: batch `index` of epoch `epoch`.
// Objectives that do not support batching ignore it and evaluate full-batch.
struct BatchRef {
  std::int64_t epoch = 0;
  std::int64_t index = 0;
};

// An evaluatable minimization problem with analytic gradient and, where a
// closed form exists, an analytic diagonal Hessian used as oracle.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;

  virtual double loss(const Vec& w) const = 0;
  virtual Vec grad(const Vec& w) const = 0;

  // Diagonal of the Hessian; nullopt when no closed form is available.
  virtual std::optional<Vec> hess_diag(const Vec& /*w*/) const { return std::nullopt; }

  // Mini-batch entry points; default to full-batch evaluation.
  virtual double loss(const Vec& w, const BatchRef& /*b*/) const { return loss(w); }
  virtual Vec grad(const Vec& w, const BatchRef& /*b*/) const { return grad(w); }
  virtual std::size_t batches_per_epoch() const { return 1; }

  // Canonical starting point for experiments.
  virtual Vec initial_point() const { return Vec(dim(), 1.0); }

 protected:
  void check(const Vec& w) const {
    require_dim(w, dim(), name().c_str());
    if (!all_finite(w)) {
      throw std::invalid_argument(name() + ": non-finite parameter entry");
    }
  }
};

// f(w) = sum_i a_i * w_i^2, axis-aligned with configurable diagonal.
class Quadratic final : public Objective {
 public:
  explicit Quadratic(Vec coeffs);

  std::size_t dim() const override { return coeffs_.size(); }
  std::string name() const override { return "quadratic"; }
  double loss(const Vec& w) const override;
  Vec grad(const Vec& w) const override;
  std::optional<Vec> hess_diag(const Vec& w) const override;
  using Objective::grad;
  using Objective::loss;

  const Vec& coeffs() const { return coeffs_; }

 private:
  Vec coeffs_;
};

// 2-D Rosenbrock: f(x,y) = (1-x)^2 + 100 (y - x^2)^2.
class Rosenbrock final : public Objective {
 public:
  std::size_t dim() const override { return 2; }
  std::string name() const override { return "rosenbrock"; }
  double loss(const Vec& w) const override;
  Vec grad(const Vec& w) const override;
  std::optional<Vec> hess_diag(const Vec& w) const override;
  using Objective::grad;
  using Objective::loss;
  Vec initial_point() const override { return {-1.2, 1.0}; }
};

// 1-D multimodal: f(x) = x^2 + 2 sin(5x).
class Multimodal final : public Objective {
 public:
  std::size_t dim() const override { return 1; }
  std::string name() const override { return "multimodal"; }
  double loss(const Vec& w) const override;
  Vec grad(const Vec& w) const override;
  std::optional<Vec> hess_diag(const Vec& w) const override;
  using Objective::grad;
  using Objective::loss;
  Vec initial_point() const override { return {2.5}; }
};

// N-D quadratic with geometrically spaced diagonal, condition number `cond`.
std::unique_ptr<Quadratic> make_ill_conditioned(std::size_t n, double cond = 1e4);

}  // namespace salo
