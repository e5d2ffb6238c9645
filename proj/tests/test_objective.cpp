#include <doctest.h>

#include <cmath>

#include "salo/mlp.hpp"
#include "salo/objective.hpp"

using namespace salo;

namespace {

// Central-difference gradient check against the analytic gradient.
void check_gradient(const Objective& obj, const Vec& w, double h = 1e-6, double tol = 1e-5) {
  const Vec g = obj.grad(w);
  Vec wp = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wp[i] = w[i] + h;
    const double fp = obj.loss(wp);
    wp[i] = w[i] - h;
    const double fm = obj.loss(wp);
    wp[i] = w[i];
    CHECK(std::abs((fp - fm) / (2.0 * h) - g[i]) < tol);
  }
}

}  // namespace

TEST_CASE("quadratic: loss, gradient and Hessian diagonal") {
  const Quadratic q({1.0, 3.0});
  CHECK(q.dim() == 2);
  CHECK(q.loss({1.0, 1.0}) == 4.0);
  CHECK(q.loss({2.0, -1.0}) == 7.0);
  const Vec g = q.grad({2.0, -1.0});
  CHECK(g[0] == 4.0);
  CHECK(g[1] == -6.0);
  const auto h = q.hess_diag({0.3, 0.7});
  REQUIRE(h.has_value());
  CHECK((*h)[0] == 2.0);
  CHECK((*h)[1] == 6.0);
  check_gradient(q, {0.4, -1.3});
}

TEST_CASE("quadratic: input validation") {
  CHECK_THROWS_AS(Quadratic({}), std::invalid_argument);
  const Quadratic q({1.0, 3.0});
  CHECK_THROWS_AS(q.loss({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(q.grad({1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("rosenbrock: values, minimum and curvature") {
  const Rosenbrock r;
  CHECK(r.initial_point() == Vec{-1.2, 1.0});
  CHECK(r.loss({-1.2, 1.0}) == doctest::Approx(24.2).epsilon(1e-14));
  CHECK(r.loss({1.0, 1.0}) == 0.0);
  const Vec g = r.grad({1.0, 1.0});
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  const auto h = r.hess_diag({0.5, 0.5});
  REQUIRE(h.has_value());
  CHECK((*h)[0] == doctest::Approx(102.0).epsilon(1e-14));  // 2 - 400*0.5 + 1200*0.25
  CHECK((*h)[1] == 200.0);
  check_gradient(r, {0.5, 0.5}, 1e-6, 1e-3);
}

TEST_CASE("multimodal: values and curvature") {
  const Multimodal m;
  CHECK(m.initial_point() == Vec{2.5});
  CHECK(m.loss({0.0}) == 0.0);
  CHECK(m.grad({0.0})[0] == 10.0);  // 2x + 10 cos(5x) at 0
  const auto h = m.hess_diag({0.0});
  REQUIRE(h.has_value());
  CHECK((*h)[0] == 2.0);  // 2 - 50 sin(0)
  check_gradient(m, {1.7});
}

TEST_CASE("ill-conditioned quadratic: geometric coefficient spread") {
  const auto q = make_ill_conditioned(10, 1e4);
  CHECK(q->dim() == 10);
  CHECK(q->coeffs().front() == 1.0);
  CHECK(q->coeffs().back() == doctest::Approx(1e4).epsilon(1e-12));
  for (std::size_t i = 1; i < 10; ++i) CHECK(q->coeffs()[i] > q->coeffs()[i - 1]);
  CHECK_THROWS_AS(make_ill_conditioned(0), std::invalid_argument);
}

TEST_CASE("dataset: deterministic per seed, balanced alternating labels") {
  const Dataset a = make_dataset(7, 64);
  const Dataset b = make_dataset(7, 64);
  const Dataset c = make_dataset(8, 64);
  CHECK(a.size() == 64);
  CHECK(a.inputs == b.inputs);
  CHECK(a.labels == b.labels);
  CHECK(a.inputs != c.inputs);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.labels[i] == static_cast<int>(i % 2));
  CHECK_THROWS_AS(make_dataset(1, 1), std::invalid_argument);
}

TEST_CASE("mlp: parameter packing and split sizes") {
  const auto mlp = make_mlp({2, 16, 2}, 1, make_dataset(1, 512), 32);
  CHECK(mlp->dim() == 2 * 16 + 16 + 16 * 2 + 2);  // 82
  CHECK(mlp->train_size() == 410);                // 512 - 512/5
  CHECK(mlp->batches_per_epoch() == 12);          // 410 / 32
  // Biases start at zero: for layer 0 they sit at offsets [32, 48).
  const Vec w0 = mlp->initial_point();
  for (std::size_t i = 32; i < 48; ++i) CHECK(w0[i] == 0.0);
  for (std::size_t i = 80; i < 82; ++i) CHECK(w0[i] == 0.0);
}

TEST_CASE("mlp: constructor validation") {
  CHECK_THROWS_AS(make_mlp({2}, 1, make_dataset(1, 16), 4), std::invalid_argument);
  CHECK_THROWS_AS(make_mlp({3, 4, 2}, 1, make_dataset(1, 16), 4), std::invalid_argument);
  CHECK_THROWS_AS(make_mlp({2, 0, 2}, 1, make_dataset(1, 16), 4), std::invalid_argument);
  CHECK_THROWS_AS(make_mlp({2, 4, 2}, 1, make_dataset(1, 16), 0), std::invalid_argument);
  // Labels outside the class range of a 1-output head.
  CHECK_THROWS_AS(make_mlp({2, 4, 1}, 1, make_dataset(1, 16), 4), std::invalid_argument);
}

TEST_CASE("mlp: softmax probabilities sum to one") {
  const auto mlp = make_mlp({2, 8, 2}, 3, make_dataset(3, 64), 16);
  const auto p = mlp->predict(mlp->initial_point(), {0.3, -0.4});
  REQUIRE(p.size() == 2);
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p[0] >= 0.0);
  CHECK(p[1] >= 0.0);
}

TEST_CASE("mlp: backprop gradient matches finite differences") {
  const auto mlp = make_mlp({2, 5, 2}, 11, make_dataset(11, 40), 8);
  Vec w = mlp->initial_point();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += 0.01 * static_cast<double>(i % 7);
  check_gradient(*mlp, w, 1e-6, 1e-6);
}

TEST_CASE("mlp: batch evaluation is deterministic and covers the train split") {
  const auto mlp = make_mlp({2, 4, 2}, 5, make_dataset(5, 80), 16);
  const Vec w = mlp->initial_point();
  const BatchRef b{2, 1};
  CHECK(mlp->loss(w, b) == mlp->loss(w, b));
  CHECK(mlp->grad(w, b) == mlp->grad(w, b));
  // Different epochs reshuffle, so the same index generally sees other rows.
  CHECK(mlp->loss(w, {0, 0}) != mlp->loss(w, {1, 0}));
  // Full-batch loss equals the unbatched overload.
  CHECK(mlp->loss(w) == mlp->train_loss(w));
}

TEST_CASE("mlp: accuracies are within [0, 1]") {
  const auto mlp = make_mlp({2, 8, 2}, 1, make_dataset(1, 128), 32);
  const Vec w = mlp->initial_point();
  for (double a : {mlp->train_accuracy(w), mlp->val_accuracy(w)}) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
  CHECK(std::isfinite(mlp->val_loss(w)));
}
