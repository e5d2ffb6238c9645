#include "salo/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace salo {

Dataset make_dataset(std::uint64_t seed, std::size_t n) {
  if (n < 2) throw std::invalid_argument("make_dataset: n must be >= 2");
  Dataset d;
  d.seed = seed;
  d.inputs.resize(n);
  d.labels.resize(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.08);
  const std::size_t per = n / 2;
  // Rows alternate classes so any prefix split stays balanced.
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(i % 2);
    const std::size_t k = i / 2;
    const double t = per > 1 ? static_cast<double>(k) / static_cast<double>(per - 1) : 0.0;
    const double radius = 0.15 + 0.85 * t;
    const double angle = cls * 3.14159265358979323846 + 3.5 * 3.14159265358979323846 * t;
    d.inputs[i] = {radius * std::cos(angle) + noise(rng), radius * std::sin(angle) + noise(rng)};
    d.labels[i] = cls;
  }
  return d;
}

namespace {

std::size_t param_count(const std::vector<std::size_t>& layers) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    n += layers[l] * layers[l + 1] + layers[l + 1];
  }
  return n;
}

}  // namespace

MlpObjective::MlpObjective(std::vector<std::size_t> layer_sizes, std::uint64_t seed,
                           Dataset data, std::size_t batch_size)
    : layers_(std::move(layer_sizes)), data_(std::move(data)), batch_size_(batch_size) {
  if (layers_.size() < 2) throw std::invalid_argument("mlp: need at least 2 layers");
  for (std::size_t s : layers_) {
    if (s == 0) throw std::invalid_argument("mlp: layer size must be positive");
  }
  if (layers_.front() != 2) throw std::invalid_argument("mlp: first layer must match feature dim 2");
  if (batch_size_ == 0) throw std::invalid_argument("mlp: batch size must be positive");
  const int classes = static_cast<int>(layers_.back());
  for (int y : data_.labels) {
    if (y < 0 || y >= classes) throw std::invalid_argument("mlp: label outside class range");
  }
  train_n_ = data_.size() - data_.size() / 5;  // last 20% held out for validation
  dim_ = param_count(layers_);

  init_params_.assign(dim_, 0.0);
  std::mt19937_64 rng(seed);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    const double s = std::sqrt(6.0 / static_cast<double>(layers_[l] + layers_[l + 1]));
    std::uniform_real_distribution<double> u(-s, s);
    for (std::size_t k = 0; k < layers_[l] * layers_[l + 1]; ++k) init_params_[off++] = u(rng);
    off += layers_[l + 1];  // biases start at zero
  }
}

std::size_t MlpObjective::batches_per_epoch() const {
  return std::max<std::size_t>(1, train_n_ / batch_size_);
}

std::vector<std::size_t> MlpObjective::batch_rows(const BatchRef& b) const {
  std::vector<std::size_t> idx(train_n_);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(data_.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(b.epoch + 1)));
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::size_t nb = batches_per_epoch();
  const std::size_t i = static_cast<std::size_t>(b.index) % nb;
  const std::size_t lo = i * batch_size_;
  const std::size_t hi = std::min(lo + batch_size_, train_n_);
  return {idx.begin() + static_cast<std::ptrdiff_t>(lo), idx.begin() + static_cast<std::ptrdiff_t>(hi)};
}

double MlpObjective::loss_on(const Vec& w, const std::vector<std::size_t>& rows) const {
  check(w);
  const std::size_t L = layers_.size();
  double total = 0.0;
  std::vector<std::vector<double>> act(L);
  for (std::size_t r : rows) {
    act[0] = {data_.inputs[r][0], data_.inputs[r][1]};
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < L; ++l) {
      const std::size_t ni = layers_[l], no = layers_[l + 1];
      act[l + 1].assign(no, 0.0);
      for (std::size_t j = 0; j < no; ++j) {
        double z = w[off + ni * no + j];  // bias
        for (std::size_t i = 0; i < ni; ++i) z += w[off + i * no + j] * act[l][i];
        act[l + 1][j] = (l + 2 < L) ? std::tanh(z) : z;
      }
      off += ni * no + no;
    }
    // softmax cross-entropy on the final logits
    auto& logit = act[L - 1];
    const double mx = *std::max_element(logit.begin(), logit.end());
    double sum = 0.0;
    for (double z : logit) sum += std::exp(z - mx);
    total += std::log(sum) - (logit[static_cast<std::size_t>(data_.labels[r])] - mx);
  }
  return total / static_cast<double>(rows.size());
}

Vec MlpObjective::grad_on(const Vec& w, const std::vector<std::size_t>& rows) const {
  check(w);
  const std::size_t L = layers_.size();
  Vec g(dim_, 0.0);
  std::vector<std::vector<double>> act(L);
  std::vector<double> delta, delta_prev;
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (std::size_t r : rows) {
    act[0] = {data_.inputs[r][0], data_.inputs[r][1]};
    std::vector<std::size_t> offs(L - 1);
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < L; ++l) {
      offs[l] = off;
      const std::size_t ni = layers_[l], no = layers_[l + 1];
      act[l + 1].assign(no, 0.0);
      for (std::size_t j = 0; j < no; ++j) {
        double z = w[off + ni * no + j];
        for (std::size_t i = 0; i < ni; ++i) z += w[off + i * no + j] * act[l][i];
        act[l + 1][j] = (l + 2 < L) ? std::tanh(z) : z;
      }
      off += ni * no + no;
    }
    // output delta = softmax(logits) - onehot(label)
    auto& logit = act[L - 1];
    const double mx = *std::max_element(logit.begin(), logit.end());
    double sum = 0.0;
    delta.assign(logit.size(), 0.0);
    for (std::size_t j = 0; j < logit.size(); ++j) {
      delta[j] = std::exp(logit[j] - mx);
      sum += delta[j];
    }
    for (double& dj : delta) dj /= sum;
    delta[static_cast<std::size_t>(data_.labels[r])] -= 1.0;

    for (std::size_t l = L - 1; l-- > 0;) {
      const std::size_t ni = layers_[l], no = layers_[l + 1];
      const std::size_t o = offs[l];
      for (std::size_t j = 0; j < no; ++j) {
        g[o + ni * no + j] += delta[j] * inv_n;
        for (std::size_t i = 0; i < ni; ++i) g[o + i * no + j] += act[l][i] * delta[j] * inv_n;
      }
      if (l > 0) {
        delta_prev.assign(ni, 0.0);
        for (std::size_t i = 0; i < ni; ++i) {
          double s = 0.0;
          for (std::size_t j = 0; j < no; ++j) s += w[o + i * no + j] * delta[j];
          delta_prev[i] = s * (1.0 - act[l][i] * act[l][i]);
        }
        delta.swap(delta_prev);
      }
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) {
      throw std::runtime_error("mlp: non-finite gradient at parameter index " + std::to_string(i));
    }
  }
  return g;
}

double MlpObjective::loss(const Vec& w) const {
  std::vector<std::size_t> rows(train_n_);
  std::iota(rows.begin(), rows.end(), 0);
  return loss_on(w, rows);
}

Vec MlpObjective::grad(const Vec& w) const {
  std::vector<std::size_t> rows(train_n_);
  std::iota(rows.begin(), rows.end(), 0);
  return grad_on(w, rows);
}

double MlpObjective::loss(const Vec& w, const BatchRef& b) const {
  return loss_on(w, batch_rows(b));
}

Vec MlpObjective::grad(const Vec& w, const BatchRef& b) const {
  return grad_on(w, batch_rows(b));
}

double MlpObjective::val_loss(const Vec& w) const {
  std::vector<std::size_t> rows(data_.size() - train_n_);
  std::iota(rows.begin(), rows.end(), train_n_);
  return loss_on(w, rows);
}

double MlpObjective::accuracy_on(const Vec& w, std::size_t begin, std::size_t end) const {
  std::size_t hit = 0;
  for (std::size_t r = begin; r < end; ++r) {
    const auto p = predict(w, data_.inputs[r]);
    const std::size_t arg = static_cast<std::size_t>(
        std::max_element(p.begin(), p.end()) - p.begin());
    if (arg == static_cast<std::size_t>(data_.labels[r])) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(end - begin);
}

double MlpObjective::train_accuracy(const Vec& w) const { return accuracy_on(w, 0, train_n_); }
double MlpObjective::val_accuracy(const Vec& w) const { return accuracy_on(w, train_n_, data_.size()); }

std::vector<double> MlpObjective::predict(const Vec& w, const std::array<double, 2>& x) const {
  check(w);
  const std::size_t L = layers_.size();
  std::vector<double> a = {x[0], x[1]}, next;
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < L; ++l) {
    const std::size_t ni = layers_[l], no = layers_[l + 1];
    next.assign(no, 0.0);
    for (std::size_t j = 0; j < no; ++j) {
      double z = w[off + ni * no + j];
      for (std::size_t i = 0; i < ni; ++i) z += w[off + i * no + j] * a[i];
      next[j] = (l + 2 < L) ? std::tanh(z) : z;
    }
    a.swap(next);
    off += ni * no + no;
  }
  const double mx = *std::max_element(a.begin(), a.end());
  double sum = 0.0;
  for (double& z : a) {
    z = std::exp(z - mx);
    sum += z;
  }
  for (double& z : a) z /= sum;
  return a;
}

std::unique_ptr<MlpObjective> make_mlp(const std::vector<std::size_t>& layer_sizes,
                                       std::uint64_t seed, Dataset data,
                                       std::size_t batch_size) {
  return std::make_unique<MlpObjective>(layer_sizes, seed, std::move(data), batch_size);
}

}  // namespace salo
