#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "salo/objective.hpp"

namespace salo {

// Two interleaved 2-D spirals, labels 0/1, deterministic per seed.
struct Dataset {
  std::vector<std::array<double, 2>> inputs;
  std::vector<int> labels;
  std::uint64_t seed = 0;

  std::size_t size() const { return inputs.size(); }
};

Dataset make_dataset(std::uint64_t seed, std::size_t n);

// Fully-connected tanh network with softmax cross-entropy loss and
// hand-coded reverse-accumulation backprop. Parameters are packed per layer
// as weights (fan_in x fan_out, row-major) followed by biases.
class MlpObjective final : public Objective {
 public:
  MlpObjective(std::vector<std::size_t> layer_sizes, std::uint64_t seed,
               Dataset data, std::size_t batch_size);

  std::size_t dim() const override { return dim_; }
  std::string name() const override { return "mlp"; }

  double loss(const Vec& w) const override;              // full train split
  Vec grad(const Vec& w) const override;
  double loss(const Vec& w, const BatchRef& b) const override;
  Vec grad(const Vec& w, const BatchRef& b) const override;
  std::size_t batches_per_epoch() const override;

  Vec initial_point() const override { return init_params_; }

  // Metrics over the fixed splits (train = first 80%, val = last 20%).
  double train_loss(const Vec& w) const { return loss(w); }
  double val_loss(const Vec& w) const;
  double train_accuracy(const Vec& w) const;
  double val_accuracy(const Vec& w) const;

  // Softmax class probabilities for one sample; exposed for testing.
  std::vector<double> predict(const Vec& w, const std::array<double, 2>& x) const;

  std::size_t train_size() const { return train_n_; }

 private:
  std::vector<std::size_t> layers_;
  Dataset data_;
  std::size_t batch_size_;
  std::size_t train_n_;
  std::size_t dim_;
  Vec init_params_;

  std::vector<std::size_t> batch_rows(const BatchRef& b) const;
  double loss_on(const Vec& w, const std::vector<std::size_t>& rows) const;
  Vec grad_on(const Vec& w, const std::vector<std::size_t>& rows) const;
  double accuracy_on(const Vec& w, std::size_t begin, std::size_t end) const;
};

std::unique_ptr<MlpObjective> make_mlp(const std::vector<std::size_t>& layer_sizes,
                                       std::uint64_t seed, Dataset data,
                                       std::size_t batch_size = 32);

}  // namespace salo
