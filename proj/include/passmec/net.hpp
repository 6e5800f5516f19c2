#pragma once

#include <span>
#include <vector>

#include "passmec/rng.hpp"

namespace passmec {

enum class Activation { kTanh, kRelu, kLinear };

// Fully-connected net with one flat parameter block (per layer: row-major
// weight matrix, then bias). Flat storage keeps the optimizer, gradient
// checks and checkpointing trivial.
class DenseNet {
 public:
  DenseNet() = default;
  DenseNet(std::vector<int> sizes, Activation hidden, Activation output);

  // Glorot-uniform weights, zero biases. `final_layer_scale` shrinks the last
  // layer so initial outputs stay near zero.
  void init_params(Rng& rng, double final_layer_scale = 1.0);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  int param_count() const { return static_cast<int>(params_.size()); }

  std::vector<double> forward(std::span<const double> input) const;

  // Post-activation values per layer; act[0] is the input copy.
  struct Cache {
    std::vector<std::vector<double>> act;
  };
  std::vector<double> forward(std::span<const double> input, Cache& cache) const;

  // Accumulates dL/dparams into `grad` (same length as params) given
  // dL/doutput; returns dL/dinput.
  std::vector<double> backward(const Cache& cache, std::span<const double> grad_output,
                               std::span<double> grad) const;

 private:
  std::size_t weight_offset(int layer) const { return offsets_[layer]; }
  std::size_t bias_offset(int layer) const {
    return offsets_[layer] + static_cast<std::size_t>(sizes_[layer + 1]) * sizes_[layer];
  }

  std::vector<int> sizes_;
  Activation hidden_ = Activation::kTanh;
  Activation output_ = Activation::kLinear;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;  // start of each layer's weight block
};

// Standard Adam over one flat parameter group.
class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  AdamOptimizer(int param_count, double learning_rate);

  void step(std::span<double> params, std::span<const double> grads);
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

// Scales every group so the joint L2 norm does not exceed max_norm.
void clip_global_norm(std::span<double> a, std::span<double> b, double max_norm);
void clip_global_norm(std::span<double> a, double max_norm);

}  // namespace passmec
