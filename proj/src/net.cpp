#include "passmec/net.hpp"

#include <cmath>
#include <stdexcept>

namespace passmec {

namespace {

double apply_activation(double z, Activation a) {
  switch (a) {
    case Activation::kTanh: return std::tanh(z);
    case Activation::kRelu: return z > 0.0 ? z : 0.0;
    case Activation::kLinear: return z;
  }
  return z;
}

// Derivative in terms of the post-activation value.
double activation_grad(double post, Activation a) {
  switch (a) {
    case Activation::kTanh: return 1.0 - post * post;
    case Activation::kRelu: return post > 0.0 ? 1.0 : 0.0;
    case Activation::kLinear: return 1.0;
  }
  return 1.0;
}

}  // namespace

DenseNet::DenseNet(std::vector<int> sizes, Activation hidden, Activation output)
    : sizes_(std::move(sizes)), hidden_(hidden), output_(output) {
  if (sizes_.size() < 2) throw std::invalid_argument("DenseNet needs at least input and output");
  for (int s : sizes_) {
    if (s < 1) throw std::invalid_argument("DenseNet layer sizes must be >= 1");
  }
  std::size_t total = 0;
  offsets_.resize(sizes_.size() - 1);
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    offsets_[i] = total;
    total += static_cast<std::size_t>(sizes_[i + 1]) * sizes_[i] + sizes_[i + 1];
  }
  params_.assign(total, 0.0);
}

void DenseNet::init_params(Rng& rng, double final_layer_scale) {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  for (int i = 0; i < layers; ++i) {
    const int fan_in = sizes_[i];
    const int fan_out = sizes_[i + 1];
    double limit = std::sqrt(6.0 / (fan_in + fan_out));
    if (i == layers - 1) limit *= final_layer_scale;
    double* w = params_.data() + weight_offset(i);
    for (int j = 0; j < fan_out * fan_in; ++j) w[j] = rng.uniform(-limit, limit);
    double* b = params_.data() + bias_offset(i);
    for (int j = 0; j < fan_out; ++j) b[j] = 0.0;
  }
}

std::vector<double> DenseNet::forward(std::span<const double> input) const {
  Cache cache;
  return forward(input, cache);
}

std::vector<double> DenseNet::forward(std::span<const double> input, Cache& cache) const {
  if (static_cast<int>(input.size()) != sizes_.front())
    throw std::invalid_argument("DenseNet: input has wrong dimension");
  const int layers = static_cast<int>(sizes_.size()) - 1;
  cache.act.assign(layers + 1, {});
  cache.act[0].assign(input.begin(), input.end());
  for (int i = 0; i < layers; ++i) {
    const int in_n = sizes_[i];
    const int out_n = sizes_[i + 1];
    const double* w = params_.data() + weight_offset(i);
    const double* b = params_.data() + bias_offset(i);
    const double* prev = cache.act[i].data();
    Activation act = (i == layers - 1) ? output_ : hidden_;
    auto& out = cache.act[i + 1];
    out.resize(out_n);
    for (int r = 0; r < out_n; ++r) {
      const double* row = w + static_cast<std::size_t>(r) * in_n;
      double z = b[r];
      for (int c = 0; c < in_n; ++c) z += row[c] * prev[c];
      out[r] = apply_activation(z, act);
    }
  }
  return cache.act.back();
}

std::vector<double> DenseNet::backward(const Cache& cache, std::span<const double> grad_output,
                                       std::span<double> grad) const {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  if (static_cast<int>(grad_output.size()) != sizes_.back())
    throw std::invalid_argument("DenseNet: output gradient has wrong dimension");
  if (grad.size() != params_.size())
    throw std::invalid_argument("DenseNet: gradient buffer has wrong size");

  std::vector<double> delta(grad_output.begin(), grad_output.end());
  for (int i = layers - 1; i >= 0; --i) {
    const int in_n = sizes_[i];
    const int out_n = sizes_[i + 1];
    Activation act = (i == layers - 1) ? output_ : hidden_;
    const auto& post = cache.act[i + 1];
    for (int r = 0; r < out_n; ++r) delta[r] *= activation_grad(post[r], act);

    const double* prev = cache.act[i].data();
    double* gw = grad.data() + weight_offset(i);
    double* gb = grad.data() + bias_offset(i);
    for (int r = 0; r < out_n; ++r) {
      double* row = gw + static_cast<std::size_t>(r) * in_n;
      for (int c = 0; c < in_n; ++c) row[c] += delta[r] * prev[c];
      gb[r] += delta[r];
    }

    if (i == 0) break;
    const double* w = params_.data() + weight_offset(i);
    std::vector<double> next(in_n, 0.0);
    for (int r = 0; r < out_n; ++r) {
      const double* row = w + static_cast<std::size_t>(r) * in_n;
      for (int c = 0; c < in_n; ++c) next[c] += row[c] * delta[r];
    }
    delta = std::move(next);
  }

  // dL/dinput for callers that chain nets.
  const double* w0 = params_.data() + weight_offset(0);
  std::vector<double> dinput(sizes_[0], 0.0);
  for (int r = 0; r < sizes_[1]; ++r) {
    const double* row = w0 + static_cast<std::size_t>(r) * sizes_[0];
    for (int c = 0; c < sizes_[0]; ++c) dinput[c] += row[c] * delta[r];
  }
  return dinput;
}

AdamOptimizer::AdamOptimizer(int param_count, double learning_rate)
    : lr_(learning_rate), m_(param_count, 0.0), v_(param_count, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw std::invalid_argument("Adam: size mismatch");
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  for (std::size_t i = 0; i < m_.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
    params[i] -= lr_ * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
  }
}

void clip_global_norm(std::span<double> a, std::span<double> b, double max_norm) {
  double sq = 0.0;
  for (double g : a) sq += g * g;
  for (double g : b) sq += g * g;
  double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  double scale = max_norm / norm;
  for (double& g : a) g *= scale;
  for (double& g : b) g *= scale;
}

void clip_global_norm(std::span<double> a, double max_norm) {
  clip_global_norm(a, std::span<double>{}, max_norm);
}

}  // namespace passmec
