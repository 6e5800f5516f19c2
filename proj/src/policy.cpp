#include "passmec/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace passmec {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // ln(2*pi)
}

GaussianPolicy::GaussianPolicy(int obs_dim, int act_dim, const std::vector<int>& hidden, Rng& rng,
                               double init_std) {
  std::vector<int> sizes;
  sizes.push_back(obs_dim);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(act_dim);
  mean_net_ = DenseNet(sizes, Activation::kTanh, Activation::kTanh);
  mean_net_.init_params(rng, 0.01);
  log_std_.assign(act_dim, std::log(init_std));
  clamp_log_std();
}

GaussianPolicy::Sample GaussianPolicy::sample(std::span<const double> obs, Rng& rng) const {
  std::vector<double> mu = mean_net_.forward(obs);
  Sample out;
  out.action.resize(mu.size());
  for (std::size_t d = 0; d < mu.size(); ++d) {
    double sigma = std::exp(log_std_[d]);
    out.action[d] = std::clamp(mu[d] + sigma * rng.normal(), -1.0, 1.0);
  }
  out.log_prob = log_density(mu, log_std_, out.action);
  return out;
}

double GaussianPolicy::log_prob(std::span<const double> obs, std::span<const double> action) const {
  return log_density(mean_net_.forward(obs), log_std_, action);
}

double GaussianPolicy::log_density(std::span<const double> mean, std::span<const double> log_std,
                                   std::span<const double> action) {
  if (mean.size() != action.size() || mean.size() != log_std.size())
    throw std::invalid_argument("log_density: dimension mismatch");
  double lp = 0.0;
  for (std::size_t d = 0; d < mean.size(); ++d) {
    double z = (action[d] - mean[d]) / std::exp(log_std[d]);
    lp += -0.5 * z * z - log_std[d] - 0.5 * kLog2Pi;
  }
  return lp;
}

double GaussianPolicy::entropy() const {
  double h = 0.0;
  for (double ls : log_std_) h += ls + 0.5 * (kLog2Pi + 1.0);
  return h;
}

std::vector<double> GaussianPolicy::stds() const {
  std::vector<double> s(log_std_.size());
  for (std::size_t d = 0; d < s.size(); ++d) s[d] = std::exp(log_std_[d]);
  return s;
}

void GaussianPolicy::clamp_log_std() {
  for (double& ls : log_std_) ls = std::clamp(ls, kLogStdMin, kLogStdMax);
}

}  // namespace passmec
