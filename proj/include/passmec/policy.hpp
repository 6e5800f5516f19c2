#pragma once

#include <span>
#include <vector>

#include "passmec/net.hpp"
#include "passmec/rng.hpp"

namespace passmec {

// Diagonal Gaussian over [-1, 1]^D: a tanh-bounded mean net plus
// state-independent learnable log standard deviations. Samples are clipped to
// the action box; log-probabilities are evaluated at the stored (clipped)
// action.
class GaussianPolicy {
 public:
  static constexpr double kLogStdMin = -5.0;
  static constexpr double kLogStdMax = 1.0;

  GaussianPolicy() = default;
  GaussianPolicy(int obs_dim, int act_dim, const std::vector<int>& hidden, Rng& rng,
                 double init_std = 0.5);

  int observation_size() const { return mean_net_.input_size(); }
  int action_size() const { return static_cast<int>(log_std_.size()); }

  std::vector<double> mean(std::span<const double> obs) const { return mean_net_.forward(obs); }

  struct Sample {
    std::vector<double> action;
    double log_prob = 0.0;
  };
  Sample sample(std::span<const double> obs, Rng& rng) const;

  double log_prob(std::span<const double> obs, std::span<const double> action) const;

  // Diagonal Gaussian log density.
  static double log_density(std::span<const double> mean, std::span<const double> log_std,
                            std::span<const double> action);

  // Differential entropy; independent of the state.
  double entropy() const;

  std::vector<double> stds() const;
  void clamp_log_std();

  DenseNet& mean_net() { return mean_net_; }
  const DenseNet& mean_net() const { return mean_net_; }
  std::vector<double>& log_std() { return log_std_; }
  const std::vector<double>& log_std() const { return log_std_; }

 private:
  DenseNet mean_net_;
  std::vector<double> log_std_;
};

}  // namespace passmec
