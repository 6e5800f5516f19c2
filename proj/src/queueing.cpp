#include "passmec/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace passmec {

void ComputeProfile::validate() const {
  if (ue_cpu_hz <= 0.0 || bs_cpu_hz <= 0.0 || cycles_per_bit <= 0.0 || slot_seconds <= 0.0)
    throw std::invalid_argument("compute profile: all fields must be strictly positive");
}

std::vector<double> step_local_queue(const std::vector<double>& q,
                                     const std::vector<double>& local_bits,
                                     const ComputeProfile& profile) {
  if (q.size() != local_bits.size())
    throw std::invalid_argument("step_local_queue: size mismatch");
  const double service = profile.local_service_bits();
  std::vector<double> next(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    next[k] = std::max(q[k] + local_bits[k] - service, 0.0);
  }
  return next;
}

double step_bs_queue(double q, double offloaded_bits_total, const ComputeProfile& profile) {
  return std::max(q + offloaded_bits_total - profile.bs_service_bits(), 0.0);
}

std::pair<double, double> local_latency(double queue_bits, double task_bits, double beta,
                                        const ComputeProfile& profile) {
  double t_queue = queue_bits * profile.cycles_per_bit / profile.ue_cpu_hz;
  double t_compute = (1.0 - beta) * task_bits * profile.cycles_per_bit / profile.ue_cpu_hz;
  return {t_queue, t_compute};
}

OffloadLatency offload_latency(double bs_queue_bits, double task_bits, double beta,
                               double rate_bits_per_s, double move_delay,
                               const ComputeProfile& profile) {
  OffloadLatency out;
  const double offload_bits = beta * task_bits;
  if (offload_bits > 0.0 && rate_bits_per_s <= 0.0) {
    out.t_tx = kInfiniteLatency;
  } else {
    out.t_tx = (offload_bits > 0.0 ? offload_bits / rate_bits_per_s : 0.0) + move_delay;
  }
  out.t_queue = bs_queue_bits * profile.cycles_per_bit / profile.bs_cpu_hz;
  out.t_compute = offload_bits * profile.cycles_per_bit / profile.bs_cpu_hz;
  return out;
}

double movement_delay(const PAPlacement& prev, const PAPlacement& next, double omega_s_per_m) {
  if (prev.x.size() != next.x.size())
    throw std::invalid_argument("movement_delay: waveguide count mismatch");
  double max_disp = 0.0;
  for (std::size_t n = 0; n < prev.x.size(); ++n) {
    if (prev.x[n].size() != next.x[n].size())
      throw std::invalid_argument("movement_delay: PA count mismatch");
    for (std::size_t m = 0; m < prev.x[n].size(); ++m) {
      max_disp = std::max(max_disp, std::abs(next.x[n][m] - prev.x[n][m]));
    }
  }
  return omega_s_per_m * max_disp;
}

double total_latency(const LatencyBreakdown& b) {
  double local = b.t_local_queue + b.t_local_compute;
  double off = b.t_off_tx + b.t_off_queue + b.t_off_compute;
  return std::max(local, off);
}

}  // namespace passmec
