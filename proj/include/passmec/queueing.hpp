#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "passmec/geometry.hpp"

namespace passmec {

// Returned for an offload attempt that cannot be delivered (positive bits at
// zero rate). The reward path treats it as a QoS violation and caps the
// penalty; it is never an error.
inline constexpr double kInfiniteLatency = std::numeric_limits<double>::infinity();

struct ComputeProfile {
  double ue_cpu_hz = 1.0e9;      // f_k
  double bs_cpu_hz = 2.0e9;      // f_b
  double cycles_per_bit = 100.0; // rho
  double slot_seconds = 2.0;

  double local_service_bits() const { return ue_cpu_hz * slot_seconds / cycles_per_bit; }
  double bs_service_bits() const { return bs_cpu_hz * slot_seconds / cycles_per_bit; }
  void validate() const;
};

// Backlogs in bits at slot start. Both start at zero on the first slot.
struct QueueState {
  std::vector<double> q_local;  // per UE
  double q_bs = 0.0;
};

struct LatencyBreakdown {
  double t_local_queue = 0.0;
  double t_local_compute = 0.0;
  double t_off_tx = 0.0;
  double t_off_queue = 0.0;
  double t_off_compute = 0.0;
  double t_move = 0.0;
  double t_total = 0.0;
};

// One-slot FIFO update: q' = max(q + arrivals - service, 0) per UE.
std::vector<double> step_local_queue(const std::vector<double>& q,
                                     const std::vector<double>& local_bits,
                                     const ComputeProfile& profile);

double step_bs_queue(double q, double offloaded_bits_total, const ComputeProfile& profile);

// (queue wait, compute time) of the local path.
std::pair<double, double> local_latency(double queue_bits, double task_bits, double beta,
                                        const ComputeProfile& profile);

struct OffloadLatency {
  double t_tx = 0.0;
  double t_queue = 0.0;
  double t_compute = 0.0;
};

// Transmission, BS queue wait, and BS compute time of the offload path.
// move_delay is added to the transmission term. Positive offloaded bits at
// zero rate yield kInfiniteLatency in t_tx.
OffloadLatency offload_latency(double bs_queue_bits, double task_bits, double beta,
                               double rate_bits_per_s, double move_delay,
                               const ComputeProfile& profile);

// omega times the largest absolute per-PA x displacement between slots. The
// whole system waits for the slowest repositioning, so one scalar applies to
// every UE's offload path.
double movement_delay(const PAPlacement& prev, const PAPlacement& next, double omega_s_per_m);

// Slower of the two parallel paths.
double total_latency(const LatencyBreakdown& b);

}  // namespace passmec
