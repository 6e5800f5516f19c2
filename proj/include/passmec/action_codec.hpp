#pragma once

#include <span>
#include <string>
#include <vector>

#include "passmec/channel.hpp"
#include "passmec/geometry.hpp"

namespace passmec {

// Canonical flat action vector in [-1, 1]^D. Segment order is part of the
// checkpoint contract: beams | pa positions | association | offload ratios.
struct ActionLayout {
  int num_ues = 0;            // K
  int num_waveguides = 0;     // N
  int pas_per_waveguide = 0;  // M
  int ue_antennas = 0;        // L

  int beam_len() const { return 2 * ue_antennas * num_ues; }
  int position_len() const { return num_waveguides * pas_per_waveguide; }
  int assoc_len() const { return num_ues; }
  int beta_len() const { return num_ues; }
  int total() const { return beam_len() + position_len() + assoc_len() + beta_len(); }

  int beam_offset() const { return 0; }
  int position_offset() const { return beam_len(); }
  int assoc_offset() const { return beam_len() + position_len(); }
  int beta_offset() const { return beam_len() + position_len() + assoc_len(); }

  // Versioned tag persisted in checkpoints, e.g. "beams|pa_x|assoc|beta;v1;K=5,N=3,M=4,L=3".
  std::string tag() const;
  static ActionLayout from_tag(const std::string& tag);

  bool operator==(const ActionLayout&) const = default;
};

// Anneal state of the load-balancing association discretization. During the
// first `lb_episodes` episodes the segment boundaries follow the live
// waveguide loads; afterwards they collapse to the even split.
struct DiscretizationSchedule {
  int lb_episodes = 400;   // epsilon_train
  int current_episode = 0; // epsilon_e
  double varpi_min = -1.0;
  double varpi_max = 1.0;

  double range() const { return varpi_max - varpi_min; }
  bool load_balancing_active() const { return current_episode < lb_episodes; }
  // Fraction of the way through the LB phase, in [0, 1].
  double blend() const;
  void validate() const;
};

struct DecodedAction {
  std::vector<std::vector<cplx>> beams;   // K vectors of length L, ||w||^2 <= P_max
  std::vector<std::vector<double>> pa_x;  // N x M feasible placement
  std::vector<int> assoc;                 // waveguide index per UE
  std::vector<double> beta;               // offload ratio per UE, [0, 1]
};

// Even split of the association range across waveguides.
std::vector<double> conventional_segments(int num_waveguides, const DiscretizationSchedule& sched);

// Load-aware split: a convex blend of the inverse-load partition and the even
// partition, annealed linearly over the LB phase. `loads` holds the running
// count of UEs already committed to each waveguide.
std::vector<double> lb_segments(const std::vector<int>& loads, int num_ues,
                                const DiscretizationSchedule& sched);

// Sequential cumulative-interval lookup. UEs decode in index order and each
// decoded association feeds the load counts seen by the next UE. Intervals
// are left-closed; a value at or past the top boundary takes the last
// segment of nonzero width.
std::vector<int> decode_association(std::span<const double> varpi, int num_waveguides,
                                    const DiscretizationSchedule& sched);

// Interleaved re/im pairs per UE, scaled onto the power ball:
// w = sqrt(P_max) u / max(1, ||u||).
std::vector<std::vector<cplx>> decode_beams(std::span<const double> raw, int num_ues,
                                            int ue_antennas, double p_max_watts);

// Affine map onto [0, d_x], per-waveguide sort, left-to-right minimum-gap
// pass, then a right-edge pack if the ladder overruns d_x.
std::vector<std::vector<double>> decode_pa_positions(std::span<const double> raw,
                                                     const SystemGeometry& geom);

std::vector<double> decode_beta(std::span<const double> raw);

// Full decode of a raw vector (all four segments).
DecodedAction decode_action(std::span<const double> raw, const ActionLayout& layout,
                            const SystemGeometry& geom, double p_max_watts,
                            const DiscretizationSchedule& sched);

}  // namespace passmec
