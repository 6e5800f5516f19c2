#pragma once

#include <complex>
#include <span>
#include <vector>

#include "passmec/geometry.hpp"

namespace passmec {

using cplx = std::complex<double>;

// Per-slot channel snapshot. `receivers` is the number of independent receive
// streams: one per waveguide for PASS, a single shared array for the MIMO
// baseline. H[k][r] is the M x L matrix (row-major, PA-major) from UE k to
// receiver r; h[r] is the length-M in-guide phase vector of receiver r (all
// ones for the MIMO array, where the feed sum applies no phase adjustment).
struct ChannelSet {
  int receivers = 0;
  int elements_per_receiver = 0;  // M
  int ue_antennas = 0;            // L
  double noise_power_w = 0.0;     // sigma^2 per PA, watts

  std::vector<std::vector<std::vector<cplx>>> H;  // [K][receivers][M*L]
  std::vector<std::vector<cplx>> h;               // [receivers][M]
};

// Line-of-sight entry sqrt(eta) e^{-j 2 pi d / lambda} / d between one
// transmit and one receive point.
cplx los_channel_entry(const SystemGeometry& geom, const Vec3& rx, const Vec3& tx);

// M x L matrix (row-major) between UE k's array and waveguide wg's PAs.
std::vector<cplx> channel_matrix(const SystemGeometry& geom, const UEPlacement& ue,
                                 const PAPlacement& pa, int k, int wg);

// In-guide phase response e^{-j 2 pi |feed - pa| / lambda_w} per PA.
std::vector<cplx> waveguide_phase_vector(const SystemGeometry& geom, const PAPlacement& pa, int wg);

// Full snapshot for all UEs and waveguides.
ChannelSet build_channels(const SystemGeometry& geom, const UEPlacement& ue,
                          const PAPlacement& pa, double noise_power_w);

// MIMO baseline: single shared receive array, unit combining weights.
ChannelSet build_channels_mimo(const SystemGeometry& geom, const UEPlacement& ue,
                               const std::vector<Vec3>& array_elems, double noise_power_w);

// Scalar beamformed channel h^H H w. Dimensions: h is M, H is M x L row-major,
// w is L. Throws std::invalid_argument on a size mismatch.
cplx effective_gain(std::span<const cplx> h, std::span<const cplx> H, std::span<const cplx> w);

// SINR of UE k under waveguide-division decoding: the BS listens to k only on
// its associated waveguide, so interference comes from the UEs sharing that
// waveguide. Noise floor is M sigma^2.
double sinr(const ChannelSet& channels, const std::vector<int>& assoc,
            const std::vector<std::vector<cplx>>& beams, int k);

// SINR at a single shared receiver where every other UE interferes.
double sinr_shared(const ChannelSet& channels, const std::vector<std::vector<cplx>>& beams, int k);

// Even bandwidth split: (B_total / K) log2(1 + sinr), bits/s.
double rate_bits_per_s(double sinr_value, double bandwidth_hz, int num_ues);

}  // namespace passmec
