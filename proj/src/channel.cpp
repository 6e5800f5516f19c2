#include "passmec/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace passmec {

cplx los_channel_entry(const SystemGeometry& geom, const Vec3& rx, const Vec3& tx) {
  double d = distance(rx, tx);
  double phase = -2.0 * M_PI * d / geom.wavelength();
  double mag = geom.sqrt_eta() / d;
  return cplx{mag * std::cos(phase), mag * std::sin(phase)};
}

std::vector<cplx> channel_matrix(const SystemGeometry& geom, const UEPlacement& ue,
                                 const PAPlacement& pa, int k, int wg) {
  if (k < 0 || k >= static_cast<int>(ue.antennas.size()))
    throw std::invalid_argument("channel_matrix: UE index out of range");
  if (wg < 0 || wg >= static_cast<int>(pa.x.size()))
    throw std::invalid_argument("channel_matrix: waveguide index out of range");
  const int num_pas = static_cast<int>(pa.x[wg].size());
  const int num_ant = static_cast<int>(ue.antennas[k].size());
  std::vector<cplx> out(static_cast<std::size_t>(num_pas) * num_ant);
  for (int m = 0; m < num_pas; ++m) {
    Vec3 p = pa_position(geom, pa, wg, m);
    for (int l = 0; l < num_ant; ++l) {
      out[static_cast<std::size_t>(m) * num_ant + l] = los_channel_entry(geom, ue.antennas[k][l], p);
    }
  }
  return out;
}

std::vector<cplx> waveguide_phase_vector(const SystemGeometry& geom, const PAPlacement& pa, int wg) {
  if (wg < 0 || wg >= static_cast<int>(pa.x.size()))
    throw std::invalid_argument("waveguide_phase_vector: waveguide index out of range");
  const Vec3 feed = feed_position(geom, wg);
  const double lambda_w = geom.guided_wavelength();
  std::vector<cplx> out(pa.x[wg].size());
  for (std::size_t m = 0; m < out.size(); ++m) {
    double d = distance(feed, pa_position(geom, pa, wg, static_cast<int>(m)));
    double phase = -2.0 * M_PI * d / lambda_w;
    out[m] = cplx{std::cos(phase), std::sin(phase)};
  }
  return out;
}

ChannelSet build_channels(const SystemGeometry& geom, const UEPlacement& ue,
                          const PAPlacement& pa, double noise_power_w) {
  ChannelSet set;
  set.receivers = geom.num_waveguides;
  set.elements_per_receiver = geom.pas_per_waveguide;
  set.ue_antennas = geom.ue_antennas;
  set.noise_power_w = noise_power_w;
  set.H.resize(ue.antennas.size());
  for (std::size_t k = 0; k < ue.antennas.size(); ++k) {
    set.H[k].resize(set.receivers);
    for (int n = 0; n < set.receivers; ++n) {
      set.H[k][n] = channel_matrix(geom, ue, pa, static_cast<int>(k), n);
    }
  }
  set.h.resize(set.receivers);
  for (int n = 0; n < set.receivers; ++n) {
    set.h[n] = waveguide_phase_vector(geom, pa, n);
  }
  return set;
}

ChannelSet build_channels_mimo(const SystemGeometry& geom, const UEPlacement& ue,
                               const std::vector<Vec3>& array_elems, double noise_power_w) {
  ChannelSet set;
  set.receivers = 1;
  set.elements_per_receiver = static_cast<int>(array_elems.size());
  set.ue_antennas = geom.ue_antennas;
  set.noise_power_w = noise_power_w;
  set.H.resize(ue.antennas.size());
  for (std::size_t k = 0; k < ue.antennas.size(); ++k) {
    set.H[k].resize(1);
    auto& mat = set.H[k][0];
    mat.resize(array_elems.size() * ue.antennas[k].size());
    for (std::size_t m = 0; m < array_elems.size(); ++m) {
      for (std::size_t l = 0; l < ue.antennas[k].size(); ++l) {
        mat[m * ue.antennas[k].size() + l] =
            los_channel_entry(geom, ue.antennas[k][l], array_elems[m]);
      }
    }
  }
  set.h.assign(1, std::vector<cplx>(array_elems.size(), cplx{1.0, 0.0}));
  return set;
}

cplx effective_gain(std::span<const cplx> h, std::span<const cplx> H, std::span<const cplx> w) {
  const std::size_t num_pas = h.size();
  const std::size_t num_ant = w.size();
  if (H.size() != num_pas * num_ant)
    throw std::invalid_argument("effective_gain: dimension mismatch");
  cplx acc{0.0, 0.0};
  for (std::size_t m = 0; m < num_pas; ++m) {
    cplx row{0.0, 0.0};
    for (std::size_t l = 0; l < num_ant; ++l) {
      row += H[m * num_ant + l] * w[l];
    }
    acc += std::conj(h[m]) * row;
  }
  return acc;
}

double sinr(const ChannelSet& channels, const std::vector<int>& assoc,
            const std::vector<std::vector<cplx>>& beams, int k) {
  const int wg = assoc[k];
  cplx g = effective_gain(channels.h[wg], channels.H[k][wg], beams[k]);
  double interference = 0.0;
  for (std::size_t j = 0; j < beams.size(); ++j) {
    if (static_cast<int>(j) == k || assoc[j] != wg) continue;
    cplx gj = effective_gain(channels.h[wg], channels.H[j][wg], beams[j]);
    interference += std::norm(gj);
  }
  double noise = channels.elements_per_receiver * channels.noise_power_w;
  return std::norm(g) / (interference + noise);
}

double sinr_shared(const ChannelSet& channels, const std::vector<std::vector<cplx>>& beams, int k) {
  cplx g = effective_gain(channels.h[0], channels.H[k][0], beams[k]);
  double interference = 0.0;
  for (std::size_t j = 0; j < beams.size(); ++j) {
    if (static_cast<int>(j) == k) continue;
    interference += std::norm(effective_gain(channels.h[0], channels.H[j][0], beams[j]));
  }
  double noise = channels.elements_per_receiver * channels.noise_power_w;
  return std::norm(g) / (interference + noise);
}

double rate_bits_per_s(double sinr_value, double bandwidth_hz, int num_ues) {
  return bandwidth_hz / num_ues * std::log2(1.0 + sinr_value);
}

}  // namespace passmec
