#include "passmec/action_codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace passmec {

std::string ActionLayout::tag() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "beams|pa_x|assoc|beta;v1;K=%d,N=%d,M=%d,L=%d", num_ues,
                num_waveguides, pas_per_waveguide, ue_antennas);
  return buf;
}

ActionLayout ActionLayout::from_tag(const std::string& tag) {
  ActionLayout layout;
  int parsed = std::sscanf(tag.c_str(), "beams|pa_x|assoc|beta;v1;K=%d,N=%d,M=%d,L=%d",
                           &layout.num_ues, &layout.num_waveguides, &layout.pas_per_waveguide,
                           &layout.ue_antennas);
  if (parsed != 4) throw std::invalid_argument("unrecognized action layout tag: " + tag);
  return layout;
}

double DiscretizationSchedule::blend() const {
  if (current_episode >= lb_episodes) return 1.0;
  if (current_episode < 0) return 0.0;
  return static_cast<double>(current_episode) / lb_episodes;
}

void DiscretizationSchedule::validate() const {
  if (lb_episodes < 1) throw std::invalid_argument("schedule: lb_episodes must be >= 1");
  if (varpi_min >= varpi_max) throw std::invalid_argument("schedule: varpi range is empty");
}

std::vector<double> conventional_segments(int num_waveguides, const DiscretizationSchedule& sched) {
  if (num_waveguides < 1) throw std::invalid_argument("segments: need at least one waveguide");
  return std::vector<double>(num_waveguides, sched.range() / num_waveguides);
}

std::vector<double> lb_segments(const std::vector<int>& loads, int num_ues,
                                const DiscretizationSchedule& sched) {
  const int n = static_cast<int>(loads.size());
  if (n < 1) throw std::invalid_argument("segments: need at least one waveguide");
  if (!sched.load_balancing_active() || n == 1) return conventional_segments(n, sched);

  double remaining_total = 0.0;
  for (int load : loads) remaining_total += num_ues - load;
  // Sum(K - load) >= K (N-1) > 0 whenever at most K UEs are committed.
  const double mix = sched.blend();
  const double even = sched.range() / n;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double load_share = sched.range() * (num_ues - loads[i]) / remaining_total;
    out[i] = (1.0 - mix) * load_share + mix * even;
  }
  return out;
}

namespace {

int pick_segment(double value, double varpi_min, const std::vector<double>& segments) {
  double cum = 0.0;
  const double offset = value - varpi_min;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    cum += segments[i];
    if (offset < cum) return static_cast<int>(i);
  }
  // At or past the top boundary: last segment with nonzero width.
  for (int i = static_cast<int>(segments.size()) - 1; i >= 0; --i) {
    if (segments[i] > 0.0) return i;
  }
  return static_cast<int>(segments.size()) - 1;
}

}  // namespace

std::vector<int> decode_association(std::span<const double> varpi, int num_waveguides,
                                    const DiscretizationSchedule& sched) {
  std::vector<int> assoc(varpi.size());
  std::vector<int> loads(num_waveguides, 0);
  for (std::size_t k = 0; k < varpi.size(); ++k) {
    auto segments = lb_segments(loads, static_cast<int>(varpi.size()), sched);
    assoc[k] = pick_segment(varpi[k], sched.varpi_min, segments);
    ++loads[assoc[k]];
  }
  return assoc;
}

std::vector<std::vector<cplx>> decode_beams(std::span<const double> raw, int num_ues,
                                            int ue_antennas, double p_max_watts) {
  if (static_cast<int>(raw.size()) != 2 * ue_antennas * num_ues)
    throw std::invalid_argument("decode_beams: raw segment has wrong length");
  std::vector<std::vector<cplx>> beams(num_ues, std::vector<cplx>(ue_antennas));
  const double amplitude = std::sqrt(p_max_watts);
  for (int k = 0; k < num_ues; ++k) {
    double norm_sq = 0.0;
    for (int l = 0; l < ue_antennas; ++l) {
      double re = raw[static_cast<std::size_t>(k) * 2 * ue_antennas + 2 * l];
      double im = raw[static_cast<std::size_t>(k) * 2 * ue_antennas + 2 * l + 1];
      beams[k][l] = cplx{re, im};
      norm_sq += re * re + im * im;
    }
    double scale = amplitude / std::max(1.0, std::sqrt(norm_sq));
    for (auto& w : beams[k]) w *= scale;
  }
  return beams;
}

std::vector<std::vector<double>> decode_pa_positions(std::span<const double> raw,
                                                     const SystemGeometry& geom) {
  const int wgs = geom.num_waveguides;
  const int count = geom.pas_per_waveguide;
  if (static_cast<int>(raw.size()) != wgs * count)
    throw std::invalid_argument("decode_pa_positions: raw segment has wrong length");
  const double gap = geom.antenna_spacing_m;

  std::vector<std::vector<double>> pos(wgs, std::vector<double>(count));
  for (int n = 0; n < wgs; ++n) {
    for (int m = 0; m < count; ++m) {
      pos[n][m] = (raw[static_cast<std::size_t>(n) * count + m] + 1.0) / 2.0 * geom.region_x_m;
    }
    std::sort(pos[n].begin(), pos[n].end());
    for (int m = 1; m < count; ++m) {
      pos[n][m] = std::max(pos[n][m - 1] + gap, pos[n][m]);
    }
    if (pos[n][count - 1] > geom.region_x_m) {
      pos[n][count - 1] = geom.region_x_m;
      for (int m = count - 2; m >= 0; --m) {
        pos[n][m] = std::min(pos[n][m], pos[n][m + 1] - gap);
      }
    }
  }
  return pos;
}

std::vector<double> decode_beta(std::span<const double> raw) {
  std::vector<double> beta(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) beta[k] = (raw[k] + 1.0) / 2.0;
  return beta;
}

DecodedAction decode_action(std::span<const double> raw, const ActionLayout& layout,
                            const SystemGeometry& geom, double p_max_watts,
                            const DiscretizationSchedule& sched) {
  if (static_cast<int>(raw.size()) != layout.total())
    throw std::invalid_argument("decode_action: raw vector has wrong dimension");
  DecodedAction action;
  action.beams = decode_beams(raw.subspan(layout.beam_offset(), layout.beam_len()),
                              layout.num_ues, layout.ue_antennas, p_max_watts);
  action.pa_x = decode_pa_positions(raw.subspan(layout.position_offset(), layout.position_len()), geom);
  action.assoc = decode_association(raw.subspan(layout.assoc_offset(), layout.assoc_len()),
                                    layout.num_waveguides, sched);
  action.beta = decode_beta(raw.subspan(layout.beta_offset(), layout.beta_len()));
  return action;
}

}  // namespace passmec
