#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace passmec {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Static deployment of the pinching-antenna network: a rectangular service
// region on the ground plane, waveguides stretched along x at height
// `waveguide_height_m`, and uniform-linear-array user terminals.
struct SystemGeometry {
  double region_x_m = 10.0;  // waveguides span [0, region_x_m]
  double region_y_m = 10.0;  // UEs lie in y ∈ [-region_y_m/2, region_y_m/2]
  double waveguide_height_m = 3.0;

  int num_waveguides = 3;     // N
  int pas_per_waveguide = 4;  // M
  int ue_antennas = 3;        // L
  int num_ues = 5;            // K

  double antenna_spacing_m = 0.0;  // UE element gap; also min PA gap. 0 -> lambda/2
  double carrier_hz = 28.0e9;
  double refractive_index = 1.4;
  double light_speed_m_s = 3.0e8;

  std::vector<double> waveguide_y;  // one y per waveguide
  double feed_x = 0.0;              // feed point x of every waveguide

  double wavelength() const { return light_speed_m_s / carrier_hz; }
  double guided_wavelength() const { return wavelength() / refractive_index; }
  // Free-space amplitude factor; channel magnitude is sqrt_eta / distance.
  double sqrt_eta() const { return light_speed_m_s / (4.0 * M_PI * carrier_hz); }

  // Waveguides deployed evenly: y_n = -d_y/2 + (n - 1/2) d_y / N.
  static std::vector<double> even_waveguide_y(double region_y_m, int num_waveguides);

  // Fills waveguide_y (if empty) and antenna_spacing_m (if zero), then checks
  // every invariant. Throws std::invalid_argument on a bad configuration.
  void finalize();
  void validate() const;
};

struct UEPlacement {
  std::vector<Vec3> centroids;                // K
  std::vector<std::vector<Vec3>> antennas;    // K x L
};

// PA x-coordinates per waveguide; y is the waveguide line, z the height.
struct PAPlacement {
  std::vector<std::vector<double>> x;  // N x M, ascending, gaps >= spacing

  void validate(const SystemGeometry& geom) const;
};

inline Vec3 pa_position(const SystemGeometry& geom, const PAPlacement& pa, int wg, int idx) {
  return Vec3{pa.x[wg][idx], geom.waveguide_y[wg], geom.waveguide_height_m};
}

inline Vec3 feed_position(const SystemGeometry& geom, int wg) {
  return Vec3{geom.feed_x, geom.waveguide_y[wg], geom.waveguide_height_m};
}

// ULA antenna positions around each centroid, offsets
// delta_l = (l - (L+1)/2) * spacing along y. Throws std::domain_error when a
// centroid lies outside the region.
UEPlacement ue_antenna_positions(const SystemGeometry& geom, const std::vector<Vec3>& centroids);

// Raw position values whose affine decode lands PAs evenly along each
// waveguide at x = (2m-1) d_x / (2M).
std::vector<double> even_layout_raw(const SystemGeometry& geom);

// Receive-array element positions for the MIMO baseline: one M-element line
// array centered over the region at (d_x/2, 0, H), spaced half a wavelength
// along x.
std::vector<Vec3> mimo_array_positions(const SystemGeometry& geom);

}  // namespace passmec
