#include "passmec/geometry.hpp"

#include <algorithm>
#include <string>

namespace passmec {

std::vector<double> SystemGeometry::even_waveguide_y(double region_y_m, int num_waveguides) {
  std::vector<double> y(num_waveguides);
  for (int n = 0; n < num_waveguides; ++n) {
    y[n] = -region_y_m / 2.0 + (n + 0.5) * region_y_m / num_waveguides;
  }
  return y;
}

void SystemGeometry::finalize() {
  if (antenna_spacing_m <= 0.0) antenna_spacing_m = wavelength() / 2.0;
  if (waveguide_y.empty()) waveguide_y = even_waveguide_y(region_y_m, num_waveguides);
  validate();
}

void SystemGeometry::validate() const {
  if (region_x_m <= 0.0 || region_y_m <= 0.0 || waveguide_height_m <= 0.0)
    throw std::invalid_argument("geometry: region dimensions and height must be positive");
  if (num_waveguides < 1 || pas_per_waveguide < 1 || ue_antennas < 1 || num_ues < 1)
    throw std::invalid_argument("geometry: counts N, M, L, K must all be >= 1");
  if (carrier_hz <= 0.0 || refractive_index <= 0.0 || light_speed_m_s <= 0.0)
    throw std::invalid_argument("geometry: carrier, refractive index and light speed must be positive");
  if (antenna_spacing_m <= 0.0)
    throw std::invalid_argument("geometry: antenna spacing must be positive");
  if (static_cast<int>(waveguide_y.size()) != num_waveguides)
    throw std::invalid_argument("geometry: waveguide_y size must equal num_waveguides");
  for (double y : waveguide_y) {
    if (y < -region_y_m / 2.0 || y > region_y_m / 2.0)
      throw std::invalid_argument("geometry: waveguide y outside [-d_y/2, d_y/2]");
  }
  if (pas_per_waveguide * antenna_spacing_m > region_x_m)
    throw std::invalid_argument("geometry: M*spacing exceeds region length, PAs cannot fit");
}

void PAPlacement::validate(const SystemGeometry& geom) const {
  if (static_cast<int>(x.size()) != geom.num_waveguides)
    throw std::invalid_argument("pa placement: wrong waveguide count");
  for (const auto& row : x) {
    if (static_cast<int>(row.size()) != geom.pas_per_waveguide)
      throw std::invalid_argument("pa placement: wrong PA count");
    for (std::size_t m = 0; m < row.size(); ++m) {
      if (row[m] < 0.0 || row[m] > geom.region_x_m)
        throw std::invalid_argument("pa placement: x outside [0, d_x]");
      // anti-coupling spacing, tiny slack for float round-off
      if (m > 0 && row[m] - row[m - 1] < geom.antenna_spacing_m - 1e-12)
        throw std::invalid_argument("pa placement: gap below minimum spacing");
    }
  }
}

UEPlacement ue_antenna_positions(const SystemGeometry& geom, const std::vector<Vec3>& centroids) {
  if (static_cast<int>(centroids.size()) != geom.num_ues)
    throw std::invalid_argument("ue placement: expected " + std::to_string(geom.num_ues) + " centroids");
  UEPlacement out;
  out.centroids = centroids;
  out.antennas.resize(centroids.size());
  const int count = geom.ue_antennas;
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    const Vec3& c = centroids[k];
    if (c.x < 0.0 || c.x > geom.region_x_m || c.y < -geom.region_y_m / 2.0 ||
        c.y > geom.region_y_m / 2.0)
      throw std::domain_error("ue placement: centroid outside the service region");
    out.antennas[k].resize(count);
    for (int l = 0; l < count; ++l) {
      double offset = (l + 1 - (count + 1) / 2.0) * geom.antenna_spacing_m;
      out.antennas[k][l] = Vec3{c.x, c.y + offset, 0.0};
    }
  }
  return out;
}

std::vector<double> even_layout_raw(const SystemGeometry& geom) {
  const int count = geom.pas_per_waveguide;
  std::vector<double> raw(static_cast<std::size_t>(geom.num_waveguides) * count);
  for (int n = 0; n < geom.num_waveguides; ++n) {
    for (int m = 0; m < count; ++m) {
      raw[static_cast<std::size_t>(n) * count + m] = (2.0 * m + 1.0) / count - 1.0;
    }
  }
  return raw;
}

std::vector<Vec3> mimo_array_positions(const SystemGeometry& geom) {
  const int count = geom.pas_per_waveguide;
  const double spacing = geom.wavelength() / 2.0;
  std::vector<Vec3> elems(count);
  for (int m = 0; m < count; ++m) {
    double offset = (m + 1 - (count + 1) / 2.0) * spacing;
    elems[m] = Vec3{geom.region_x_m / 2.0 + offset, 0.0, geom.waveguide_height_m};
  }
  return elems;
}

}  // namespace passmec
