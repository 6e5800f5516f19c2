#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "passmec/channel.hpp"
#include "passmec/geometry.hpp"
#include "passmec/rng.hpp"

using namespace passmec;

namespace {

SystemGeometry default_geometry() {
  SystemGeometry g;
  g.finalize();
  return g;
}

// Independent SINR evaluation with explicit real/imaginary bookkeeping; never
// touches effective_gain or std::complex arithmetic helpers.
double sinr_loop_oracle(const ChannelSet& ch, const std::vector<int>& assoc,
                        const std::vector<std::vector<cplx>>& beams, int k) {
  auto gain_re_im = [&](int ue, int wg) {
    double re = 0.0, im = 0.0;
    const int num_pas = ch.elements_per_receiver;
    const int num_ant = ch.ue_antennas;
    for (int m = 0; m < num_pas; ++m) {
      // conj(h[m]) * sum_l H[m][l] w[l]
      double hr = ch.h[wg][m].real(), hi = -ch.h[wg][m].imag();
      double sr = 0.0, si = 0.0;
      for (int l = 0; l < num_ant; ++l) {
        double ar = ch.H[ue][wg][m * num_ant + l].real();
        double ai = ch.H[ue][wg][m * num_ant + l].imag();
        double wr = beams[ue][l].real(), wi = beams[ue][l].imag();
        sr += ar * wr - ai * wi;
        si += ar * wi + ai * wr;
      }
      re += hr * sr - hi * si;
      im += hr * si + hi * sr;
    }
    return std::pair<double, double>{re, im};
  };

  auto [gr, gi] = gain_re_im(k, assoc[k]);
  double signal = gr * gr + gi * gi;
  double interference = 0.0;
  for (std::size_t j = 0; j < beams.size(); ++j) {
    if (static_cast<int>(j) == k || assoc[j] != assoc[k]) continue;
    auto [ir, ii] = gain_re_im(static_cast<int>(j), assoc[k]);
    interference += ir * ir + ii * ii;
  }
  return signal / (interference + ch.elements_per_receiver * ch.noise_power_w);
}

struct RandomInstance {
  SystemGeometry geom;
  UEPlacement ue;
  PAPlacement pa;
  ChannelSet channels;
  std::vector<int> assoc;
  std::vector<std::vector<cplx>> beams;
};

RandomInstance random_instance(Rng& rng, int num_ues, int wgs, int pas, int ants) {
  RandomInstance inst;
  inst.geom = default_geometry();
  inst.geom.num_ues = num_ues;
  inst.geom.num_waveguides = wgs;
  inst.geom.pas_per_waveguide = pas;
  inst.geom.ue_antennas = ants;
  inst.geom.waveguide_y.clear();
  inst.geom.finalize();

  std::vector<Vec3> centroids(num_ues);
  for (auto& c : centroids) {
    c.x = rng.uniform(0.0, inst.geom.region_x_m);
    c.y = rng.uniform(-inst.geom.region_y_m / 2.0, inst.geom.region_y_m / 2.0);
  }
  inst.ue = ue_antenna_positions(inst.geom, centroids);

  inst.pa.x.resize(wgs);
  for (auto& row : inst.pa.x) {
    row.resize(pas);
    double x = rng.uniform(0.0, 1.0);
    for (int m = 0; m < pas; ++m) {
      x += inst.geom.antenna_spacing_m + rng.uniform(0.0, 1.5);
      row[m] = std::min(x, inst.geom.region_x_m);
    }
    for (int m = 1; m < pas; ++m)
      row[m] = std::max(row[m], row[m - 1] + inst.geom.antenna_spacing_m);
    if (row[pas - 1] > inst.geom.region_x_m) {
      row[pas - 1] = inst.geom.region_x_m;
      for (int m = pas - 2; m >= 0; --m)
        row[m] = std::min(row[m], row[m + 1] - inst.geom.antenna_spacing_m);
    }
  }

  inst.channels = build_channels(inst.geom, inst.ue, inst.pa, 1e-12);
  inst.assoc.resize(num_ues);
  inst.beams.resize(num_ues);
  for (int k = 0; k < num_ues; ++k) {
    inst.assoc[k] = static_cast<int>(rng.uniform() * wgs);
    inst.beams[k].resize(ants);
    for (auto& w : inst.beams[k]) w = cplx{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
  }
  return inst;
}

}  // namespace

TEST_CASE("ULA offsets are symmetric around the centroid") {
  SystemGeometry g = default_geometry();
  g.antenna_spacing_m = 0.01;
  g.num_ues = 1;
  g.finalize();
  auto placement = ue_antenna_positions(g, {Vec3{5.0, 0.0, 0.0}});
  REQUIRE(placement.antennas[0].size() == 3);
  CHECK(placement.antennas[0][0].y == doctest::Approx(-0.01).epsilon(1e-12));
  CHECK(placement.antennas[0][1].y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(placement.antennas[0][2].y == doctest::Approx(0.01).epsilon(1e-12));
  double sum = 0.0;
  for (const auto& a : placement.antennas[0]) sum += a.y;
  CHECK(sum == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single antenna sits exactly at the centroid") {
  SystemGeometry g = default_geometry();
  g.ue_antennas = 1;
  g.num_ues = 1;
  g.finalize();
  auto placement = ue_antenna_positions(g, {Vec3{2.5, 1.25, 0.0}});
  CHECK(placement.antennas[0][0].x == 2.5);
  CHECK(placement.antennas[0][0].y == 1.25);
  CHECK(placement.antennas[0][0].z == 0.0);
}

TEST_CASE("two-antenna offsets at 28 GHz half-wavelength spacing") {
  SystemGeometry g = default_geometry();
  g.ue_antennas = 2;
  g.num_ues = 1;
  g.antenna_spacing_m = 0.0053571;
  g.finalize();
  auto placement = ue_antenna_positions(g, {Vec3{1.0, 0.0, 0.0}});
  CHECK(placement.antennas[0][0].y == doctest::Approx(-0.00267855).epsilon(1e-9));
  CHECK(placement.antennas[0][1].y == doctest::Approx(0.00267855).epsilon(1e-9));
}

TEST_CASE("centroid outside the region is rejected") {
  SystemGeometry g = default_geometry();
  g.num_ues = 1;
  g.finalize();
  CHECK_THROWS_AS(ue_antenna_positions(g, {Vec3{-0.1, 0.0, 0.0}}), std::domain_error);
  CHECK_THROWS_AS(ue_antenna_positions(g, {Vec3{5.0, 5.1, 0.0}}), std::domain_error);
}

TEST_CASE("channel entry directly above a UE antenna") {
  SystemGeometry g = default_geometry();
  // d = 3 m, lambda = c/f = 3/280 m, so d is an exact multiple of lambda and
  // the phase wraps to zero.
  cplx entry = los_channel_entry(g, Vec3{5.0, 0.0, 0.0}, Vec3{5.0, 0.0, 3.0});
  CHECK(std::abs(entry) == doctest::Approx(2.8421e-4).epsilon(1e-4));
  CHECK(std::abs(std::abs(entry) - g.sqrt_eta() / 3.0) < 1e-15);
  CHECK(entry.real() == doctest::Approx(g.sqrt_eta() / 3.0).epsilon(1e-9));
  CHECK(std::abs(entry.imag()) < 1e-12);
}

TEST_CASE("doubling the distance halves the magnitude") {
  SystemGeometry g = default_geometry();
  cplx near = los_channel_entry(g, Vec3{0.0, 0.0, 0.0}, Vec3{0.0, 0.0, 3.0});
  cplx far = los_channel_entry(g, Vec3{0.0, 0.0, 0.0}, Vec3{0.0, 0.0, 6.0});
  CHECK(std::abs(near) == doctest::Approx(2.0 * std::abs(far)).epsilon(1e-12));
}

TEST_CASE("equidistant antennas see identical entries") {
  SystemGeometry g = default_geometry();
  Vec3 pa{5.0, 0.0, 3.0};
  cplx a = los_channel_entry(g, Vec3{4.0, 1.0, 0.0}, pa);
  cplx b = los_channel_entry(g, Vec3{6.0, -1.0, 0.0}, pa);
  CHECK(a.real() == doctest::Approx(b.real()).epsilon(1e-14));
  CHECK(a.imag() == doctest::Approx(b.imag()).epsilon(1e-14));
}

TEST_CASE("magnitude law: |entry| * distance = sqrt_eta") {
  SystemGeometry g = default_geometry();
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Vec3 ue{rng.uniform(0.0, 10.0), rng.uniform(-5.0, 5.0), 0.0};
    Vec3 pa{rng.uniform(0.0, 10.0), rng.uniform(-5.0, 5.0), 3.0};
    double d = distance(ue, pa);
    cplx entry = los_channel_entry(g, ue, pa);
    CHECK(std::abs(entry) * d == doctest::Approx(g.sqrt_eta()).epsilon(1e-12));
  }
}

TEST_CASE("waveguide phase vector basics") {
  SystemGeometry g = default_geometry();
  g.finalize();
  const double lambda_w = g.guided_wavelength();

  PAPlacement pa;
  pa.x.assign(g.num_waveguides, std::vector<double>(g.pas_per_waveguide, 0.0));
  // PA 0 on the feed, PA 1 a full guided period away, PA 2 a quarter period,
  // PA 3 parked far right.
  pa.x[0] = {0.0, lambda_w, lambda_w / 4.0 + lambda_w, 9.0};
  std::sort(pa.x[0].begin(), pa.x[0].end());
  auto h = waveguide_phase_vector(g, pa, 0);

  CHECK(h[0].real() == doctest::Approx(1.0).epsilon(1e-12));  // at the feed
  CHECK(std::abs(h[0].imag()) < 1e-12);
  CHECK(h[1].real() == doctest::Approx(1.0).epsilon(1e-9));   // full period
  CHECK(std::abs(h[1].imag()) < 1e-9);
  // quarter period: e^{-j pi/2} = -j
  CHECK(std::abs(h[2].real()) < 1e-9);
  CHECK(h[2].imag() == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("phase unitarity on random placements") {
  SystemGeometry g = default_geometry();
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, 2, 2, 4, 2);
    for (int n = 0; n < inst.geom.num_waveguides; ++n) {
      for (const cplx& v : inst.channels.h[n]) {
        CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("effective gain: zero beam and scalar case") {
  std::vector<cplx> h{cplx{1.0, 0.0}};
  std::vector<cplx> H{cplx{0.3, -0.4}};
  std::vector<cplx> w{cplx{0.0, 0.0}};
  CHECK(std::abs(effective_gain(h, H, w)) == 0.0);

  w[0] = cplx{2.0, 1.0};
  cplx expected = H[0] * w[0];
  cplx got = effective_gain(h, H, w);
  CHECK(got.real() == doctest::Approx(expected.real()).epsilon(1e-15));
  CHECK(got.imag() == doctest::Approx(expected.imag()).epsilon(1e-15));
}

TEST_CASE("effective gain matches a naive double loop on a random 4x3 instance") {
  Rng rng(3);
  const int num_pas = 4, num_ant = 3;
  std::vector<cplx> h(num_pas), H(num_pas * num_ant), w(num_ant);
  for (auto& v : h) v = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
  for (auto& v : H) v = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  for (auto& v : w) v = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

  double re = 0.0, im = 0.0;
  for (int m = 0; m < num_pas; ++m) {
    for (int l = 0; l < num_ant; ++l) {
      double hr = h[m].real(), hi = -h[m].imag();
      double pr = H[m * num_ant + l].real() * w[l].real() - H[m * num_ant + l].imag() * w[l].imag();
      double pi = H[m * num_ant + l].real() * w[l].imag() + H[m * num_ant + l].imag() * w[l].real();
      re += hr * pr - hi * pi;
      im += hr * pi + hi * pr;
    }
  }
  cplx got = effective_gain(h, H, w);
  CHECK(std::abs(got - cplx{re, im}) <= 1e-12 * std::abs(got));
}

TEST_CASE("effective gain rejects mismatched dimensions") {
  std::vector<cplx> h(4), H(11), w(3);
  CHECK_THROWS_AS(effective_gain(h, H, w), std::invalid_argument);
}

TEST_CASE("single UE SINR is |g|^2 / (M sigma^2)") {
  Rng rng(5);
  auto inst = random_instance(rng, 1, 2, 4, 3);
  double s = sinr(inst.channels, inst.assoc, inst.beams, 0);
  cplx g = effective_gain(inst.channels.h[inst.assoc[0]], inst.channels.H[0][inst.assoc[0]],
                          inst.beams[0]);
  double expected = std::norm(g) / (4 * 1e-12);
  CHECK(s == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("all-zero beams give zero SINR") {
  Rng rng(6);
  auto inst = random_instance(rng, 3, 2, 4, 3);
  for (auto& beam : inst.beams)
    for (auto& w : beam) w = cplx{0.0, 0.0};
  for (int k = 0; k < 3; ++k) CHECK(sinr(inst.channels, inst.assoc, inst.beams, k) == 0.0);
}

TEST_CASE("two UEs on one waveguide match the brute-force oracle") {
  Rng rng(8);
  auto inst = random_instance(rng, 2, 1, 3, 2);
  inst.assoc = {0, 0};
  for (int k = 0; k < 2; ++k) {
    double fast = sinr(inst.channels, inst.assoc, inst.beams, k);
    double slow = sinr_loop_oracle(inst.channels, inst.assoc, inst.beams, k);
    CHECK(std::abs(fast - slow) <= 1e-10 * std::max(fast, slow));
  }
}

TEST_CASE("brute-force SINR equivalence on random small instances") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    int num_ues = 1 + static_cast<int>(rng.uniform() * 3);
    int wgs = 1 + static_cast<int>(rng.uniform() * 2);
    int pas = 1 + static_cast<int>(rng.uniform() * 4);
    int ants = 1 + static_cast<int>(rng.uniform() * 3);
    auto inst = random_instance(rng, num_ues, wgs, pas, ants);
    for (int k = 0; k < num_ues; ++k) {
      double fast = sinr(inst.channels, inst.assoc, inst.beams, k);
      double slow = sinr_loop_oracle(inst.channels, inst.assoc, inst.beams, k);
      CHECK(std::abs(fast - slow) <= 1e-10 * std::max({fast, slow, 1e-300}));
    }
  }
}

TEST_CASE("SINR is invariant under a common phase rotation of the beam") {
  Rng rng(10);
  auto inst = random_instance(rng, 3, 2, 4, 3);
  double base = sinr(inst.channels, inst.assoc, inst.beams, 1);
  cplx rot = std::polar(1.0, 1.234);
  for (auto& w : inst.beams[1]) w *= rot;
  double rotated = sinr(inst.channels, inst.assoc, inst.beams, 1);
  CHECK(rotated == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("scaling a same-waveguide interferer never increases SINR") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, 2, 1, 4, 3);
    inst.assoc = {0, 0};
    double before = sinr(inst.channels, inst.assoc, inst.beams, 0);
    for (auto& w : inst.beams[1]) w *= 1.0 + rng.uniform(0.0, 3.0);
    double after = sinr(inst.channels, inst.assoc, inst.beams, 0);
    CHECK(after <= before * (1.0 + 1e-12));
  }
}

TEST_CASE("rate examples") {
  CHECK(rate_bits_per_s(0.0, 1e7, 5) == 0.0);
  CHECK(rate_bits_per_s(1.0, 1e7, 5) == doctest::Approx(2.0e6).epsilon(1e-12));
  CHECK(rate_bits_per_s(3.0, 1e7, 5) == doctest::Approx(4.0e6).epsilon(1e-12));
}

TEST_CASE("even waveguide deployment") {
  auto y = SystemGeometry::even_waveguide_y(10.0, 3);
  CHECK(y[0] == doctest::Approx(-10.0 / 3.0).epsilon(1e-12));
  CHECK(y[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(y[2] == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mimo array is centered over the region at half-wavelength spacing") {
  SystemGeometry g = default_geometry();
  auto elems = mimo_array_positions(g);
  REQUIRE(elems.size() == 4);
  double lambda = g.wavelength();
  CHECK(elems[1].x - elems[0].x == doctest::Approx(lambda / 2.0).epsilon(1e-12));
  double mid = (elems[0].x + elems[3].x) / 2.0;
  CHECK(mid == doctest::Approx(5.0).epsilon(1e-12));
  for (const auto& e : elems) {
    CHECK(e.y == 0.0);
    CHECK(e.z == 3.0);
  }
}
