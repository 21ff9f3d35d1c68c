#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "strobo/pipeline.hpp"

using namespace strobo;

namespace {

Image make_image(std::size_t nx, std::size_t ny, double pitch, Vec2 origin, auto f) {
  Image img;
  img.grid.nx = nx;
  img.grid.ny = ny;
  img.grid.pitch_x = img.grid.pitch_y = pitch;
  img.grid.origin = origin;
  img.values.resize(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) img.at(ix, iy) = f(img.grid.position(ix, iy));
  return img;
}

// Root of sinc(x) = level on (0, 1) by bisection.
double sinc_crossing(double level) {
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 100; ++k) {
    const double mid = (lo + hi) / 2;
    (oracle::sinc(mid) > level ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

// Largest |sinc| beyond the first null, by dense search.
double sinc_first_sidelobe() {
  double best = 0.0;
  for (double x = 1.0; x < 2.0; x += 1e-6) best = std::max(best, std::abs(oracle::sinc(x)));
  return best;
}

}  // namespace

TEST_CASE("Lanczos interpolation matches the direct kernel") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  std::vector<cdouble> row(64);
  for (auto& z : row) z = {n(rng), n(rng)};
  std::uniform_real_distribution<double> pos(0.0, 63.0);
  for (int k = 0; k < 500; ++k) {
    const double u = k < 4 ? std::vector<double>{0.0, 0.3, 62.9, 63.0}[static_cast<std::size_t>(k)]
                           : pos(rng);
    cdouble got;
    REQUIRE(interpolate(row.data(), row.size(), u, Interpolation::lanczos, got));
    cdouble want{0.0, 0.0};
    for (std::size_t j = 0; j < row.size(); ++j) want += row[j] * oracle::lanczos4(u - static_cast<double>(j));
    CHECK(std::abs(got - want) < 1e-12);
  }
  cdouble z;
  CHECK(interpolate(row.data(), row.size(), 17.0, Interpolation::lanczos, z));
  CHECK(z == row[17]);
  CHECK_FALSE(interpolate(row.data(), row.size(), -0.01, Interpolation::lanczos, z));
  CHECK_FALSE(interpolate(row.data(), row.size(), 63.5, Interpolation::linear, z));
  CHECK(interpolate(row.data(), row.size(), 2.25, Interpolation::linear, z));
  CHECK(std::abs(z - (0.75 * row[2] + 0.25 * row[3])) < 1e-15);
}

TEST_CASE("back-projection equals the pixel × snapshot × tap triple loop") {
  const Scenario s = parse_scenario(paper_defaults_json(), {"source.beamwidth_deg=0.06"});
  const TxCodebook cb = uniform_codebook(s.codebook.center, deg2rad(0.2), deg2rad(0.1));
  PlaneRequest req = s.plane;
  req.gamma = 0.7;
  const PlaneDesign plane = build_plane(s.scene, s.source, cb, req);
  const Waveform w = make_waveform(s.scene, s.source, cb, 4.0);
  const EchoCube cube =
      synthesize_sweeps(s.scene, s.source, plane, cb, w, {{s.scene.roi_center}}, 0, 1, {});
  GridSpec g;
  g.nx = g.ny = 3;
  g.pitch_x = g.pitch_y = 0.02;
  g.origin = s.scene.roi_center - Vec2{0.02, 0.02};
  const Image img = backproject(cube, s.scene, g);
  std::vector<Vec2> px;
  for (std::size_t iy = 0; iy < 3; ++iy)
    for (std::size_t ix = 0; ix < 3; ++ix) px.push_back(g.position(ix, iy));
  const auto ref = oracle::backprojection_triple_loop(cube, s.scene, px);
  CHECK(oracle::max_abs_diff(img.values, ref) <= 1e-10 * oracle::max_abs(ref));

  ImagingOptions o;
  o.threads = 4;
  CHECK(backproject(cube, s.scene, g, o).values == img.values);
}

TEST_CASE("roi grid puts the outer pixel centres on the ROI boundary") {
  const SceneGeometry s;
  const GridSpec g = roi_grid(s, 5e-3, 5e-3);
  CHECK(g.nx == 201);
  CHECK(g.position(0, 0).x == doctest::Approx(s.roi_center.x - 0.5));
  CHECK(g.position(g.nx - 1, g.ny - 1).y == doctest::Approx(s.roi_center.y + 0.5));
  CHECK_THROWS_AS(roi_grid(s, 0.0, 1e-3), ValidationError);
}

TEST_CASE("peak refinement is exact on a quadratic surface") {
  const Vec2 c{0.013, -0.007};
  const Image img = make_image(21, 21, 0.01, {-0.1, -0.1}, [&](Vec2 p) {
    return cdouble{10.0 - (p.x - c.x) * (p.x - c.x) * 100 - (p.y - c.y) * (p.y - c.y) * 100, 0.0};
  });
  const Peak p = find_peak(img);
  CHECK(p.position.x == doctest::Approx(c.x).epsilon(1e-9));
  CHECK(p.position.y == doctest::Approx(c.y).epsilon(1e-9));
}

TEST_CASE("local peak follows the ascent from the seed") {
  auto blob = [](Vec2 p, Vec2 c, double a) {
    return a * std::exp(-((p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y)) / 0.01);
  };
  const Image img = make_image(101, 101, 0.01, {0.0, 0.0}, [&](Vec2 p) {
    return cdouble{blob(p, {0.2, 0.2}, 1.0) + blob(p, {0.8, 0.7}, 0.5), 0.0};
  });
  CHECK(find_peak(img).position.x == doctest::Approx(0.2).epsilon(1e-3));
  const Peak q = local_peak(img, {0.75, 0.75});
  CHECK(q.position.x == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(q.position.y == doctest::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("mainlobe width and sidelobe level of a separable sinc") {
  const double a = 0.1;  // first null at ±a
  const Image img = make_image(601, 601, 1e-3, {-0.3, -0.3}, [&](Vec2 p) {
    return cdouble{oracle::sinc(p.x / a) * oracle::sinc(p.y / (2 * a)), 0.0};
  });
  const double half = sinc_crossing(1 / std::sqrt(2.0));
  const Peak p = find_peak(img);
  const Widths w = measure_mainlobe(img, p);
  CHECK(w.x == doctest::Approx(2 * half * a).epsilon(1e-4));
  CHECK(w.y == doctest::Approx(4 * half * a).epsilon(1e-4));
  const double sl = 20 * std::log10(sinc_first_sidelobe());
  CHECK(highest_sidelobe_db(img, p) == doctest::Approx(sl).epsilon(1e-3));

  const ImageMetrics m = compute_metrics(img);
  CHECK(m.widths_valid);
  CHECK(m.omega_x == doctest::Approx(2 * w.x));
}

TEST_CASE("cut width needs both crossings inside the cut") {
  const std::vector<double> mag = {0.1, 0.5, 1.0, 0.9, 0.8};
  CHECK_THROWS_AS(cut_width(mag, 2, 1.0), DomainError);
  const std::vector<double> tri = {0.0, 0.5, 1.0, 0.5, 0.0};
  const double l = 1 / std::sqrt(2.0);
  CHECK(cut_width(tri, 2, 2.0) == doctest::Approx(2 * 2 * 2 * (1 - l)));
}

TEST_CASE("ISLR splits energy at the Ω rectangle") {
  Image img = make_image(11, 11, 0.1, {0.0, 0.0}, [](Vec2) { return cdouble{0.0, 0.0}; });
  img.at(5, 5) = {2.0, 0.0};
  img.at(5, 6) = {0.0, 1.0};
  img.at(0, 0) = {1.0, 1.0};
  CHECK(islr(img, {0.5, 0.5}, 0.25, 0.25) == doctest::Approx(2.0 / 5.0));
  CHECK(islr(img, {0.5, 0.5}, 0.05, 0.05) == doctest::Approx(3.0 / 4.0));
  CHECK_THROWS_AS(islr(img, {0.25, 0.25}, 0.01, 0.01), DomainError);
}

TEST_CASE("combining sweeps adds pixel values and needs equal grids") {
  Image a = make_image(3, 3, 0.1, {0.0, 0.0}, [](Vec2 p) { return cdouble{p.x, 0.0}; });
  Image b = make_image(3, 3, 0.1, {0.0, 0.0}, [](Vec2 p) { return cdouble{0.0, p.y}; });
  const Image c = combine_sweeps({a, b});
  CHECK(c.at(2, 1) == cdouble{0.2, 0.1});
  b.grid.pitch_x = 0.2;
  CHECK_THROWS_AS(combine_sweeps({a, b}), DomainError);
}
