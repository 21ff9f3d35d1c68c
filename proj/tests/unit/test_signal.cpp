#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "strobo/pipeline.hpp"

using namespace strobo;

namespace {

struct Small {
  Scenario s = parse_scenario(paper_defaults_json(), {"source.beamwidth_deg=0.06"});
  TxCodebook cb = uniform_codebook(s.codebook.center, deg2rad(0.2), deg2rad(0.1));
  PlaneDesign plane;
  Waveform w;
  TargetSet targets = {{s.scene.roi_center, 1.0, 0.3},
                       {s.scene.roi_center + Vec2{0.2, -0.1}, 0.5, 1.1}};

  explicit Small(PlaneMode mode = PlaneMode::stroboscopic) {
    PlaneRequest req = s.plane;
    req.mode = mode;
    req.gamma = 0.7;
    plane = build_plane(s.scene, s.source, cb, req);
    w = make_waveform(s.scene, s.source, cb, 4.0);
  }
};

}  // namespace

TEST_CASE("waveform is a band-limited sinc on a grid covering the ROI") {
  const Small f;
  CHECK(f.w.g(0.0) == 1.0);
  CHECK(std::abs(f.w.g(1 / f.w.bandwidth)) < 1e-15);
  CHECK(f.w.sample_rate == doctest::Approx(4 * f.s.source.bandwidth));
  for (const auto& c : f.s.scene.roi_corners()) {
    const double d = path_lengths(f.cb.angles.front(), f.s.scene, c, 0).total();
    const double t = 2 * d / kSpeedOfLight;
    CHECK(t > f.w.t_min);
    CHECK(t < f.w.time(f.w.samples - 1));
  }
  CHECK_THROWS_AS(make_waveform(f.s.scene, f.s.source, f.cb, 1.5), ValidationError);
}

TEST_CASE("path loss scales with distance and RCS") {
  const SourceConfig cfg;
  const double a = path_loss(cfg, 0.7, -0.3, 6.0, 8.0, 1.0);
  CHECK(path_loss(cfg, 0.7, -0.3, 12.0, 8.0, 1.0) == doctest::Approx(a / 4));
  CHECK(path_loss(cfg, 0.7, -0.3, 6.0, 16.0, 1.0) == doctest::Approx(a / 4));
  CHECK(path_loss(cfg, 0.7, -0.3, 6.0, 8.0, 4.0) == doctest::Approx(2 * a));
  CHECK_THROWS_AS(path_loss(cfg, 0.7, -0.3, 0.0, 8.0, 1.0), DomainError);
}

TEST_CASE("echo equals the explicit double sum over atom pairs") {
  const Small f;
  const EchoCube cube = synthesize_sweeps(f.s.scene, f.s.source, f.plane, f.cb, f.w, f.targets, 0, 1, {});
  REQUIRE(cube.snapshots() == 3);
  for (std::size_t l = 0; l < cube.snapshots(); ++l) {
    CHECK(cube.meta[l].atom_count <= 8);
    const auto ref = oracle::echo_double_sum(f.s.scene, f.s.source, f.plane, f.w, f.cb.angles[l],
                                             static_cast<long>(l), f.targets);
    const std::vector<cdouble> got(cube.row(l), cube.row(l) + cube.samples());
    CHECK(oracle::max_abs_diff(got, ref) <= 1e-10 * oracle::max_abs(ref));
  }
}

TEST_CASE("lens plane focuses coherently under the exact array model") {
  const Small f(PlaneMode::lens);
  const Pose pose = pose_at(f.s.scene, 1);
  const double th = f.cb.angles[1];
  const IlluminatedSet set = illuminated_set(f.s.source, pose, f.plane.lattice, th);
  const auto w = taper_weights(Taper::uniform, set.count);
  const cdouble af =
      array_factor(f.plane, set, pose, th, f.plane.lens_target, ArrayModel::exact, w);
  CHECK(std::abs(af) == doctest::Approx(static_cast<double>(set.count)).epsilon(1e-9));
}

TEST_CASE("taper weights") {
  CHECK(taper_weights(Taper::uniform, 4) == std::vector<double>(4, 1.0));
  const auto w = taper_weights(Taper::raised_cosine, 5);
  CHECK(w[0] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(0.5));
}

TEST_CASE("noise has the requested power and is tied to seed and snapshot") {
  const std::size_t n = 200000;
  const double power = 3.0;
  std::vector<cdouble> a(n), b(n), c(n);
  add_noise(a.data(), n, power, 42, 7);
  add_noise(b.data(), n, power, 42, 7);
  add_noise(c.data(), n, power, 42, 8);
  CHECK(a == b);
  CHECK(a != c);
  double re = 0, im = 0, mean_re = 0;
  for (const auto& z : a) {
    re += z.real() * z.real();
    im += z.imag() * z.imag();
    mean_re += z.real();
  }
  const double dn = static_cast<double>(n);
  // Sample variance of a Gaussian has relative standard deviation √(2/n) ≈ 0.3 %.
  CHECK(re / dn == doctest::Approx(power / 2).epsilon(0.02));
  CHECK(im / dn == doctest::Approx(power / 2).epsilon(0.02));
  CHECK(std::abs(mean_re / dn) < 5 * std::sqrt(power / 2 / dn));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
}

TEST_CASE("synthesis does not depend on the thread count") {
  const Small f;
  SynthesisOptions o;
  o.noise = true;
  o.noise_power = 1e-12;
  o.seed = 9;
  const EchoCube one = synthesize_sweeps(f.s.scene, f.s.source, f.plane, f.cb, f.w, f.targets, 0, 2, o);
  o.threads = 3;
  const EchoCube three = synthesize_sweeps(f.s.scene, f.s.source, f.plane, f.cb, f.w, f.targets, 0, 2, o);
  CHECK(one.data == three.data);
  CHECK(one.meta.size() == 6);
  CHECK(one.meta[4].index == 4);
  CHECK(one.meta[4].sweep == 1);
}
