#include <doctest.h>

#include <sstream>

#include "strobo/io.hpp"
#include "strobo/pipeline.hpp"
#include "strobo/studies.hpp"

using namespace strobo;

namespace {

std::string error_of(const std::vector<std::string>& overrides) {
  try {
    parse_scenario(paper_defaults_json(), overrides);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

RunResult small_run(std::vector<std::string> extra = {}) {
  extra.push_back("grid.pitch_mm=20");
  return run_pipeline(parse_scenario(paper_defaults_json(), extra));
}

}  // namespace

TEST_CASE("reference scenario") {
  const Scenario s = paper_defaults();
  CHECK(s.source.carrier == 77e9);
  CHECK(s.source.bandwidth == 500e6);
  CHECK(s.scene.source_height == 5.0);
  CHECK(s.scene.speed * s.scene.pri == doctest::Approx(1e-3));
  CHECK(s.codebook.center == doctest::Approx(deg2rad(40.0)));
  CHECK(s.plane.reflection_count == 13);
  CHECK(s.gamma_policy == GammaPolicy::synchronized);
  CHECK(source_beamwidth(s.source, 0.0) == doctest::Approx(deg2rad(0.5)));
}

TEST_CASE("canonical JSON round-trips to the same hash") {
  const Scenario s = parse_scenario(paper_defaults_json(),
                                    {"sweeps=3", "noise.enabled=true", "perturbation.beta_deg=1.5",
                                     "plane.gamma_rad=\"random\"", "grid.pitch_mm=4"});
  const std::string json = scenario_to_json(s);
  const Scenario back = parse_scenario(json);
  CHECK(scenario_to_json(back) == json);
  CHECK(scenario_hash(back) == scenario_hash(s));
  CHECK(back.sweeps == 3);
  CHECK(back.gamma_policy == GammaPolicy::random);
  CHECK(scenario_hash(paper_defaults()) != scenario_hash(s));
}

TEST_CASE("validation names the offending field") {
  CHECK(error_of({"plane.period_m=-1"}).find("plane.period_m") != std::string::npos);
  CHECK(error_of({"plane.period_m=\"two\""}).find("plane.period_m") != std::string::npos);
  CHECK(error_of({"scene.bogus=1"}).find("scene.bogus") != std::string::npos);
  CHECK(error_of({"sweeps=0"}).find("sweeps") != std::string::npos);
  CHECK(error_of({"signal.interpolation=\"cubic\""}).find("interpolation") != std::string::npos);
  CHECK(error_of({"targets=[{\"position_m\":[20,11]}]"}).find("outside the ROI") != std::string::npos);
  CHECK(error_of({"perturbation.beta_deg=15"}).find("beta") != std::string::npos);
  CHECK(error_of({"noequals"}).find("key=value") != std::string::npos);
  CHECK_THROWS_AS(parse_scenario("{not json"), ValidationError);
  CHECK(error_of({}).empty());
}

TEST_CASE("plane file round trip") {
  const Scenario s = paper_defaults();
  const DesignReport d = run_design(s);
  std::stringstream io;
  write_plane(io, d.plane, 0xabcdefULL);
  std::uint64_t h = 0;
  const PlaneDesign p = read_plane(io, &h);
  CHECK(h == 0xabcdefULL);
  CHECK(p.phase == d.plane.phase);
  CHECK(p.bin == d.plane.bin);
  CHECK(p.lattice.first == d.plane.lattice.first);
  CHECK(p.gamma == d.plane.gamma);
  CHECK(p.mode == d.plane.mode);
}

TEST_CASE("cube round trip at both precisions") {
  const RunResult r = small_run({"noise.enabled=true"});
  std::stringstream wide, narrow;
  write_cube(wide, r.cube, 7, SamplePrecision::complex128);
  write_cube(narrow, r.cube, 7);
  const EchoCube a = read_cube(wide);
  CHECK(a.data == r.cube.data);
  CHECK(a.meta.size() == r.cube.meta.size());
  CHECK(a.meta.back().theta_i == r.cube.meta.back().theta_i);
  CHECK(a.waveform.t_min == r.cube.waveform.t_min);
  CHECK(a.noise);
  const EchoCube b = read_cube(narrow);
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < b.data.size(); ++k) {
    worst = std::max(worst, std::abs(b.data[k] - r.cube.data[k]));
    scale = std::max(scale, std::abs(r.cube.data[k]));
  }
  CHECK(worst <= 1e-7 * scale);
}

TEST_CASE("image round trip and exports") {
  const RunResult r = small_run();
  std::stringstream io;
  write_image(io, r.image, 99);
  std::uint64_t h = 0;
  const Image back = read_image(io, &h);
  CHECK(h == 99);
  CHECK(back.grid == r.image.grid);
  double worst = 0.0;
  for (std::size_t k = 0; k < back.values.size(); ++k) {
    worst = std::max(worst, std::abs(back.values[k] - r.image.values[k]));
  }
  CHECK(worst <= 1e-7 * r.metrics.peak_value);

  std::ostringstream csv, pgm;
  write_image_csv(csv, r.image);
  const std::string text = csv.str();
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == r.grid.ny);
  write_image_pgm(pgm, r.image);
  CHECK(pgm.str().rfind("P5", 0) == 0);
  CHECK(pgm.str().size() > r.grid.size());
}

TEST_CASE("corrupt files are rejected") {
  std::stringstream bad("strobo-image 1\nscenario_hash: 00\n");
  CHECK_THROWS_AS(read_image(bad), FormatError);
  std::stringstream wrong("not-a-cube\n");
  CHECK_THROWS_AS(read_cube(wrong), FormatError);
  const RunResult r = small_run();
  std::stringstream io;
  write_image(io, r.image, 1);
  std::string s = io.str();
  s.resize(s.size() - 16);
  std::stringstream cut(s);
  CHECK_THROWS_AS(read_image(cut), FormatError);
}

TEST_CASE("γ policies") {
  Scenario s = paper_defaults();
  s.sweeps = 3;
  const auto sync = sweep_gammas(s);
  CHECK(sync == std::vector<double>(3, synchronized_gamma(s.scene, scenario_codebook(s), s.plane.period)));
  s.gamma_policy = GammaPolicy::fixed;
  s.plane.gamma = 0.25;
  CHECK(sweep_gammas(s) == std::vector<double>(3, 0.25));
  CHECK(sweep_planes(s, scenario_codebook(s)).size() == 1);
  s.gamma_policy = GammaPolicy::random;
  const auto g = sweep_gammas(s);
  CHECK(g.size() == 3);
  CHECK(g[0] != g[1]);
  CHECK(sweep_planes(s, scenario_codebook(s)).size() == 3);
}

TEST_CASE("pipeline images the target where it is") {
  const RunResult r = small_run({"grid.pitch_mm=5"});
  const Vec2 t = paper_defaults().targets.front().position;
  CHECK((r.metrics.peak - t).norm() < 5e-3);
  CHECK(r.metrics.widths_valid);
  CHECK(r.image.skipped == 0);
}

TEST_CASE("per-sweep images sum to the joint image") {
  RunOptions o;
  o.per_sweep_images = true;
  const Scenario s = parse_scenario(paper_defaults_json(), {"grid.pitch_mm=20", "sweeps=2"});
  const RunResult split = run_pipeline(s, o);
  const RunResult joint = run_pipeline(s);
  REQUIRE(split.sweep_images.size() == 2);
  double worst = 0.0;
  for (std::size_t k = 0; k < joint.image.values.size(); ++k) {
    worst = std::max(worst, std::abs(split.image.values[k] - joint.image.values[k]));
  }
  CHECK(worst <= 1e-9 * joint.metrics.peak_value);
  CHECK(split_sweeps(joint.cube).size() == 2);
}

TEST_CASE("fixed specular beam aims at r*") {
  const Scenario s = parse_scenario(paper_defaults_json(), {"codebook.fixed_beam_deg=\"specular\""});
  const TxCodebook cb = scenario_codebook(s);
  CHECK(cb.fixed_beam);
  const Pose p = pose_at(s.scene, 0);
  // Mirror reflection: incidence equals the reflection angle toward r*.
  CHECK(reflection_angle(p, cb.angles.front(), s.scene.roi_center) ==
        doctest::Approx(cb.angles.front()));
}

TEST_CASE("study table CSV") {
  StudyTable t;
  t.name = "x";
  t.columns = {"a", "b"};
  t.rows = {{1.0, std::numeric_limits<double>::quiet_NaN()}, {2.5, 3.0}};
  t.notes = {"hello"};
  CHECK(t.to_csv() == "# hello\na,b\n1,nan\n2.5,3\n");
  CHECK(t.values("a") == std::vector<double>{1.0, 2.5});
  CHECK_THROWS_AS(t.column("c"), DomainError);
}
