#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "strobo/io.hpp"
#include "strobo/parallel.hpp"
#include "strobo/studies.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace strobo;

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kInfeasible = 3, kNumeric = 4 };

struct Common {
  std::string scenario;
  bool paper_defaults = false;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario, "Scenario JSON file");
  cmd->add_flag("--paper-defaults", c.paper_defaults, "Start from the reference parameter set");
  cmd->add_option("--override", c.overrides, "Dotted key=value applied after loading")
      ->take_all();
  cmd->add_option("--seed", c.seed, "Replaces the scenario seed");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware)");
  cmd->add_option("--out", c.out, "Output directory");
}

Scenario load(const Common& c) {
  if (c.paper_defaults == !c.scenario.empty()) {
    throw ValidationError("give exactly one of --scenario or --paper-defaults");
  }
  Scenario s = c.paper_defaults ? parse_scenario(paper_defaults_json(), c.overrides)
                                : load_scenario(c.scenario, c.overrides);
  if (c.seed) s.seed = *c.seed;
  s.validate();
  return s;
}

unsigned threads(const Common& c) { return c.threads ? c.threads : default_thread_count(); }

std::string out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  return (fs::path(c.out) / name).string();
}

template <class Writer>
void save_binary(const std::string& path, Writer&& write) {
  std::ostringstream os(std::ios::binary);
  write(os);
  save_file(path, os.str());
}

void save_json(const std::string& path, const json& j) { save_file(path, j.dump(2) + "\n"); }

double deg(double rad) { return rad2deg(rad); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* run_tag(const Scenario& s) {
  switch (s.plane.mode) {
    case PlaneMode::lens: return "baseline";
    case PlaneMode::mirror: return "mirror-comparison";
    case PlaneMode::stroboscopic: break;
  }
  return "stroboscopic";
}

json design_json(const Scenario& s, const DesignReport& r) {
  const PlaneDesign& p = r.plane;
  json j;
  j["scenario_hash"] = hex64(scenario_hash(s));
  j["mode"] = to_string(p.mode);
  j["theta_o_center_deg"] = deg(p.reflection.center);
  j["theta_o_span_deg"] = deg(p.reflection.span);
  j["theta_o_span_diagonal_deg"] = deg(r.diagonal_span.span);
  json angles = json::array();
  for (double a : p.reflection_angles) angles.push_back(deg(a));
  j["reflection_codebook_deg"] = angles;
  j["reflection_step_deg"] = deg(p.step.step);
  j["reflection_step_bound_deg"] = deg(p.step.step_bound);
  j["module_atoms"] = p.step.module_atoms;
  j["module_width_m"] = p.step.module_atoms * p.lattice.pitch;
  j["max_module_atoms"] = p.step.max_module_atoms;
  j["module_size_compliant"] = p.step.compliant;
  j["period_m"] = p.period;
  j["gamma_rad"] = p.gamma;
  j["atom_pitch_m"] = p.lattice.pitch;
  j["atom_count"] = p.atom_count();
  j["tx_step_limit_deg"] = finite_or_null(deg(r.sampling.step));
  j["tx_step_deg"] = deg(r.codebook.step);
  j["tx_codebook_size"] = r.codebook.size();
  j["sweep_duration_s"] = r.codebook.sweep_duration(s.scene.pri);
  j["sweep_travel_m"] = r.codebook.sweep_duration(s.scene.pri) * s.scene.speed;
  j["effective_aperture_m"] = r.effective_aperture;
  double worst = std::numeric_limits<double>::infinity();
  for (double m : r.narrowband.margin) worst = std::min(worst, m);
  j["narrowband_min_margin"] = finite_or_null(worst);
  j["narrowband_pass"] = r.narrowband.pass;
  j["warnings"] = r.warnings;
  return j;
}

json metrics_json(const Scenario& s, const Image& image, const ImageMetrics& m) {
  json j;
  j["scenario_hash"] = hex64(scenario_hash(s));
  j["tag"] = run_tag(s);
  j["peak_m"] = {m.peak.x, m.peak.y};
  j["peak_value"] = m.peak_value;
  if (m.widths_valid) {
    j["width_m"] = {m.width.x, m.width.y};
    j["omega_m"] = {m.omega_x, m.omega_y};
    j["islr_db"] = 10 * std::log10(m.islr);
  } else {
    j["width_m"] = nullptr;
    j["omega_m"] = nullptr;
    j["islr_db"] = nullptr;
  }
  j["highest_sidelobe_db"] = finite_or_null(m.highest_sidelobe_db);
  j["grid"] = {{"origin_m", {image.grid.origin.x, image.grid.origin.y}},
               {"pitch_m", {image.grid.pitch_x, image.grid.pitch_y}},
               {"size", {image.grid.nx, image.grid.ny}}};
  j["skipped_terms"] = image.skipped;
  j["provenance"] = image.provenance;
  return j;
}

// Imaging-only fields do not change the cube.
std::uint64_t acquisition_hash(Scenario s) {
  s.grid_pitch.reset();
  s.signal.interpolation = Interpolation::lanczos;
  return scenario_hash(s);
}

int cmd_design(const Common& c) {
  const Scenario s = load(c);
  const DesignReport r = run_design(s);
  const auto hash = scenario_hash(s);
  save_binary(out_path(c, "plane.bin"), [&](std::ostream& os) { write_plane(os, r.plane, hash); });
  save_json(out_path(c, "design.json"), design_json(s, r));
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return kOk;
}

EchoCube simulate_scenario(const Scenario& s, unsigned n) {
  const TxCodebook cb = scenario_codebook(s);
  return simulate(s, cb, sweep_planes(s, cb), n);
}

int cmd_simulate(const Common& c, bool double_precision) {
  const Scenario s = load(c);
  const auto t0 = std::chrono::steady_clock::now();
  const EchoCube cube = simulate_scenario(s, threads(c));
  const auto t1 = std::chrono::steady_clock::now();
  const auto precision = double_precision ? SamplePrecision::complex128 : SamplePrecision::complex64;
  save_binary(out_path(c, "cube.bin"),
              [&](std::ostream& os) { write_cube(os, cube, scenario_hash(s), precision); });
  json m;
  m["scenario_hash"] = hex64(scenario_hash(s));
  m["seed"] = s.seed;
  m["snapshots"] = cube.snapshots();
  m["samples"] = cube.samples();
  m["sample_rate_hz"] = cube.waveform.sample_rate;
  m["synthesis_s"] = std::chrono::duration<double>(t1 - t0).count();
  json margins = json::array();
  for (const auto& info : cube.meta) margins.push_back(finite_or_null(info.narrowband_margin));
  m["narrowband_margins"] = margins;
  m["warnings"] = cube.warnings;
  save_json(out_path(c, "manifest.json"), m);
  for (const auto& w : cube.warnings) std::cerr << "warning: " << w << '\n';
  return kOk;
}

int cmd_image(const Common& c, const std::string& cube_path, const std::string& cache_dir,
              bool assume_perturbation, bool pgm, bool csv) {
  const Scenario s = load(c);
  EchoCube cube;
  if (!cube_path.empty()) {
    std::istringstream is(load_file(cube_path), std::ios::binary);
    cube = read_cube(is);
  } else if (!cache_dir.empty()) {
    fs::create_directories(cache_dir);
    const auto key = (fs::path(cache_dir) / (hex64(acquisition_hash(s)) + ".cube")).string();
    if (fs::exists(key)) {
      std::istringstream is(load_file(key), std::ios::binary);
      cube = read_cube(is);
    } else {
      cube = simulate_scenario(s, threads(c));
      save_binary(key, [&](std::ostream& os) {
        write_cube(os, cube, acquisition_hash(s), SamplePrecision::complex128);
      });
    }
  } else {
    cube = simulate_scenario(s, threads(c));
  }
  const TxCodebook cb = scenario_codebook(s);
  const auto planes = sweep_planes(s, cb);
  const GridSpec grid = scenario_grid(s, cb, planes.front());
  const Image image = form_image(cube, s, grid, threads(c), assume_perturbation);
  const ImageMetrics metrics = compute_metrics(image);
  const auto hash = scenario_hash(s);
  save_binary(out_path(c, "image.bin"), [&](std::ostream& os) { write_image(os, image, hash); });
  if (pgm) save_binary(out_path(c, "image.pgm"), [&](std::ostream& os) { write_image_pgm(os, image); });
  if (csv) save_binary(out_path(c, "image.csv"), [&](std::ostream& os) { write_image_csv(os, image); });
  save_json(out_path(c, "metrics.json"), metrics_json(s, image, metrics));
  return kOk;
}

struct StudyArgs {
  std::string name;
  std::size_t sweeps = 16;
  std::size_t trials = 1;
  std::size_t draws = 8;
  std::vector<double> values;
};

int cmd_study(const Common& c, const StudyArgs& a) {
  const Scenario s = load(c);
  StudyOptions o;
  o.threads = threads(c);
  StudyTable table;
  if (a.name == "sweep-convergence") {
    table = sweep_convergence_study(s, a.sweeps, a.trials, o);
  } else if (a.name == "module-size") {
    std::vector<std::size_t> counts;
    for (double v : a.values.empty() ? std::vector<double>{3, 5, 9, 13, 17} : a.values) {
      counts.push_back(static_cast<std::size_t>(v));
    }
    table = module_size_study(s, counts, o);
  } else if (a.name == "periodicity") {
    table = periodicity_study(s, a.values.empty() ? std::vector<double>{2.0, 1.0, 0.5} : a.values, o);
  } else if (a.name == "near-field") {
    table = near_field_study(s, a.values.empty() ? std::vector<double>{20, 15, 10, 5} : a.values, o);
  } else if (a.name == "gamma") {
    table = gamma_study(s, a.draws, o);
  } else {
    throw ValidationError("unknown study '" + a.name + "'");
  }
  table.notes.insert(table.notes.begin(), "scenario " + hex64(scenario_hash(s)));
  save_file(out_path(c, a.name + ".csv"), table.to_csv());
  std::cout << table.to_csv();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stroboscopic radar imaging through a static periodic reflector"};
  app.require_subcommand(1);

  Common design_c, sim_c, image_c, study_c;
  auto* design = app.add_subcommand("design", "Design the reflection plane and report it");
  add_common(design, design_c);

  bool double_precision = false;
  auto* sim = app.add_subcommand("simulate", "Synthesize the echo cube");
  add_common(sim, sim_c);
  sim->add_flag("--complex128", double_precision, "Store samples as complex128");

  std::string cube_path, cache_dir;
  bool assume = false, pgm = false, csv = false;
  auto* image = app.add_subcommand("image", "Back-project a cube and measure the image");
  add_common(image, image_c);
  image->add_option("--cube", cube_path, "Echo cube to image (simulated when absent)");
  image->add_option("--cache", cache_dir, "Directory of cubes keyed by acquisition hash");
  image->add_flag("--assume-perturbation", assume, "Image with the perturbed geometry");
  image->add_flag("--pgm", pgm, "Also write a dB-scaled PGM");
  image->add_flag("--csv", csv, "Also write the magnitude as CSV");

  StudyArgs study_args;
  auto* study = app.add_subcommand("study", "Parameter sweep with a metrics table");
  add_common(study, study_c);
  study->add_option("name", study_args.name, "sweep-convergence | module-size | periodicity | near-field | gamma")
      ->required();
  study->add_option("--sweeps", study_args.sweeps, "Largest S for sweep-convergence");
  study->add_option("--trials", study_args.trials, "Seeds averaged for sweep-convergence");
  study->add_option("--draws", study_args.draws, "γ draws for the gamma study");
  study->add_option("--values", study_args.values, "Study points (|Θ_o|, Λ or r_y)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*design) return cmd_design(design_c);
    if (*sim) return cmd_simulate(sim_c, double_precision);
    if (*image) return cmd_image(image_c, cube_path, cache_dir, assume, pgm, csv);
    if (*study) return cmd_study(study_c, study_args);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kValidation;
  } catch (const DesignError& e) {
    std::cerr << "design infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
