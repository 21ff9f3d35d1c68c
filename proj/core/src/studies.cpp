#include "strobo/studies.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace strobo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double db(double ratio) { return 10 * std::log10(ratio); }

Vec2 first_target(const Scenario& s) {
  if (s.targets.empty()) throw ValidationError("study needs at least one target");
  return s.targets.front().position;
}

RunResult run(const Scenario& s, const StudyOptions& options) {
  RunOptions o;
  o.threads = options.threads;
  return run_pipeline(s, o);
}

}  // namespace

std::size_t StudyTable::column(const std::string& col) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == col) return i;
  }
  throw DomainError("study table '" + name + "' has no column '" + col + "'");
}

double StudyTable::at(std::size_t row, const std::string& col) const {
  return rows.at(row).at(column(col));
}

std::vector<double> StudyTable::values(const std::string& col) const {
  const std::size_t c = column(col);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

std::string StudyTable::to_csv() const {
  std::ostringstream os;
  for (const auto& n : notes) os << "# " << n << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n' << std::setprecision(10);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      if (std::isnan(r[i])) {
        os << "nan";
      } else {
        os << r[i];
      }
    }
    os << '\n';
  }
  return os.str();
}

StudyTable sweep_convergence_study(const Scenario& s, std::size_t max_sweeps, std::size_t trials,
                                   const StudyOptions& options) {
  if (max_sweeps == 0 || trials == 0) throw ValidationError("sweeps and trials must be positive");
  const Vec2 target = first_target(s);

  Scenario lens = s;
  lens.plane.mode = PlaneMode::lens;
  lens.sweeps = 1;
  lens.gamma_policy = GammaPolicy::fixed;
  const RunResult floor = run(lens, options);
  if (!floor.metrics.widths_valid) throw DomainError("lens image has no measurable mainlobe");
  const double ox = 2 * floor.metrics.width.x;
  const double oy = 2 * floor.metrics.width.y;
  const double floor_db = db(islr(floor.image, target, ox, oy));

  std::vector<std::vector<double>> per_trial(max_sweeps);
  for (std::size_t t = 0; t < trials; ++t) {
    Scenario sc = s;
    sc.gamma_policy = GammaPolicy::random;
    sc.sweeps = max_sweeps;
    sc.seed = s.seed + t;
    RunOptions o;
    o.threads = options.threads;
    o.grid = floor.grid;
    o.per_sweep_images = true;
    const RunResult r = run_pipeline(sc, o);
    Image acc = r.sweep_images.front();
    for (std::size_t k = 0; k < r.sweep_images.size(); ++k) {
      if (k > 0) {
        const auto& v = r.sweep_images[k].values;
        for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += v[i];
      }
      per_trial[k].push_back(db(islr(acc, target, ox, oy)));
    }
  }

  StudyTable table;
  table.name = "sweep-convergence";
  table.columns = {"sweeps", "islr_db", "islr_db_min", "islr_db_max", "lens_floor_db"};
  for (std::size_t k = 0; k < max_sweeps; ++k) {
    const auto& v = per_trial[k];
    double sum = 0.0, lo = v.front(), hi = v.front();
    for (double x : v) {
      sum += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    table.rows.push_back({static_cast<double>(k + 1), sum / static_cast<double>(v.size()), lo, hi,
                          floor_db});
  }
  std::ostringstream note;
  note << "omega " << ox << " x " << oy << " m, trials " << trials;
  table.notes.push_back(note.str());
  return table;
}

StudyTable module_size_study(const Scenario& s, const std::vector<std::size_t>& counts,
                             const StudyOptions& options) {
  const Vec2 target = first_target(s);
  StudyTable table;
  table.name = "module-size";
  table.columns = {"reflection_count", "module_atoms", "max_module_atoms", "compliant",
                   "peak_x",           "peak_y",       "width_x",          "width_y",
                   "displacement",     "highest_sidelobe_db"};
  for (std::size_t count : counts) {
    Scenario sc = s;
    sc.plane.reflection_count = count;
    const RunResult r = run(sc, options);
    const PlaneDesign& p = r.planes.front();
    const bool ok = r.metrics.widths_valid;
    table.rows.push_back({static_cast<double>(count), static_cast<double>(p.step.module_atoms),
                          static_cast<double>(p.step.max_module_atoms),
                          p.step.compliant ? 1.0 : 0.0, r.metrics.peak.x, r.metrics.peak.y,
                          ok ? r.metrics.width.x : kNaN, ok ? r.metrics.width.y : kNaN,
                          (r.metrics.peak - target).norm(), r.metrics.highest_sidelobe_db});
  }
  return table;
}

StudyTable periodicity_study(const Scenario& s, const std::vector<double>& periods,
                             const StudyOptions& options) {
  StudyTable table;
  table.name = "periodicity";
  table.columns = {"period_m", "effective_aperture_m", "width_x", "width_y",
                   "highest_sidelobe_db", "islr_db"};
  const double aperture = effective_aperture(s.scene, s.codebook.center, s.codebook.span);
  for (double period : periods) {
    Scenario sc = s;
    sc.plane.period = period;
    const RunResult r = run(sc, options);
    const bool ok = r.metrics.widths_valid;
    table.rows.push_back({period, aperture, ok ? r.metrics.width.x : kNaN,
                          ok ? r.metrics.width.y : kNaN, r.metrics.highest_sidelobe_db,
                          ok ? db(r.metrics.islr) : kNaN});
  }
  return table;
}

StudyTable near_field_study(const Scenario& s, const std::vector<double>& heights,
                            const StudyOptions& options) {
  StudyTable table;
  table.name = "near-field";
  table.columns = {"r_y",     "snapshots", "width_x", "width_y",
                   "bound_x", "bound_y",   "dk_x",    "dk_y"};
  for (double ry : heights) {
    Scenario sc = s;
    sc.scene.roi_center.y = ry;
    Target t = s.targets.empty() ? Target{} : s.targets.front();
    t.position = sc.scene.roi_center;
    sc.targets = {t};
    sc.validate();
    const RunResult r = run(sc, options);
    const auto cov = coverage(t.position,
                              illuminated_atom_sets(sc.scene, sc.source, r.planes.front(),
                                                    r.codebook, 1, t.position,
                                                    -std::numeric_limits<double>::infinity()),
                              sc.source.carrier, sc.source.bandwidth, CoverageOptions{});
    const ResolutionBounds b = resolution_bounds(cov);
    const bool ok = r.metrics.widths_valid;
    table.rows.push_back({ry, static_cast<double>(r.codebook.angles.size()),
                          ok ? r.metrics.width.x : kNaN, ok ? r.metrics.width.y : kNaN, b.x, b.y,
                          cov.extent_x(), cov.extent_y()});
  }
  return table;
}

StudyTable gamma_study(const Scenario& s, std::size_t draws, const StudyOptions& options) {
  if (draws == 0) throw ValidationError("draws must be positive");
  const Vec2 target = first_target(s);
  Scenario sc = s;
  sc.gamma_policy = GammaPolicy::random;
  sc.sweeps = draws;
  RunOptions o;
  o.threads = options.threads;
  o.per_sweep_images = true;
  const RunResult r = run_pipeline(sc, o);
  const auto gammas = sweep_gammas(sc);

  // One Ω for every image so the ISLR values compare.
  const Widths omega{2 * r.metrics.width.x, 2 * r.metrics.width.y};
  if (!r.metrics.widths_valid) throw DomainError("combined image has no measurable mainlobe");

  StudyTable table;
  table.name = "gamma";
  table.columns = {"draw", "gamma_rad", "peak_value", "islr_db"};
  for (std::size_t k = 0; k < draws; ++k) {
    const Image& img = r.sweep_images[k];
    const Peak p = local_peak(img, target);
    table.rows.push_back({static_cast<double>(k), gammas[k], p.value,
                          db(islr(img, target, omega.x, omega.y))});
  }
  const Peak p = local_peak(r.image, target);
  table.rows.push_back({static_cast<double>(draws), kNaN, p.value,
                        db(islr(r.image, target, omega.x, omega.y))});
  table.notes.push_back("last row: coherent sum of all draws");
  return table;
}

}  // namespace strobo
