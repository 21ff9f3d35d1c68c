#include "strobo/tomography.hpp"

#include <algorithm>
#include <limits>

#include "strobo/signal.hpp"

namespace strobo {

namespace {

WavenumberCoverage empty_coverage(double bin) {
  WavenumberCoverage c;
  c.bin = bin;
  const double inf = std::numeric_limits<double>::infinity();
  c.kx_min = c.ky_min = c.k_min = inf;
  c.kx_max = c.ky_max = c.k_max = -inf;
  return c;
}

}  // namespace

Vec2 pair_wavevector(Vec2 atom_n, Vec2 atom_m, Vec2 r, double frequency) {
  const Vec2 a = r - atom_n, b = r - atom_m;
  if (a.norm() == 0.0 || b.norm() == 0.0) throw DomainError("target coincides with an atom");
  return (unit(a) + unit(b)) * (2 * kPi * frequency / kSpeedOfLight);
}

double WavenumberCoverage::occupancy() const {
  if (bins.empty()) return 0.0;
  std::int64_t x0 = bins.front().first, x1 = x0, y0 = bins.front().second, y1 = y0;
  for (const auto& [bx, by] : bins) {
    x0 = std::min(x0, bx);
    x1 = std::max(x1, bx);
    y0 = std::min(y0, by);
    y1 = std::max(y1, by);
  }
  const double box = static_cast<double>(x1 - x0 + 1) * static_cast<double>(y1 - y0 + 1);
  return static_cast<double>(bins.size()) / box;
}

Vec2 WavenumberCoverage::bin_center(std::size_t k) const {
  return {(static_cast<double>(bins[k].first) + 0.5) * bin,
          (static_cast<double>(bins[k].second) + 0.5) * bin};
}

namespace {

void compact(std::vector<std::pair<std::int64_t, std::int64_t>>& bins) {
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
}

}  // namespace

WavenumberCoverage coverage(Vec2 r, const std::vector<std::vector<Vec2>>& atom_sets,
                            double carrier, double bandwidth, const CoverageOptions& options) {
  if (!(options.bin > 0)) throw DomainError("coverage bin must be > 0");
  WavenumberCoverage cov = empty_coverage(options.bin);
  const std::size_t nf = std::max<std::size_t>(options.frequencies, 1);
  std::vector<double> freqs(nf, carrier);
  if (nf > 1) {
    for (std::size_t q = 0; q < nf; ++q) {
      freqs[q] = carrier - bandwidth / 2 + bandwidth * static_cast<double>(q) / (nf - 1);
    }
  }
  for (const auto& set : atom_sets) {
    if (set.empty()) throw DomainError("coverage: empty atom set");
    std::vector<Vec2> dirs(set.size());
    for (std::size_t n = 0; n < set.size(); ++n) {
      const Vec2 a = r - set[n];
      if (a.norm() == 0.0) throw DomainError("target coincides with an atom");
      dirs[n] = unit(a);
    }
    auto add = [&](std::size_t n, std::size_t m) {
      const Vec2 sum = dirs[n] + dirs[m];
      for (double f : freqs) {
        const Vec2 k = sum * (2 * kPi * f / kSpeedOfLight);
        cov.kx_min = std::min(cov.kx_min, k.x);
        cov.kx_max = std::max(cov.kx_max, k.x);
        cov.ky_min = std::min(cov.ky_min, k.y);
        cov.ky_max = std::max(cov.ky_max, k.y);
        const double mag = k.norm();
        cov.k_min = std::min(cov.k_min, mag);
        cov.k_max = std::max(cov.k_max, mag);
        cov.bins.emplace_back(static_cast<std::int64_t>(std::floor(k.x / options.bin)),
                              static_cast<std::int64_t>(std::floor(k.y / options.bin)));
        ++cov.samples;
      }
    };
    const std::size_t count = set.size();
    if (options.monostatic_only) {
      for (std::size_t n = 0; n < count; ++n) add(n, n);
    } else if (options.all_pairs) {
      for (std::size_t n = 0; n < count; ++n) {
        for (std::size_t m = n; m < count; ++m) add(n, m);
      }
    } else {
      for (std::size_t sum = 0; sum + 1 < 2 * count; ++sum) add(sum / 2, sum - sum / 2);
    }
    if (cov.bins.size() > (std::size_t{1} << 21)) compact(cov.bins);
  }
  compact(cov.bins);
  if (cov.samples == 0) cov.diagnostic = "no atom sets supplied";
  return cov;
}

WavenumberCoverage coverage_union(const WavenumberCoverage& a, const WavenumberCoverage& b) {
  if (a.bin != b.bin) throw DomainError("coverage_union: bin sizes differ");
  WavenumberCoverage out = empty_coverage(a.bin);
  out.bins.reserve(a.bins.size() + b.bins.size());
  std::set_union(a.bins.begin(), a.bins.end(), b.bins.begin(), b.bins.end(),
                 std::back_inserter(out.bins));
  for (const auto* c : {&a, &b}) {
    if (c->empty()) continue;
    out.kx_min = std::min(out.kx_min, c->kx_min);
    out.kx_max = std::max(out.kx_max, c->kx_max);
    out.ky_min = std::min(out.ky_min, c->ky_min);
    out.ky_max = std::max(out.ky_max, c->ky_max);
    out.k_min = std::min(out.k_min, c->k_min);
    out.k_max = std::max(out.k_max, c->k_max);
    out.samples += c->samples;
  }
  return out;
}

ResolutionBounds resolution_bounds(const WavenumberCoverage& cov) {
  ResolutionBounds b;
  const double inf = std::numeric_limits<double>::infinity();
  if (cov.empty()) {
    b.x = b.y = b.range = inf;
    b.diagnostic = "empty coverage";
    return b;
  }
  auto bound = [&](double extent, const char* axis) {
    if (extent > 0) return 2 * kPi / extent;
    b.diagnostic += std::string(b.diagnostic.empty() ? "" : "; ") + "zero extent along " + axis;
    return inf;
  };
  b.x = bound(cov.extent_x(), "x");
  b.y = bound(cov.extent_y(), "y");
  b.range = bound(cov.k_max - cov.k_min, "|k|");
  return b;
}

std::vector<std::vector<Vec2>> illuminated_atom_sets(const SceneGeometry& scene,
                                                     const SourceConfig& cfg,
                                                     const PlaneDesign& plane,
                                                     const TxCodebook& codebook,
                                                     std::size_t sweeps, Vec2 r,
                                                     double gain_floor_db) {
  struct Entry {
    std::vector<Vec2> atoms;
    double gain;
  };
  std::vector<Entry> entries;
  double best = 0.0;
  for (std::size_t s = 0; s < std::max<std::size_t>(sweeps, 1); ++s) {
    for (std::size_t k = 0; k < codebook.size(); ++k) {
      const long l = codebook.snapshot_of(s, k);
      const Pose pose = pose_at(scene, l);
      const IlluminatedSet set = illuminated_set(cfg, pose, plane.lattice, codebook.angles[k]);
      Entry e;
      for (long m = set.first; m <= set.last(); ++m) {
        e.atoms.push_back(Vec2{plane.x(m), 0.0} - pose.frame_offset);
      }
      e.gain = 0.0;
      if (std::isfinite(gain_floor_db)) {
        const auto w = taper_weights(Taper::uniform, set.count);
        e.gain = std::abs(array_factor(plane, set, pose, codebook.angles[k], r,
                                       ArrayModel::exact, w));
        best = std::max(best, e.gain);
      }
      entries.push_back(std::move(e));
    }
  }
  std::vector<std::vector<Vec2>> out;
  const double floor = best * std::pow(10.0, gain_floor_db / 20.0);
  for (auto& e : entries) {
    if (!std::isfinite(gain_floor_db) || e.gain >= floor) out.push_back(std::move(e.atoms));
  }
  return out;
}

std::vector<double> focusing_phases(Vec2 source, Vec2 r, const std::vector<Vec2>& atoms,
                                    double wavenumber) {
  std::vector<double> out(atoms.size());
  for (std::size_t n = 0; n < atoms.size(); ++n) {
    out[n] = wavenumber * ((atoms[n] - source).norm() + (r - atoms[n]).norm());
  }
  return out;
}

}  // namespace strobo
