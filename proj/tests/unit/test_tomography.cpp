#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "strobo/pipeline.hpp"

using namespace strobo;

namespace {

using Bins = std::set<std::pair<std::int64_t, std::int64_t>>;

struct Brute {
  Bins bins;
  double kx_min = 1e300, kx_max = -1e300, ky_min = 1e300, ky_max = -1e300;
};

// Every pair n ≤ n′ at every frequency, straight from the definition.
Brute brute_coverage(Vec2 r, const std::vector<std::vector<Vec2>>& sets, double f0, double B,
                     std::size_t nf, double bin) {
  Brute out;
  for (const auto& set : sets) {
    for (std::size_t n = 0; n < set.size(); ++n) {
      for (std::size_t m = n; m < set.size(); ++m) {
        for (std::size_t q = 0; q < nf; ++q) {
          const double f = f0 - B / 2 + B * static_cast<double>(q) / static_cast<double>(nf - 1);
          const Vec2 k = pair_wavevector(set[n], set[m], r, f);
          out.kx_min = std::min(out.kx_min, k.x);
          out.kx_max = std::max(out.kx_max, k.x);
          out.ky_min = std::min(out.ky_min, k.y);
          out.ky_max = std::max(out.ky_max, k.y);
          out.bins.insert({static_cast<std::int64_t>(std::floor(k.x / bin)),
                           static_cast<std::int64_t>(std::floor(k.y / bin))});
        }
      }
    }
  }
  return out;
}

std::vector<std::vector<Vec2>> reference_sets(const Scenario& s, Vec2 r) {
  const TxCodebook cb = scenario_codebook(s);
  const auto planes = sweep_planes(s, cb);
  return illuminated_atom_sets(s.scene, s.source, planes.front(), cb, 1, r,
                               -std::numeric_limits<double>::infinity());
}

}  // namespace

TEST_CASE("pair wavevector") {
  const Vec2 r{3.0, 4.0};
  const double f = 77e9;
  const Vec2 k = pair_wavevector({0.0, 0.0}, {0.0, 0.0}, r, f);
  CHECK(k.norm() == doctest::Approx(4 * kPi * f / kSpeedOfLight));
  CHECK(k.x / k.y == doctest::Approx(0.75));
  const Vec2 a = pair_wavevector({0.0, 0.0}, {1.0, 0.0}, r, f);
  const Vec2 b = pair_wavevector({1.0, 0.0}, {0.0, 0.0}, r, f);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK_THROWS_AS(pair_wavevector(r, {0.0, 0.0}, r, f), DomainError);
}

TEST_CASE("coverage with all pairs equals the brute-force set") {
  const Scenario s = paper_defaults();
  const Vec2 r = s.scene.roi_center;
  auto sets = reference_sets(s, r);
  sets.resize(3);
  CoverageOptions o;
  o.frequencies = 9;
  o.all_pairs = true;
  const WavenumberCoverage cov = coverage(r, sets, s.source.carrier, s.source.bandwidth, o);
  const Brute ref = brute_coverage(r, sets, s.source.carrier, s.source.bandwidth, 9, o.bin);
  CHECK(Bins(cov.bins.begin(), cov.bins.end()) == ref.bins);
  CHECK(cov.bins.size() == ref.bins.size());
  CHECK(cov.kx_min == doctest::Approx(ref.kx_min));
  CHECK(cov.kx_max == doctest::Approx(ref.kx_max));
  CHECK(cov.ky_min == doctest::Approx(ref.ky_min));
  CHECK(cov.ky_max == doctest::Approx(ref.ky_max));
}

TEST_CASE("representative pairs give the same extents as all pairs") {
  const Scenario s = paper_defaults();
  const Vec2 r = s.scene.roi_center + Vec2{0.3, -0.2};
  const auto sets = reference_sets(s, r);
  CoverageOptions all;
  all.all_pairs = true;
  all.frequencies = 16;
  CoverageOptions rep = all;
  rep.all_pairs = false;
  const auto a = coverage(r, sets, s.source.carrier, s.source.bandwidth, all);
  const auto b = coverage(r, sets, s.source.carrier, s.source.bandwidth, rep);
  CHECK(b.extent_x() == doctest::Approx(a.extent_x()).epsilon(1e-6));
  CHECK(b.extent_y() == doctest::Approx(a.extent_y()).epsilon(1e-6));
  const Bins ba(a.bins.begin(), a.bins.end());
  std::size_t missing = 0;
  for (const auto& k : b.bins) CHECK(ba.count(k) == 1);
  for (const auto& k : a.bins) missing += std::binary_search(b.bins.begin(), b.bins.end(), k) ? 0 : 1;
  CHECK(static_cast<double>(missing) <= 0.01 * static_cast<double>(a.bins.size()));
}

TEST_CASE("monostatic coverage bounds range at c/2B") {
  const Scenario s = paper_defaults();
  const Vec2 r = s.scene.roi_center;
  CoverageOptions o;
  o.monostatic_only = true;
  const auto cov = coverage(r, reference_sets(s, r), s.source.carrier, s.source.bandwidth, o);
  const ResolutionBounds b = resolution_bounds(cov);
  CHECK(b.range == doctest::Approx(kSpeedOfLight / (2 * s.source.bandwidth)).epsilon(1e-9));
}

TEST_CASE("resolution bounds and union") {
  WavenumberCoverage none;
  const ResolutionBounds b = resolution_bounds(none);
  CHECK(std::isinf(b.x));
  CHECK_FALSE(b.diagnostic.empty());

  const Vec2 r{0.0, 5.0};
  CoverageOptions o;
  o.frequencies = 2;
  const auto left = coverage(r, {{{-1.0, 0.0}}}, 77e9, 1e9, o);
  const auto right = coverage(r, {{{1.0, 0.0}}}, 77e9, 1e9, o);
  const auto both = coverage_union(left, right);
  // An atom left of r sees it along +x.
  CHECK(both.kx_min == right.kx_min);
  CHECK(both.kx_max == left.kx_max);
  CHECK(both.samples == left.samples + right.samples);
  CHECK(resolution_bounds(both).x == doctest::Approx(2 * kPi / (left.kx_max - right.kx_min)));
}

TEST_CASE("focusing phases are the two-way path in radians") {
  const std::vector<Vec2> atoms = {{0.0, 0.0}, {0.5, 0.0}};
  const auto p = focusing_phases({0.0, 4.0}, {3.0, 4.0}, atoms, 2.0);
  CHECK(p[0] == doctest::Approx(2.0 * (4.0 + 5.0)));
  CHECK(p[1] == doctest::Approx(2.0 * (std::hypot(0.5, 4.0) + std::hypot(2.5, 4.0))));
}
