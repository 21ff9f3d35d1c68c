#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strobo/imaging.hpp"
#include "strobo/perturbation.hpp"

namespace strobo {

struct NoiseSettings {
  bool enabled = false;
  double power_dbm = -87.0;
};

struct SignalSettings {
  double oversampling = 4.0;
  Interpolation interpolation = Interpolation::lanczos;
  ArrayModel array_model = ArrayModel::far_field;
  Taper taper = Taper::uniform;
  double narrowband_factor = 1.0;
};

/// fixed: plane.gamma as given. random: seeded uniform draw per sweep.
/// synchronized: aligned with the first sweep (see synchronized_gamma).
enum class GammaPolicy { fixed, random, synchronized };

/// Everything a run needs. Parsed from JSON with unit-suffixed keys.
struct Scenario {
  SceneGeometry scene;
  SourceConfig source;
  CodebookRequest codebook;
  /// Fixed-beam acquisition: the same angle for every dwell of the schedule.
  std::optional<double> fixed_beam;
  bool fixed_beam_specular = false;  // aim at the specular point for r*
  PlaneRequest plane;
  GammaPolicy gamma_policy = GammaPolicy::fixed;
  TargetSet targets;
  std::size_t sweeps = 1;
  NoiseSettings noise;
  std::optional<double> grid_pitch;  // [m]
  PerturbationSpec perturbation;
  SignalSettings signal;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Parses a scenario document. Throws ValidationError naming the offending
/// field for missing, unknown or ill-typed entries.
Scenario parse_scenario(const std::string& json_text,
                        const std::vector<std::string>& overrides = {});

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

/// Canonical JSON (sorted keys, SI-suffixed units) that parses back to the same scenario.
std::string scenario_to_json(const Scenario& s);

/// FNV-1a 64 of the canonical JSON.
std::uint64_t scenario_hash(const Scenario& s);

/// The reference parameter set: 77 GHz, 500 MHz, 0.5° beam, D = 5 m, v = 20 m/s,
/// Δτ = 50 µs, θ̄_i = 40°, 5° sweep, Λ = 2 m, |Θ_o| = 13, 1 × 1 m ROI at (13.8, 11) m.
std::string paper_defaults_json();
Scenario paper_defaults();

/// Tx codebook implied by the scenario (fixed-beam or swept).
TxCodebook scenario_codebook(const Scenario& s);

}  // namespace strobo
