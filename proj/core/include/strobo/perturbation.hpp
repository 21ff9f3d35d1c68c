#pragma once

#include <cstdint>
#include <vector>

#include "strobo/imaging.hpp"

namespace strobo {

struct PerturbationSpec {
  double epsilon = 0.0;  // error on D [m]
  double beta = 0.0;     // trajectory tilt [rad]

  bool is_identity() const { return epsilon == 0.0 && beta == 0.0; }
  void validate() const;
};

/// True pose at snapshot ℓ: source and ROI both displaced by the perturbation.
Pose perturbed_pose(const SceneGeometry& scene, const PerturbationSpec& spec, long snapshot);

/// Exact beam-centre distances under a perturbation.
PathLengths perturbed_path_lengths(const SceneGeometry& scene, const PerturbationSpec& spec,
                                   double theta_i, Vec2 x, long snapshot);

enum class PerturbationKind { epsilon, beta };

struct DistanceFactors {
  double incidence = 0.0;   // dD_i / dparam
  double reflection = 0.0;  // dD_o / dparam
  double total() const { return incidence + reflection; }
};

/// First-order factors obtained by differentiating the exact perturbed
/// geometry at zero (ξ for ε, ζ for β).
DistanceFactors taylor_distance_factors(const SceneGeometry& scene, double theta_i, Vec2 x,
                                        long snapshot, PerturbationKind kind);

/// Simplified closed forms for the same quantities, evaluated with x
/// measured from the source foot at ℓ = 0. Kept for side-by-side comparison.
DistanceFactors printed_distance_factors(const SceneGeometry& scene, double theta_i, Vec2 x,
                                         long snapshot, PerturbationKind kind);

/// First-order distance error Δ_ℓ = (ξ_i + ξ_o)ε + (ζ_i + ζ_o)β.
double first_order_error(const SceneGeometry& scene, const PerturbationSpec& spec,
                         double theta_i, Vec2 x, long snapshot);

struct DegradedPrediction {
  std::vector<double> error;     // Δ_ℓ [m]
  std::vector<cdouble> weights;  // g(2Δ_ℓ/c)·exp(−j4πΔ_ℓ/λ0)
  cdouble sum;                   // Σ_ℓ weights (unit η_ℓ)
  bool first_order_ok = true;    // max |Δ_ℓ| below 10 % of a range cell
};

DegradedPrediction predicted_degraded_image(const SceneGeometry& scene, const SourceConfig& cfg,
                                            const TxCodebook& codebook,
                                            const PerturbationSpec& spec, Vec2 target,
                                            std::size_t sweeps = 1);

/// Uniform draws of γ in [0, 2π) from a seed.
std::vector<double> draw_gammas(std::uint64_t seed, std::size_t count);

struct GammaStudyConfig {
  PlaneRequest plane;  // γ is overwritten per draw
  GridSpec grid;
  SynthesisOptions synthesis;
  ImagingOptions imaging;
  double oversampling = 4.0;
  std::optional<Widths> omega;
};

struct GammaStudy {
  std::vector<double> gammas;
  std::vector<Image> images;  // draw s imaged from sweep s
  std::vector<ImageMetrics> metrics;
  Image combined;
  ImageMetrics combined_metrics;
  double peak_spread = 0.0;  // (max − min)/mean of single-image peak values
  double islr_spread = 0.0;  // max − min of single-image ISLR [dB]
};

/// Sweep s is acquired over a plane with γ = gammas[s]; the per-sweep images are
/// then summed coherently.
GammaStudy random_illumination_study(const SceneGeometry& scene, const SourceConfig& cfg,
                                     const TxCodebook& codebook, const TargetSet& targets,
                                     const std::vector<double>& gammas,
                                     const GammaStudyConfig& config);

}  // namespace strobo
