#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strobo/pipeline.hpp"

namespace strobo {

/// Named numeric columns, one row per study point. Missing values are NaN.
struct StudyTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;

  std::size_t column(const std::string& col) const;
  double at(std::size_t row, const std::string& col) const;
  std::vector<double> values(const std::string& col) const;
  std::string to_csv() const;
};

struct StudyOptions {
  unsigned threads = 1;
};

/// Coherent sum of the first S sweeps, S = 1..max_sweeps, each sweep over a plane
/// with its own random γ. ISLR is taken in a fixed Ω of twice the lens-mode
/// widths around the first target and averaged (in dB) over `trials` seeds.
StudyTable sweep_convergence_study(const Scenario& s, std::size_t max_sweeps, std::size_t trials,
                                   const StudyOptions& options = {});

/// One run per |Θ_o|, everything else fixed. Displacement is the distance of
/// the image peak from the first target.
StudyTable module_size_study(const Scenario& s, const std::vector<std::size_t>& counts,
                             const StudyOptions& options = {});

StudyTable periodicity_study(const Scenario& s, const std::vector<double>& periods,
                             const StudyOptions& options = {});

/// Moves the ROI (and a single target at its centre) to each height r_y.
StudyTable near_field_study(const Scenario& s, const std::vector<double>& heights,
                            const StudyOptions& options = {});

/// Single-sweep images for `draws` random γ and their coherent sum (last row).
StudyTable gamma_study(const Scenario& s, std::size_t draws, const StudyOptions& options = {});

}  // namespace strobo
