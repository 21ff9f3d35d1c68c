#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "strobo/imaging.hpp"
#include "strobo/tomography.hpp"

namespace strobo {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Every binary format below is a "key: value" text header terminated by a line
// reading "end_header", followed by a little-endian payload of declared length.

void write_plane(std::ostream& os, const PlaneDesign& plane, std::uint64_t scenario_hash);
PlaneDesign read_plane(std::istream& is, std::uint64_t* scenario_hash = nullptr);

enum class SamplePrecision { complex64, complex128 };

void write_cube(std::ostream& os, const EchoCube& cube, std::uint64_t scenario_hash,
                SamplePrecision precision = SamplePrecision::complex64);
EchoCube read_cube(std::istream& is, std::uint64_t* scenario_hash = nullptr);

void write_image(std::ostream& os, const Image& image, std::uint64_t scenario_hash);
Image read_image(std::istream& is, std::uint64_t* scenario_hash = nullptr);

/// Magnitude grid as CSV, one row per y index (first row at the smallest y).
void write_image_csv(std::ostream& os, const Image& image);

/// 8-bit binary PGM of 20·log10|I| over `dynamic_range_db`, top row = largest y.
void write_image_pgm(std::ostream& os, const Image& image, double dynamic_range_db = 40.0);

/// Bin centres as CSV plus a summary comment block.
void write_coverage_csv(std::ostream& os, const WavenumberCoverage& cov,
                        const ResolutionBounds& bounds);

// File helpers that throw FormatError with the path on failure.
void save_file(const std::string& path, const std::string& bytes);
std::string load_file(const std::string& path);

}  // namespace strobo
