#include "strobo/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace strobo {

namespace {

using Header = std::map<std::string, std::string>;

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    U out = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) {
      out = static_cast<U>((out << 8) | ((v >> (8 * b)) & 0xFF));
    }
    return out;
  }
}

void put_f64(std::ostream& os, double v) {
  const auto u = to_little(std::bit_cast<std::uint64_t>(v));
  os.write(reinterpret_cast<const char*>(&u), sizeof u);
}

void put_f32(std::ostream& os, float v) {
  const auto u = to_little(std::bit_cast<std::uint32_t>(v));
  os.write(reinterpret_cast<const char*>(&u), sizeof u);
}

double get_f64(std::istream& is) {
  std::uint64_t u = 0;
  if (!is.read(reinterpret_cast<char*>(&u), sizeof u)) throw FormatError("truncated payload");
  return std::bit_cast<double>(to_little(u));
}

float get_f32(std::istream& is) {
  std::uint32_t u = 0;
  if (!is.read(reinterpret_cast<char*>(&u), sizeof u)) throw FormatError("truncated payload");
  return std::bit_cast<float>(to_little(u));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void expect_magic(std::istream& is, const std::string& magic) {
  std::string line;
  if (!std::getline(is, line) || line != magic) {
    throw FormatError("expected '" + magic + "' header");
  }
}

// Reads "key: value" lines up to end_header. Repeated keys accumulate with '\n'.
Header read_header(std::istream& is) {
  Header h;
  std::string line;
  while (std::getline(is, line)) {
    if (line == "end_header") return h;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw FormatError("malformed header line: " + line);
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    if (!value.empty() && value.front() == ' ') value.erase(0, 1);
    auto [it, fresh] = h.emplace(key, value);
    if (!fresh) it->second += "\n" + value;
  }
  throw FormatError("missing end_header");
}

const std::string& field(const Header& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw FormatError("header lacks '" + key + "'");
  return it->second;
}

double num(const Header& h, const std::string& key) {
  try {
    return std::stod(field(h, key));
  } catch (const std::logic_error&) {
    throw FormatError("header field '" + key + "' is not a number");
  }
}

long inum(const Header& h, const std::string& key) {
  try {
    return std::stol(field(h, key));
  } catch (const std::logic_error&) {
    throw FormatError("header field '" + key + "' is not an integer");
  }
}

std::uint64_t hash_field(const Header& h) {
  const auto it = h.find("scenario_hash");
  if (it == h.end()) return 0;
  return std::stoull(it->second, nullptr, 16);
}

std::vector<double> num_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(std::stod(tok));
  return out;
}

void write_payload(std::ostream& os, const std::vector<cdouble>& data, SamplePrecision p) {
  for (const auto& v : data) {
    if (p == SamplePrecision::complex64) {
      put_f32(os, static_cast<float>(v.real()));
      put_f32(os, static_cast<float>(v.imag()));
    } else {
      put_f64(os, v.real());
      put_f64(os, v.imag());
    }
  }
}

std::vector<cdouble> read_payload(std::istream& is, std::size_t n, SamplePrecision p) {
  std::vector<cdouble> out(n);
  for (auto& v : out) {
    if (p == SamplePrecision::complex64) {
      const double re = get_f32(is);
      v = {re, static_cast<double>(get_f32(is))};
    } else {
      const double re = get_f64(is);
      v = {re, get_f64(is)};
    }
  }
  return out;
}

SamplePrecision precision_of(const std::string& s) {
  if (s == "complex64") return SamplePrecision::complex64;
  if (s == "complex128") return SamplePrecision::complex128;
  throw FormatError("unknown sample precision '" + s + "'");
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void write_plane(std::ostream& os, const PlaneDesign& p, std::uint64_t scenario_hash) {
  os << "strobo-plane 1\n";
  os << "scenario_hash: " << hex64(scenario_hash) << "\n";
  os << "mode: " << to_string(p.mode) << "\n";
  os << "phase_rule: " << (p.phase_rule == PhaseRule::integrated ? "integrated" : "literal") << "\n";
  os << "pitch_m: " << fmt(p.lattice.pitch) << "\n";
  os << "origin_x_m: " << fmt(p.lattice.origin_x) << "\n";
  os << "first_atom: " << p.lattice.first << "\n";
  os << "atom_count: " << p.lattice.count << "\n";
  os << "wavenumber_rad_per_m: " << fmt(p.wavenumber) << "\n";
  os << "period_m: " << fmt(p.period) << "\n";
  os << "gamma_rad: " << fmt(p.gamma) << "\n";
  os << "center_i_rad: " << fmt(p.center_i) << "\n";
  os << "center_o_rad: " << fmt(p.reflection.center) << "\n";
  os << "span_o_rad: " << fmt(p.reflection.span) << "\n";
  os << "step_o_rad: " << fmt(p.step.step) << "\n";
  os << "module_atoms: " << fmt(p.step.module_atoms) << "\n";
  os << "max_module_atoms: " << fmt(p.step.max_module_atoms) << "\n";
  os << "reflection_angles_rad:";
  for (double a : p.reflection_angles) os << ' ' << fmt(a);
  os << "\n";
  os << "mirror_slope_rad: " << fmt(p.mirror_slope) << "\n";
  os << "lens_target_m: " << fmt(p.lens_target.x) << ' ' << fmt(p.lens_target.y) << "\n";
  os << "payload: float64le " << p.phase.size() << "\n";
  os << "end_header\n";
  for (double v : p.phase) put_f64(os, v);
}

PlaneDesign read_plane(std::istream& is, std::uint64_t* scenario_hash) {
  expect_magic(is, "strobo-plane 1");
  const Header h = read_header(is);
  PlaneDesign p;
  p.mode = plane_mode_from_string(field(h, "mode"));
  p.phase_rule = field(h, "phase_rule") == "literal" ? PhaseRule::literal : PhaseRule::integrated;
  p.lattice.pitch = num(h, "pitch_m");
  p.lattice.origin_x = num(h, "origin_x_m");
  p.lattice.first = inum(h, "first_atom");
  p.lattice.count = inum(h, "atom_count");
  p.wavenumber = num(h, "wavenumber_rad_per_m");
  p.period = num(h, "period_m");
  p.gamma = num(h, "gamma_rad");
  p.center_i = num(h, "center_i_rad");
  p.reflection.center = num(h, "center_o_rad");
  p.reflection.span = num(h, "span_o_rad");
  p.step.step = num(h, "step_o_rad");
  p.step.module_atoms = num(h, "module_atoms");
  p.step.max_module_atoms = num(h, "max_module_atoms");
  p.step.compliant = p.step.module_atoms <= p.step.max_module_atoms;
  p.reflection_angles = num_list(field(h, "reflection_angles_rad"));
  p.mirror_slope = num(h, "mirror_slope_rad");
  const auto lt = num_list(field(h, "lens_target_m"));
  if (lt.size() != 2) throw FormatError("lens_target_m needs two values");
  p.lens_target = {lt[0], lt[1]};
  std::istringstream pl(field(h, "payload"));
  std::string kind;
  std::size_t n = 0;
  pl >> kind >> n;
  if (kind != "float64le" || n != static_cast<std::size_t>(p.lattice.count)) {
    throw FormatError("plane payload does not match atom_count");
  }
  p.phase.resize(n);
  for (auto& v : p.phase) v = get_f64(is);
  if (p.mode == PlaneMode::stroboscopic) {
    if (p.reflection_angles.empty()) throw FormatError("stroboscopic plane lacks Θ_o");
    std::vector<double> offsets(p.reflection_angles);
    for (auto& a : offsets) a -= p.center_i;
    p.bin.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = p.lattice.x(p.lattice.first + static_cast<long>(k));
      p.bin[k] = quantize_index(continuous_reflection_offset(x, p.period, p.center_i,
                                                             p.reflection.center,
                                                             p.reflection.span, p.gamma),
                                offsets);
    }
  }
  if (scenario_hash) *scenario_hash = hash_field(h);
  return p;
}

void write_cube(std::ostream& os, const EchoCube& c, std::uint64_t scenario_hash,
                SamplePrecision precision) {
  os << "strobo-cube 1\n";
  os << "scenario_hash: " << hex64(scenario_hash) << "\n";
  os << "snapshots: " << c.snapshots() << "\n";
  os << "samples: " << c.samples() << "\n";
  os << "sample_rate_hz: " << fmt(c.waveform.sample_rate) << "\n";
  os << "t_min_s: " << fmt(c.waveform.t_min) << "\n";
  os << "bandwidth_hz: " << fmt(c.waveform.bandwidth) << "\n";
  os << "carrier_hz: " << fmt(c.carrier) << "\n";
  os << "noise: " << (c.noise ? 1 : 0) << "\n";
  os << "noise_power_w: " << fmt(c.noise_power) << "\n";
  os << "seed: " << c.seed << "\n";
  // index sweep theta_i source_x source_y intercept_x first_atom atom_count clipped margin
  for (const auto& m : c.meta) {
    os << "snapshot: " << m.index << ' ' << m.sweep << ' ' << fmt(m.theta_i) << ' '
       << fmt(m.source.x) << ' ' << fmt(m.source.y) << ' ' << fmt(m.intercept_x) << ' '
       << m.first_atom << ' ' << m.atom_count << ' ' << (m.clipped ? 1 : 0) << ' '
       << fmt(m.narrowband_margin) << "\n";
  }
  os << "payload: " << (precision == SamplePrecision::complex64 ? "complex64" : "complex128")
     << "le " << c.data.size() << "\n";
  os << "end_header\n";
  write_payload(os, c.data, precision);
}

EchoCube read_cube(std::istream& is, std::uint64_t* scenario_hash) {
  expect_magic(is, "strobo-cube 1");
  const Header h = read_header(is);
  EchoCube c;
  const auto snapshots = static_cast<std::size_t>(inum(h, "snapshots"));
  c.waveform.samples = static_cast<std::size_t>(inum(h, "samples"));
  c.waveform.sample_rate = num(h, "sample_rate_hz");
  c.waveform.t_min = num(h, "t_min_s");
  c.waveform.bandwidth = num(h, "bandwidth_hz");
  c.carrier = num(h, "carrier_hz");
  c.noise = inum(h, "noise") != 0;
  c.noise_power = num(h, "noise_power_w");
  c.seed = std::stoull(field(h, "seed"));
  if (snapshots > 0) {
    std::istringstream rows(field(h, "snapshot"));
    std::string line;
    while (std::getline(rows, line)) {
      std::istringstream ls(line);
      SnapshotInfo m;
      int clipped = 0;
      if (!(ls >> m.index >> m.sweep >> m.theta_i >> m.source.x >> m.source.y >> m.intercept_x >>
            m.first_atom >> m.atom_count >> clipped >> m.narrowband_margin)) {
        throw FormatError("malformed snapshot record: " + line);
      }
      m.clipped = clipped != 0;
      c.meta.push_back(m);
    }
  }
  if (c.meta.size() != snapshots) throw FormatError("snapshot records do not match 'snapshots'");
  std::istringstream pl(field(h, "payload"));
  std::string kind;
  std::size_t n = 0;
  pl >> kind >> n;
  if (kind.size() < 3 || kind.substr(kind.size() - 2) != "le") {
    throw FormatError("payload must be little-endian");
  }
  if (n != snapshots * c.waveform.samples) throw FormatError("payload length mismatch");
  c.data = read_payload(is, n, precision_of(kind.substr(0, kind.size() - 2)));
  if (scenario_hash) *scenario_hash = hash_field(h);
  return c;
}

void write_image(std::ostream& os, const Image& img, std::uint64_t scenario_hash) {
  const auto& g = img.grid;
  os << "strobo-image 1\n";
  os << "scenario_hash: " << hex64(scenario_hash) << "\n";
  os << "origin_m: " << fmt(g.origin.x) << ' ' << fmt(g.origin.y) << "\n";
  os << "pitch_m: " << fmt(g.pitch_x) << ' ' << fmt(g.pitch_y) << "\n";
  os << "size: " << g.nx << ' ' << g.ny << "\n";
  os << "skipped_terms: " << img.skipped << "\n";
  os << "provenance: " << img.provenance << "\n";
  os << "payload: complex64le " << img.values.size() << "\n";
  os << "end_header\n";
  write_payload(os, img.values, SamplePrecision::complex64);
}

Image read_image(std::istream& is, std::uint64_t* scenario_hash) {
  expect_magic(is, "strobo-image 1");
  const Header h = read_header(is);
  Image img;
  const auto o = num_list(field(h, "origin_m"));
  const auto p = num_list(field(h, "pitch_m"));
  const auto s = num_list(field(h, "size"));
  if (o.size() != 2 || p.size() != 2 || s.size() != 2) throw FormatError("malformed grid fields");
  img.grid.origin = {o[0], o[1]};
  img.grid.pitch_x = p[0];
  img.grid.pitch_y = p[1];
  img.grid.nx = static_cast<std::size_t>(s[0]);
  img.grid.ny = static_cast<std::size_t>(s[1]);
  img.skipped = static_cast<std::size_t>(inum(h, "skipped_terms"));
  img.provenance = field(h, "provenance");
  std::istringstream pl(field(h, "payload"));
  std::string kind;
  std::size_t n = 0;
  pl >> kind >> n;
  if (kind != "complex64le" || n != img.grid.size()) throw FormatError("image payload mismatch");
  img.values = read_payload(is, n, SamplePrecision::complex64);
  if (scenario_hash) *scenario_hash = hash_field(h);
  return img;
}

void write_image_csv(std::ostream& os, const Image& img) {
  os << std::setprecision(9);
  for (std::size_t iy = 0; iy < img.grid.ny; ++iy) {
    for (std::size_t ix = 0; ix < img.grid.nx; ++ix) {
      if (ix) os << ',';
      os << std::abs(img.at(ix, iy));
    }
    os << '\n';
  }
}

void write_image_pgm(std::ostream& os, const Image& img, double dynamic_range_db) {
  const auto& g = img.grid;
  double peak = 0.0;
  for (const auto& v : img.values) peak = std::max(peak, std::abs(v));
  os << "P5\n" << g.nx << ' ' << g.ny << "\n255\n";
  for (std::size_t r = 0; r < g.ny; ++r) {
    const std::size_t iy = g.ny - 1 - r;
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      double level = 0.0;
      const double a = std::abs(img.at(ix, iy));
      if (peak > 0 && a > 0) {
        level = 1.0 + 20 * std::log10(a / peak) / dynamic_range_db;
      }
      const auto byte = static_cast<unsigned char>(std::lround(255 * std::clamp(level, 0.0, 1.0)));
      os.put(static_cast<char>(byte));
    }
  }
}

void write_coverage_csv(std::ostream& os, const WavenumberCoverage& cov,
                        const ResolutionBounds& bounds) {
  os << std::setprecision(10);
  os << "# samples=" << cov.samples << " bins=" << cov.bins.size() << " bin_rad_per_m=" << cov.bin
     << "\n";
  os << "# dkx=" << cov.extent_x() << " dky=" << cov.extent_y()
     << " occupancy=" << cov.occupancy() << "\n";
  os << "# delta_x_m=" << bounds.x << " delta_y_m=" << bounds.y << " delta_range_m=" << bounds.range
     << "\n";
  os << "kx,ky\n";
  for (std::size_t k = 0; k < cov.bins.size(); ++k) {
    const Vec2 c = cov.bin_center(k);
    os << c.x << ',' << c.y << '\n';
  }
}

void save_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw FormatError("failed writing '" + path + "'");
}

std::string load_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace strobo
