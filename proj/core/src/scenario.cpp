#include "strobo/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <set>

#include "json.hpp"
#include "strobo/io.hpp"

namespace strobo {

namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  std::string name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ValidationError("missing required field '" + name(key) + "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ValidationError("field '" + name(key) + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError("field '" + name(key) + "' must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }
  std::optional<double> maybe_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ValidationError("field '" + name(key) + "' must be true/false");
    return v.get<bool>();
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ValidationError("field '" + name(key) + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ValidationError("field '" + name(key) + "' must be a string");
    return v.get<std::string>();
  }

  Vec2 vec2(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ValidationError("field '" + name(key) + "' must be a two-element number array");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  Reader child(const std::string& key) { return Reader(at(key), name(key)); }
  std::optional<Reader> maybe_child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return Reader(j_.at(key), name(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ValidationError("unknown field '" + name(it.key()) + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("override '" + spec + "' must have the form key=value");
  }
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ValidationError("override path '" + path + "' has an empty segment");
    json* next = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(key);
      } catch (const std::logic_error&) {
        throw ValidationError("override path '" + path + "': '" + key + "' is not an index");
      }
      if (idx >= node->size()) throw ValidationError("override path '" + path + "' out of range");
      next = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ValidationError("override path '" + path + "' is not an object");
      next = &(*node)[key];
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    node = next;
    start = dot + 1;
  }
}

Interpolation interpolation_from(const std::string& s) {
  if (s == "lanczos") return Interpolation::lanczos;
  if (s == "linear") return Interpolation::linear;
  throw ValidationError("signal.interpolation must be 'lanczos' or 'linear'");
}

ArrayModel array_model_from(const std::string& s) {
  if (s == "far_field") return ArrayModel::far_field;
  if (s == "exact") return ArrayModel::exact;
  throw ValidationError("signal.array_model must be 'far_field' or 'exact'");
}

Taper taper_from(const std::string& s) {
  if (s == "uniform") return Taper::uniform;
  if (s == "raised_cosine") return Taper::raised_cosine;
  throw ValidationError("signal.taper must be 'uniform' or 'raised_cosine'");
}

Scenario from_json(const json& doc) {
  Scenario s;
  Reader top(doc, "");

  {
    Reader r = top.child("scene");
    auto& g = s.scene;
    g.source_height = r.number("source_height_m");
    g.source_x0 = r.number("source_x0_m", 0.0);
    g.speed = r.number("speed_mps", g.speed);
    g.pri = r.number("pri_us", g.pri * 1e6) * 1e-6;
    g.roi_center = r.vec2("roi_center_m");
    const Vec2 size = r.vec2("roi_size_m");
    g.roi_width = size.x;
    g.roi_depth = size.y;
    g.plane_origin_x = r.number("plane_origin_m", 0.0);
    r.finish();
  }
  {
    Reader r = top.child("source");
    auto& c = s.source;
    c.carrier = r.number("carrier_ghz") * 1e9;
    c.bandwidth = r.number("bandwidth_mhz") * 1e6;
    const bool has_bw = r.has("beamwidth_deg"), has_ap = r.has("aperture_m");
    if (has_bw && has_ap) {
      throw ValidationError("give only one of 'source.beamwidth_deg' and 'source.aperture_m'");
    }
    if (has_bw) {
      c.aperture = SourceConfig::aperture_for_beamwidth(c.carrier,
                                                        deg2rad(r.number("beamwidth_deg")));
    } else if (has_ap) {
      c.aperture = r.number("aperture_m");
    } else {
      c.aperture = SourceConfig::aperture_for_beamwidth(c.carrier, deg2rad(0.5));
    }
    c.pulse_duration = r.number("pulse_us", c.pulse_duration * 1e6) * 1e-6;
    c.tx_power = r.number("tx_power_w", c.tx_power);
    r.finish();
  }
  {
    Reader r = top.child("codebook");
    s.codebook.center = deg2rad(r.number("center_deg"));
    s.codebook.span = deg2rad(r.number("span_deg"));
    if (auto st = r.maybe_number("step_deg")) s.codebook.step = deg2rad(*st);
    s.codebook.allow_aliasing = r.boolean("allow_aliasing", false);
    if (r.has("fixed_beam_deg")) {
      const json& v = r.at("fixed_beam_deg");
      if (v.is_string() && v.get<std::string>() == "specular") {
        s.fixed_beam_specular = true;
      } else if (v.is_number()) {
        s.fixed_beam = deg2rad(v.get<double>());
      } else {
        throw ValidationError("field 'codebook.fixed_beam_deg' must be a number or \"specular\"");
      }
    }
    r.finish();
  }
  {
    Reader r = top.child("plane");
    auto& p = s.plane;
    p.mode = plane_mode_from_string(r.text("mode", ""));
    p.period = r.number("period_m", p.period);
    const auto count = r.unsigned_int("reflection_count", p.reflection_count);
    p.reflection_count = static_cast<std::size_t>(count);
    if (r.has("gamma_rad")) {
      const json& v = r.at("gamma_rad");
      if (v.is_string() && v.get<std::string>() == "random") {
        s.gamma_policy = GammaPolicy::random;
      } else if (v.is_string() && v.get<std::string>() == "synchronized") {
        s.gamma_policy = GammaPolicy::synchronized;
      } else if (v.is_number()) {
        p.gamma = v.get<double>();
      } else {
        throw ValidationError("field 'plane.gamma_rad' must be a number, \"random\" or \"synchronized\"");
      }
    }
    if (auto mm = r.maybe_number("pitch_mm")) p.pitch = *mm * 1e-3;
    if (auto sp = r.maybe_number("span_deg")) p.span = deg2rad(*sp);
    p.mirror_slope = r.number("mirror_slope_rad", 0.0);
    if (r.has("lens_target_m")) p.lens_target = r.vec2("lens_target_m");
    const std::string rule = r.text("phase_rule", "integrated");
    if (rule == "integrated") {
      p.phase_rule = PhaseRule::integrated;
    } else if (rule == "literal") {
      p.phase_rule = PhaseRule::literal;
    } else {
      throw ValidationError("plane.phase_rule must be 'integrated' or 'literal'");
    }
    r.finish();
  }
  {
    const json& t = top.at("targets");
    if (!t.is_array()) throw ValidationError("field 'targets' must be an array");
    for (std::size_t k = 0; k < t.size(); ++k) {
      Reader r(t[k], "targets." + std::to_string(k));
      Target tg;
      tg.position = r.vec2("position_m");
      tg.rcs = r.number("rcs_m2", 1.0);
      tg.phase = r.number("phase_rad", 0.0);
      r.finish();
      s.targets.push_back(tg);
    }
  }
  s.sweeps = static_cast<std::size_t>(top.unsigned_int("sweeps", 1));
  if (auto r = top.maybe_child("noise")) {
    s.noise.enabled = r->boolean("enabled", false);
    s.noise.power_dbm = r->number("power_dbm", s.noise.power_dbm);
    r->finish();
  }
  if (auto r = top.maybe_child("grid")) {
    if (auto mm = r->maybe_number("pitch_mm")) s.grid_pitch = *mm * 1e-3;
    r->finish();
  }
  if (auto r = top.maybe_child("perturbation")) {
    s.perturbation.epsilon = r->number("epsilon_m", 0.0);
    s.perturbation.beta = deg2rad(r->number("beta_deg", 0.0));
    r->finish();
  }
  if (auto r = top.maybe_child("signal")) {
    s.signal.oversampling = r->number("oversampling", s.signal.oversampling);
    s.signal.interpolation = interpolation_from(r->text("interpolation", "lanczos"));
    s.signal.array_model = array_model_from(r->text("array_model", "far_field"));
    s.signal.taper = taper_from(r->text("taper", "uniform"));
    s.signal.narrowband_factor = r->number("narrowband_factor", s.signal.narrowband_factor);
    r->finish();
  }
  s.seed = top.unsigned_int("seed", 1);
  top.finish();
  s.plane.sweeps = s.sweeps;
  s.validate();
  return s;
}

// Strips unit-conversion residue (50e-6 · 1e6 → 50, not 49.999…).
double converted(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

json to_json(const Scenario& s) {
  json j;
  const auto& g = s.scene;
  j["scene"] = {{"source_height_m", g.source_height},
                {"source_x0_m", g.source_x0},
                {"speed_mps", g.speed},
                {"pri_us", converted(g.pri * 1e6)},
                {"roi_center_m", {g.roi_center.x, g.roi_center.y}},
                {"roi_size_m", {g.roi_width, g.roi_depth}},
                {"plane_origin_m", g.plane_origin_x}};
  const auto& c = s.source;
  j["source"] = {{"carrier_ghz", converted(c.carrier * 1e-9)},
                 {"bandwidth_mhz", converted(c.bandwidth * 1e-6)},
                 {"aperture_m", c.aperture},
                 {"pulse_us", converted(c.pulse_duration * 1e6)},
                 {"tx_power_w", c.tx_power}};
  json cb = {{"center_deg", converted(rad2deg(s.codebook.center))},
             {"span_deg", converted(rad2deg(s.codebook.span))},
             {"allow_aliasing", s.codebook.allow_aliasing}};
  if (s.codebook.step) cb["step_deg"] = converted(rad2deg(*s.codebook.step));
  if (s.fixed_beam_specular) {
    cb["fixed_beam_deg"] = "specular";
  } else if (s.fixed_beam) {
    cb["fixed_beam_deg"] = converted(rad2deg(*s.fixed_beam));
  }
  j["codebook"] = cb;
  const auto& p = s.plane;
  json pl = {{"mode", to_string(p.mode)},
             {"period_m", p.period},
             {"reflection_count", p.reflection_count},
             {"mirror_slope_rad", p.mirror_slope},
             {"phase_rule", p.phase_rule == PhaseRule::integrated ? "integrated" : "literal"}};
  if (s.gamma_policy == GammaPolicy::random) {
    pl["gamma_rad"] = "random";
  } else if (s.gamma_policy == GammaPolicy::synchronized) {
    pl["gamma_rad"] = "synchronized";
  } else {
    pl["gamma_rad"] = p.gamma;
  }
  if (p.pitch) pl["pitch_mm"] = converted(*p.pitch * 1e3);
  if (p.span) pl["span_deg"] = converted(rad2deg(*p.span));
  if (p.lens_target) pl["lens_target_m"] = {p.lens_target->x, p.lens_target->y};
  j["plane"] = pl;
  j["targets"] = json::array();
  for (const auto& t : s.targets) {
    j["targets"].push_back({{"position_m", {t.position.x, t.position.y}},
                            {"rcs_m2", t.rcs},
                            {"phase_rad", t.phase}});
  }
  j["sweeps"] = s.sweeps;
  j["noise"] = {{"enabled", s.noise.enabled}, {"power_dbm", s.noise.power_dbm}};
  j["grid"] = json::object();
  if (s.grid_pitch) j["grid"]["pitch_mm"] = converted(*s.grid_pitch * 1e3);
  j["perturbation"] = {{"epsilon_m", s.perturbation.epsilon},
                       {"beta_deg", converted(rad2deg(s.perturbation.beta))}};
  const char* interp = s.signal.interpolation == Interpolation::lanczos ? "lanczos" : "linear";
  const char* model = s.signal.array_model == ArrayModel::far_field ? "far_field" : "exact";
  const char* taper = s.signal.taper == Taper::uniform ? "uniform" : "raised_cosine";
  j["signal"] = {{"oversampling", s.signal.oversampling},
                 {"interpolation", interp},
                 {"array_model", model},
                 {"taper", taper},
                 {"narrowband_factor", s.signal.narrowband_factor}};
  j["seed"] = s.seed;
  return j;
}

}  // namespace

void Scenario::validate() const {
  scene.validate();
  source.validate(scene);
  validate_targets(scene, targets);
  perturbation.validate();
  if (sweeps == 0) throw ValidationError("sweeps must be >= 1");
  if (!(codebook.span >= 0)) throw ValidationError("codebook.span_deg must be >= 0");
  if (std::abs(codebook.center) + codebook.span / 2 >= kPi / 2) {
    throw ValidationError("codebook angles must stay within (−90°, 90°)");
  }
  if (!(plane.period > 0)) throw ValidationError("plane.period_m must be > 0");
  if (plane.reflection_count == 0) throw ValidationError("plane.reflection_count must be >= 1");
  if (plane.pitch && !(*plane.pitch > 0)) throw ValidationError("plane.pitch_mm must be > 0");
  if (grid_pitch && !(*grid_pitch > 0)) throw ValidationError("grid.pitch_mm must be > 0");
  if (!(signal.oversampling >= 2)) throw ValidationError("signal.oversampling must be >= 2");
  if (!(signal.narrowband_factor > 0)) {
    throw ValidationError("signal.narrowband_factor must be > 0");
  }
}

Scenario parse_scenario(const std::string& json_text, const std::vector<std::string>& overrides) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("scenario is not valid JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  std::string text;
  try {
    text = load_file(path);
  } catch (const FormatError& e) {
    throw ValidationError(e.what());
  }
  return parse_scenario(text, overrides);
}

std::string scenario_to_json(const Scenario& s) { return to_json(s).dump(2); }

std::uint64_t scenario_hash(const Scenario& s) { return fnv1a64(to_json(s).dump()); }

std::string paper_defaults_json() {
  return R"({
  "scene": {
    "source_height_m": 5.0,
    "source_x0_m": 0.0,
    "speed_mps": 20.0,
    "pri_us": 50.0,
    "roi_center_m": [13.8, 11.0],
    "roi_size_m": [1.0, 1.0],
    "plane_origin_m": 0.0
  },
  "source": {
    "carrier_ghz": 77.0,
    "bandwidth_mhz": 500.0,
    "beamwidth_deg": 0.5,
    "pulse_us": 10.0,
    "tx_power_w": 1.0
  },
  "codebook": {"center_deg": 40.0, "span_deg": 5.0},
  "plane": {"mode": "stroboscopic", "period_m": 2.0, "reflection_count": 13, "gamma_rad": "synchronized"},
  "targets": [{"position_m": [13.8, 11.0], "rcs_m2": 1.0, "phase_rad": 0.0}],
  "sweeps": 1,
  "noise": {"enabled": false, "power_dbm": -87.0},
  "perturbation": {"epsilon_m": 0.0, "beta_deg": 0.0},
  "seed": 1
})";
}

Scenario paper_defaults() { return parse_scenario(paper_defaults_json()); }

TxCodebook scenario_codebook(const Scenario& s) {
  TxCodebook swept = build_codebook(s.scene, s.source, s.codebook);
  if (!s.fixed_beam && !s.fixed_beam_specular) return swept;
  double angle = s.fixed_beam.value_or(0.0);
  if (s.fixed_beam_specular) {
    const Vec2 r = s.scene.roi_center;
    angle = std::atan((r.x - s.scene.source_x0) / (s.scene.source_height + r.y));
  }
  TxCodebook fixed = fixed_beam_codebook(angle, swept.size());
  fixed.warnings = swept.warnings;
  return fixed;
}

}  // namespace strobo
