#include "twinbeam/config.hpp"

#include "twinbeam/error.hpp"
#include "twinbeam/result_table.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace twinbeam {

namespace {

using Json = nlohmann::json;

void reject_unknown_keys(const Json& object, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : object.items()) {
    if (!keys.contains(key)) throw ValidationError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const Json* member(const Json& object, const char* key) {
  auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double read_number(const Json& value, const std::string& path) {
  if (!value.is_number()) throw ValidationError(path, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ValidationError(path, "must be finite");
  return x;
}

double read_positive(const Json& value, const std::string& path) {
  const double x = read_number(value, path);
  if (!(x > 0.0)) throw ValidationError(path, "must be positive");
  return x;
}

const Json& read_object(const Json& value, const std::string& path) {
  if (!value.is_object()) throw ValidationError(path, "expected an object");
  return value;
}

FilterKind read_kind(const Json& value, const std::string& path) {
  if (!value.is_string()) throw ValidationError(path, "expected \"none\", \"gaussian\" or \"rectangular\"");
  const auto s = value.get<std::string>();
  if (s == "none") return FilterKind::identity;
  if (s == "gaussian") return FilterKind::gaussian;
  if (s == "rectangular") return FilterKind::rectangular;
  throw ValidationError(path, "unknown filter kind \"" + s + "\"");
}

FilterSpec read_filter(const Json& value, const std::string& path) {
  FilterSpec spec;
  if (value.is_null()) return spec;
  if (value.is_string()) {
    spec.kind = read_kind(value, path);
    if (spec.kind != FilterKind::identity) throw ValidationError(join(path, "fwhm"), "required for this filter kind");
    return spec;
  }
  read_object(value, path);
  reject_unknown_keys(value, path, {"kind", "center", "fwhm"});
  const Json* kind = member(value, "kind");
  spec.kind = kind ? read_kind(*kind, join(path, "kind")) : FilterKind::gaussian;
  if (const Json* center = member(value, "center")) spec.center_nm = read_positive(*center, join(path, "center"));
  if (spec.kind == FilterKind::identity) {
    if (member(value, "fwhm")) throw ValidationError(join(path, "fwhm"), "not allowed when kind is \"none\"");
    return spec;
  }
  const Json* fwhm = member(value, "fwhm");
  if (!fwhm) throw ValidationError(join(path, "fwhm"), "required for this filter kind");
  spec.fwhm_nm = read_positive(*fwhm, join(path, "fwhm"));
  return spec;
}

SourceConfig read_source(const Json& value) {
  const std::string path = "source";
  read_object(value, path);
  reject_unknown_keys(value, path,
                      {"signal_center_nm", "idler_center_nm", "fundamental_center_nm", "fundamental_fwhm_nm",
                       "pump_sigma", "length_mm", "kappa_s", "kappa_i", "grid", "span"});
  SourceConfig s;
  if (auto* v = member(value, "signal_center_nm")) s.signal_center_nm = read_positive(*v, join(path, "signal_center_nm"));
  if (auto* v = member(value, "idler_center_nm")) s.idler_center_nm = read_positive(*v, join(path, "idler_center_nm"));
  if (auto* v = member(value, "fundamental_center_nm")) {
    s.fundamental_center_nm = read_positive(*v, join(path, "fundamental_center_nm"));
  }
  if (auto* v = member(value, "fundamental_fwhm_nm")) {
    s.fundamental_fwhm_nm = read_positive(*v, join(path, "fundamental_fwhm_nm"));
    if (!(s.fundamental_fwhm_nm < 2.0 * s.fundamental_center_nm)) {
      throw ValidationError(join(path, "fundamental_fwhm_nm"), "band extends below 0 nm");
    }
  }
  if (auto* v = member(value, "pump_sigma")) {
    if (v->is_null()) {
      s.pump_sigma.reset();
    } else {
      s.pump_sigma = read_positive(*v, join(path, "pump_sigma"));
    }
  }
  if (auto* v = member(value, "length_mm")) s.length_mm = read_positive(*v, join(path, "length_mm"));
  if (auto* v = member(value, "kappa_s")) s.kappa_s = read_number(*v, join(path, "kappa_s"));
  if (auto* v = member(value, "kappa_i")) s.kappa_i = read_number(*v, join(path, "kappa_i"));
  if (auto* v = member(value, "grid")) {
    if (!v->is_number_integer()) throw ValidationError(join(path, "grid"), "expected an integer");
    const auto g = v->get<long long>();
    if (g < 2 || g > 8192) throw ValidationError(join(path, "grid"), "must lie in [2, 8192]");
    s.grid = static_cast<int>(g);
  }
  if (auto* v = member(value, "span"); v && !v->is_null()) s.span = read_positive(*v, join(path, "span"));
  if (!s.span && s.kappa_s == 0.0 && s.kappa_i == 0.0) {
    throw ValidationError(join(path, "span"), "required when kappa_s and kappa_i are both zero");
  }
  return s;
}

GainSweep read_sweep(const Json& value) {
  const std::string path = "gain_sweep";
  read_object(value, path);
  reject_unknown_keys(value, path, {"parameter", "values", "min", "max", "points", "spacing"});
  GainSweep sweep;
  if (auto* p = member(value, "parameter")) {
    if (!p->is_string()) throw ValidationError(join(path, "parameter"), "expected \"gain\" or \"mean_photons\"");
    const auto s = p->get<std::string>();
    if (s == "gain") {
      sweep.parameter = SweepParameter::gain;
    } else if (s == "mean_photons") {
      sweep.parameter = SweepParameter::mean_photons;
    } else {
      throw ValidationError(join(path, "parameter"), "expected \"gain\" or \"mean_photons\"");
    }
  }

  const Json* values = member(value, "values");
  const bool ranged = member(value, "min") || member(value, "max") || member(value, "points") || member(value, "spacing");
  if (values && ranged) throw ValidationError(path, "give either values or min/max/points, not both");
  if (values) {
    if (!values->is_array()) throw ValidationError(join(path, "values"), "expected an array");
    for (std::size_t k = 0; k < values->size(); ++k) {
      const std::string item = join(path, "values") + "[" + std::to_string(k) + "]";
      const double x = read_number((*values)[k], item);
      if (x < 0.0) throw ValidationError(item, "must be >= 0");
      sweep.values.push_back(x);
    }
  } else {
    double lo = 0.005;
    double hi = 0.3;
    long long points = 10;
    bool log = true;
    if (auto* v = member(value, "min")) lo = read_number(*v, join(path, "min"));
    if (auto* v = member(value, "max")) hi = read_number(*v, join(path, "max"));
    if (auto* v = member(value, "points")) {
      if (!v->is_number_integer() || v->get<long long>() < 1) {
        throw ValidationError(join(path, "points"), "expected a positive integer");
      }
      points = v->get<long long>();
    }
    if (auto* v = member(value, "spacing")) {
      if (!v->is_string() || (*v != "log" && *v != "linear")) {
        throw ValidationError(join(path, "spacing"), "expected \"log\" or \"linear\"");
      }
      log = *v == "log";
    }
    if (lo < 0.0) throw ValidationError(join(path, "min"), "must be >= 0");
    if (hi < lo) throw ValidationError(join(path, "max"), "must be >= min");
    if (log && !(lo > 0.0)) throw ValidationError(join(path, "min"), "must be positive for log spacing");
    for (long long k = 0; k < points; ++k) {
      const double u = points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(points - 1);
      sweep.values.push_back(log ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u);
    }
  }
  if (sweep.values.empty()) throw ValidationError(path, "sweep is empty");
  return sweep;
}

constexpr Output kAllOutputs[] = {Output::k_table, Output::g2_vs_gain, Output::g12_vs_g11, Output::g2click_vs_g11,
                                  Output::nrf};

std::vector<FilterSpec> default_k_rows() {
  return {{FilterKind::gaussian, std::nullopt, 1.0},
          {FilterKind::gaussian, std::nullopt, 2.5},
          {FilterKind::gaussian, std::nullopt, 10.0},
          {FilterKind::identity, std::nullopt, 0.0}};
}

const char* kind_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::identity: return "none";
    case FilterKind::gaussian: return "gaussian";
    case FilterKind::rectangular: return "rectangular";
  }
  return "none";
}

nlohmann::ordered_json filter_json(const FilterSpec& spec, double beam_center_nm) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(spec.kind);
  if (spec.kind != FilterKind::identity) {
    j["center"] = spec.center_nm.value_or(beam_center_nm);
    j["fwhm"] = spec.fwhm_nm;
  }
  return j;
}

}  // namespace

std::string_view output_name(Output output) noexcept {
  switch (output) {
    case Output::k_table: return "K_table";
    case Output::g2_vs_gain: return "g2_vs_B";
    case Output::g12_vs_g11: return "g12_vs_g11";
    case Output::g2click_vs_g11: return "g2click_vs_g11";
    case Output::nrf: return "nrf";
  }
  return "";
}

ScenarioConfig parse_config(std::string_view text) {
  Json root;
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
  if (blank) {
    root = Json::object();
  } else {
    try {
      root = Json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
    } catch (const Json::parse_error& e) {
      throw ConfigParseError(std::string("config parse error: ") + e.what());
    }
  }
  if (!root.is_object()) throw ValidationError("<root>", "expected an object");
  reject_unknown_keys(root, "", {"source", "filters", "k_table", "gain_sweep", "trigger_beam", "outputs", "seed"});

  ScenarioConfig config;
  if (auto* v = member(root, "source")) config.source = read_source(*v);

  if (auto* v = member(root, "filters")) {
    read_object(*v, "filters");
    reject_unknown_keys(*v, "filters", {"signal", "idler"});
    if (auto* f = member(*v, "signal")) config.signal_filter = read_filter(*f, "filters.signal");
    if (auto* f = member(*v, "idler")) config.idler_filter = read_filter(*f, "filters.idler");
  }

  if (auto* v = member(root, "k_table")) {
    if (!v->is_array() || v->empty()) throw ValidationError("k_table", "expected a non-empty array of filters");
    for (std::size_t k = 0; k < v->size(); ++k) {
      config.k_table_rows.push_back(read_filter((*v)[k], "k_table[" + std::to_string(k) + "]"));
    }
  } else {
    config.k_table_rows = default_k_rows();
  }

  config.gain_sweep = read_sweep(member(root, "gain_sweep") ? root["gain_sweep"] : Json::object());

  if (auto* v = member(root, "trigger_beam")) {
    if (*v == "signal") {
      config.trigger_beam = Beam::signal;
    } else if (*v == "idler") {
      config.trigger_beam = Beam::idler;
    } else {
      throw ValidationError("trigger_beam", "expected \"signal\" or \"idler\"");
    }
  }

  if (auto* v = member(root, "outputs")) {
    if (!v->is_array() || v->empty()) throw ValidationError("outputs", "expected a non-empty array");
    for (std::size_t k = 0; k < v->size(); ++k) {
      const auto& item = (*v)[k];
      const std::string path = "outputs[" + std::to_string(k) + "]";
      if (!item.is_string()) throw ValidationError(path, "expected an output name");
      const auto name = item.get<std::string>();
      const auto* found = std::find_if(std::begin(kAllOutputs), std::end(kAllOutputs),
                                       [&](Output o) { return output_name(o) == name; });
      if (found == std::end(kAllOutputs)) throw ValidationError(path, "unknown output \"" + name + "\"");
      if (std::find(config.outputs.begin(), config.outputs.end(), *found) == config.outputs.end()) {
        config.outputs.push_back(*found);
      }
    }
  } else {
    config.outputs.assign(std::begin(kAllOutputs), std::end(kAllOutputs));
  }

  if (auto* v = member(root, "seed")) {
    if (!v->is_number_unsigned()) throw ValidationError("seed", "expected a non-negative integer");
    config.seed = v->get<std::uint64_t>();
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigParseError& e) {
    throw ConfigParseError(path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json to_json(const ScenarioConfig& config) {
  const SourceConfig& s = config.source;
  nlohmann::ordered_json j;
  auto& src = j["source"];
  src["signal_center_nm"] = s.signal_center_nm;
  src["idler_center_nm"] = s.idler_center_nm;
  src["fundamental_center_nm"] = s.fundamental_center_nm;
  src["fundamental_fwhm_nm"] = s.fundamental_fwhm_nm;
  src["pump_sigma"] = pump_envelope(s).sigma;
  src["length_mm"] = s.length_mm;
  src["kappa_s"] = s.kappa_s;
  src["kappa_i"] = s.kappa_i;
  src["grid"] = s.grid;
  src["span"] = s.span.value_or(default_span(pump_envelope(s), phase_matching(s)));

  j["filters"]["signal"] = filter_json(config.signal_filter, s.signal_center_nm);
  j["filters"]["idler"] = filter_json(config.idler_filter, s.idler_center_nm);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : config.k_table_rows) {
    nlohmann::ordered_json r;
    r["kind"] = kind_name(row.kind);
    if (row.kind != FilterKind::identity) {
      if (row.center_nm) r["center"] = *row.center_nm;
      r["fwhm"] = row.fwhm_nm;
    }
    rows.push_back(std::move(r));
  }
  j["k_table"] = std::move(rows);
  j["gain_sweep"]["parameter"] = config.gain_sweep.parameter == SweepParameter::gain ? "gain" : "mean_photons";
  j["gain_sweep"]["values"] = config.gain_sweep.values;
  j["trigger_beam"] = config.trigger_beam == Beam::signal ? "signal" : "idler";
  auto outputs = nlohmann::ordered_json::array();
  for (Output o : config.outputs) outputs.push_back(std::string(output_name(o)));
  j["outputs"] = std::move(outputs);
  j["seed"] = config.seed;
  return j;
}

PumpEnvelope pump_envelope(const SourceConfig& source) {
  if (source.pump_sigma) return PumpEnvelope{*source.pump_sigma};
  return pump_from_fundamental(source.fundamental_center_nm, source.fundamental_fwhm_nm);
}

PhaseMatching phase_matching(const SourceConfig& source) {
  return PhaseMatching{source.length_mm, source.kappa_s, source.kappa_i};
}

FrequencyGrid source_grid(const SourceConfig& source) {
  const double span = source.span.value_or(default_span(pump_envelope(source), phase_matching(source)));
  const double two_pi_c = 2.0 * std::numbers::pi * kSpeedOfLight;
  return build_grid(two_pi_c / source.signal_center_nm, two_pi_c / source.idler_center_nm, span,
                    static_cast<std::size_t>(source.grid));
}

SpectralFilter realize_filter(const FilterSpec& spec, const FrequencyGrid& grid, Beam beam, const SourceConfig& source) {
  if (spec.kind == FilterKind::identity) return make_filter(FilterKind::identity, 0.0, 0.0, grid);
  const double beam_center = beam == Beam::signal ? source.signal_center_nm : source.idler_center_nm;
  const double center_nm = spec.center_nm.value_or(beam_center);
  return make_filter(spec.kind, wavelength_to_detuning(center_nm, beam_center),
                     bandwidth_to_angular(spec.fwhm_nm, center_nm), grid);
}

std::string filter_label(const FilterSpec& spec) {
  switch (spec.kind) {
    case FilterKind::identity: return "none";
    case FilterKind::gaussian: return format_number(spec.fwhm_nm) + " nm";
    case FilterKind::rectangular: return format_number(spec.fwhm_nm) + " nm rect";
  }
  return "none";
}

}  // namespace twinbeam
