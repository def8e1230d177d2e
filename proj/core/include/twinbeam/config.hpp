#pragma once

#include "twinbeam/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinbeam {

/// Down-conversion source. Wavelengths in nm, kappa in ps/mm, sigma and
/// span in rad/ps.
struct SourceConfig {
  double signal_center_nm = 796.0;
  double idler_center_nm = 796.0;
  double fundamental_center_nm = 796.0;
  double fundamental_fwhm_nm = 10.0;
  /// Calibrated pump width. When unset, derived from the fundamental
  /// assuming ideal frequency doubling.
  std::optional<double> pump_sigma = 8.6;
  double length_mm = 1.45;
  double kappa_s = 1.59;
  double kappa_i = 1.05;
  int grid = 512;
  /// Defaults to default_span() when unset.
  std::optional<double> span;
};

/// Filter in wavelength units. `kind == identity` means no filter.
struct FilterSpec {
  FilterKind kind = FilterKind::identity;
  std::optional<double> center_nm;  // beam center when unset
  double fwhm_nm = 0.0;
};

enum class SweepParameter { gain, mean_photons };

/// Values of the swept parameter. `mean_photons` targets the unfiltered
/// per-beam mean photon number and is converted to gain by root finding.
struct GainSweep {
  SweepParameter parameter = SweepParameter::gain;
  std::vector<double> values;
};

enum class Output { k_table, g2_vs_gain, g12_vs_g11, g2click_vs_g11, nrf };

struct ScenarioConfig {
  SourceConfig source;
  FilterSpec signal_filter;
  FilterSpec idler_filter;
  /// Rows of the K table; each row applies the same filter to both beams.
  std::vector<FilterSpec> k_table_rows;
  GainSweep gain_sweep;
  Beam trigger_beam = Beam::signal;
  std::vector<Output> outputs;
  std::uint64_t seed = 0;
};

/// Parses a JSON scenario (comments allowed). Unset fields take the
/// calibrated defaults; unknown keys are rejected.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully resolved config, every field explicit.
nlohmann::ordered_json to_json(const ScenarioConfig& config);

std::string_view output_name(Output output) noexcept;

// Physical objects derived from a resolved config.
PumpEnvelope pump_envelope(const SourceConfig& source);
PhaseMatching phase_matching(const SourceConfig& source);
FrequencyGrid source_grid(const SourceConfig& source);
SpectralFilter realize_filter(const FilterSpec& spec, const FrequencyGrid& grid, Beam beam,
                              const SourceConfig& source);
std::string filter_label(const FilterSpec& spec);

}  // namespace twinbeam
