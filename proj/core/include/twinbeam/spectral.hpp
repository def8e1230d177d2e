#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace twinbeam {

/// Speed of light in nm/ps.
inline constexpr double kSpeedOfLight = 299792.458;

enum class Beam { signal, idler };

/// Uniform detuning grid shared by signal and idler. Detunings are angular
/// frequency offsets from the beam centers, in rad/ps.
struct FrequencyGrid {
  double center_s = 0.0;
  double center_i = 0.0;
  std::vector<double> detunings;
  double spacing = 0.0;

  std::size_t size() const noexcept { return detunings.size(); }
  double span() const noexcept { return detunings.empty() ? 0.0 : detunings.back() - detunings.front(); }
};

/// Symmetric grid covering [-span/2, +span/2] with `points` samples.
FrequencyGrid build_grid(double center_s, double center_i, double span, std::size_t points);

/// Gaussian pump amplitude envelope exp(-(ws+wi)^2 / (4 sigma^2)); sigma in
/// rad/ps is the standard deviation of the pump intensity spectrum.
struct PumpEnvelope {
  double sigma = 0.0;
};

/// Pump envelope after ideal second-harmonic generation of a Gaussian
/// fundamental with the given intensity FWHM (nm) at `center_nm`.
PumpEnvelope pump_from_fundamental(double center_nm, double fwhm_nm);

/// Linearized phase matching sinc((kappa_s ws + kappa_i wi) L / 2).
/// kappa in ps/mm, length in mm.
struct PhaseMatching {
  double length_mm = 0.0;
  double kappa_s = 0.0;
  double kappa_i = 0.0;
};

/// Default grid span: 8x the largest of the pump width (sigma), the
/// phase-matching main-lobe width along the anti-diagonal, and the extent
/// of the phase-matching ridge inside the pump band.
double default_span(const PumpEnvelope& pump, const PhaseMatching& pm);

/// Discretized joint spectral amplitude. values(a, b) = f(ws_a, wi_b) * dw,
/// so the matrix has unit Frobenius norm. Rows index signal, columns idler.
struct JointSpectralAmplitude {
  FrequencyGrid grid;
  Eigen::MatrixXcd values;
  /// Largest edge-sample magnitude relative to the peak magnitude.
  double boundary_ratio = 0.0;
};

/// Pump envelope times phase matching on `grid`, L2-normalized. Warns when
/// the amplitude at the grid edge exceeds 1e-6 of the peak.
JointSpectralAmplitude build_jsa(const FrequencyGrid& grid, const PumpEnvelope& pump, const PhaseMatching& pm);

enum class FilterKind { identity, gaussian, rectangular };

/// Complex amplitude transmission t(w) sampled on a beam grid, |t| <= 1.
struct SpectralFilter {
  FilterKind kind = FilterKind::identity;
  double center = 0.0;  // detuning, rad/ps
  double fwhm = 0.0;    // intensity FWHM, rad/ps
  Eigen::VectorXcd samples;
};

/// Gaussian filters have intensity transmission |t|^2 with the requested
/// FWHM; rectangular filters pass the closed interval [center +- fwhm/2].
SpectralFilter make_filter(FilterKind kind, double center, double fwhm, const FrequencyGrid& grid);

/// Angular detuning 2 pi c (1/lambda - 1/center) in rad/ps.
double wavelength_to_detuning(double lambda_nm, double center_nm);

/// Angular-frequency width of a wavelength band [center - w/2, center + w/2].
double bandwidth_to_angular(double fwhm_nm, double center_nm);

}  // namespace twinbeam
