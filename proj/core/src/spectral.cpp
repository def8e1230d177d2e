#include "twinbeam/spectral.hpp"

#include "twinbeam/diagnostics.hpp"
#include "twinbeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace twinbeam {

namespace {

// Intensity FWHM of a Gaussian with standard deviation sigma.
const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::numbers::ln2);

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

FrequencyGrid build_grid(double center_s, double center_i, double span, std::size_t points) {
  if (!(span > 0.0) || !std::isfinite(span)) throw InvalidArgument("build_grid: span must be positive");
  if (points < 2) throw InvalidArgument("build_grid: need at least 2 grid points");

  FrequencyGrid grid;
  grid.center_s = center_s;
  grid.center_i = center_i;
  grid.spacing = span / static_cast<double>(points - 1);
  grid.detunings.resize(points);
  const double mid = 0.5 * static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    grid.detunings[k] = (static_cast<double>(k) - mid) * grid.spacing;
  }
  return grid;
}

PumpEnvelope pump_from_fundamental(double center_nm, double fwhm_nm) {
  if (!(fwhm_nm > 0.0)) throw InvalidArgument("pump_from_fundamental: fwhm must be positive");
  const double fundamental_sigma = bandwidth_to_angular(fwhm_nm, center_nm) / kFwhmPerSigma;
  // Ideal SHG squares the field, which autoconvolves the amplitude spectrum.
  return PumpEnvelope{std::numbers::sqrt2 * fundamental_sigma};
}

double default_span(const PumpEnvelope& pump, const PhaseMatching& pm) {
  const double mismatch = std::abs(pm.kappa_s - pm.kappa_i);
  const double largest = std::max(std::abs(pm.kappa_s), std::abs(pm.kappa_i));
  if (!(pm.length_mm > 0.0) || !(largest > 0.0)) {
    throw InvalidArgument("default_span: phase matching has no finite width; set the span explicitly");
  }
  if (!(mismatch > 0.0)) {
    return 8.0 * std::max(pump.sigma, 2.0 * std::numbers::pi / (pm.length_mm * largest));
  }
  // The sinc ridge kappa_s ws + kappa_i wi = 0 crosses the pump band at
  // |ws| ~ sigma kappa_i / mismatch and |wi| ~ sigma kappa_s / mismatch.
  const double pm_width = 2.0 * std::numbers::pi / (pm.length_mm * mismatch);
  const double ridge = pump.sigma * largest / mismatch;
  return 8.0 * std::max({pump.sigma, pm_width, ridge});
}

JointSpectralAmplitude build_jsa(const FrequencyGrid& grid, const PumpEnvelope& pump, const PhaseMatching& pm) {
  if (!(pump.sigma > 0.0)) throw InvalidArgument("build_jsa: pump sigma must be positive");
  if (!(pm.length_mm > 0.0)) throw InvalidArgument("build_jsa: crystal length must be positive");
  if (grid.size() < 2) throw InvalidArgument("build_jsa: grid needs at least 2 points");
  if (pm.kappa_s == pm.kappa_i) {
    warn("phase matching has kappa_s == kappa_i; signal and idler marginals will be identical");
  }

  const auto g = static_cast<Eigen::Index>(grid.size());
  JointSpectralAmplitude jsa;
  jsa.grid = grid;
  jsa.values.resize(g, g);
  const double pump_scale = 1.0 / (4.0 * pump.sigma * pump.sigma);
  for (Eigen::Index b = 0; b < g; ++b) {
    const double wi = grid.detunings[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < g; ++a) {
      const double ws = grid.detunings[static_cast<std::size_t>(a)];
      const double sum = ws + wi;
      const double envelope = std::exp(-sum * sum * pump_scale);
      const double matching = sinc(0.5 * (pm.kappa_s * ws + pm.kappa_i * wi) * pm.length_mm);
      jsa.values(a, b) = envelope * matching;
    }
  }

  const double norm = jsa.values.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalFailure("build_jsa: amplitude vanishes on the grid");
  jsa.values /= norm;

  const double peak = jsa.values.cwiseAbs().maxCoeff();
  const double edge = std::max({jsa.values.row(0).cwiseAbs().maxCoeff(), jsa.values.row(g - 1).cwiseAbs().maxCoeff(),
                                jsa.values.col(0).cwiseAbs().maxCoeff(), jsa.values.col(g - 1).cwiseAbs().maxCoeff()});
  jsa.boundary_ratio = edge / peak;
  if (jsa.boundary_ratio > 1e-6) {
    std::ostringstream msg;
    msg << "joint amplitude at grid edge is " << jsa.boundary_ratio << " of peak (span " << grid.span()
        << " rad/ps)";
    warn(msg.str());
  }
  return jsa;
}

SpectralFilter make_filter(FilterKind kind, double center, double fwhm, const FrequencyGrid& grid) {
  SpectralFilter filter;
  filter.kind = kind;
  filter.center = center;
  filter.fwhm = fwhm;
  const auto g = static_cast<Eigen::Index>(grid.size());
  filter.samples.resize(g);

  switch (kind) {
    case FilterKind::identity:
      filter.samples.setOnes();
      break;
    case FilterKind::gaussian: {
      if (!(fwhm > 0.0)) throw InvalidArgument("make_filter: fwhm must be positive");
      // |t|^2 = exp(-(w - c)^2 / (2 sigma_f^2)) has intensity FWHM `fwhm`.
      const double sigma = fwhm / kFwhmPerSigma;
      for (Eigen::Index k = 0; k < g; ++k) {
        const double d = grid.detunings[static_cast<std::size_t>(k)] - center;
        filter.samples[k] = std::exp(-d * d / (4.0 * sigma * sigma));
      }
      break;
    }
    case FilterKind::rectangular: {
      if (!(fwhm > 0.0)) throw InvalidArgument("make_filter: fwhm must be positive");
      // Closed interval; the slack absorbs rounding in grid construction.
      const double half = 0.5 * fwhm * (1.0 + 1e-12);
      for (Eigen::Index k = 0; k < g; ++k) {
        const double d = grid.detunings[static_cast<std::size_t>(k)] - center;
        filter.samples[k] = std::abs(d) <= half ? 1.0 : 0.0;
      }
      break;
    }
  }
  return filter;
}

double wavelength_to_detuning(double lambda_nm, double center_nm) {
  if (!(lambda_nm > 0.0) || !(center_nm > 0.0)) {
    throw InvalidArgument("wavelength_to_detuning: wavelengths must be positive");
  }
  return 2.0 * std::numbers::pi * kSpeedOfLight * (1.0 / lambda_nm - 1.0 / center_nm);
}

double bandwidth_to_angular(double fwhm_nm, double center_nm) {
  if (!(fwhm_nm > 0.0)) throw InvalidArgument("bandwidth_to_angular: bandwidth must be positive");
  if (!(center_nm > 0.5 * fwhm_nm)) throw InvalidArgument("bandwidth_to_angular: band extends below 0 nm");
  return wavelength_to_detuning(center_nm - 0.5 * fwhm_nm, center_nm + 0.5 * fwhm_nm);
}

}  // namespace twinbeam
