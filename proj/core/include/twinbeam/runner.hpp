#pragma once

#include "twinbeam/config.hpp"
#include "twinbeam/result_table.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>

namespace twinbeam {

inline constexpr const char* kEngineVersion = "twinbeam 0.1.0";
inline constexpr double kGridConvergenceTolerance = 5e-3;

/// Effective mode numbers K_s, K_i per K-table row.
ResultTable run_k_table(const ScenarioConfig& config);

/// Per gain: mean photon numbers, g^(2,0), g^(0,2), g^(1,1), g^(1,2) (first
/// index on the trigger beam), heralded g^(2)_click and NRF. Metadata holds
/// the unweighted least-squares line of g^(1,2) against g^(1,1).
ResultTable run_g_sweep(const ScenarioConfig& config);

struct GridConvergence {
  bool converged = true;
  double max_relative_change = 0.0;
};

/// Recomputes the K table at twice the grid size.
GridConvergence check_grid_convergence(const ScenarioConfig& config);

/// All requested outputs, keyed by output name, with shared metadata
/// (config echo, engine version, grid convergence, warnings).
std::map<std::string, ResultTable> run_scenario(const ScenarioConfig& config);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

/// Gain B at which the unfiltered per-beam mean photon number equals
/// `mean_photons` for Schmidt weights `lambdas`.
double gain_for_mean_photons(const Eigen::VectorXd& lambdas, double mean_photons);

/// Worker count for sweeps: TWINBEAM_THREADS if set, else hardware
/// concurrency.
unsigned sweep_threads();

}  // namespace twinbeam
