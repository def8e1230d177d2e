#include "twinbeam/runner.hpp"

#include "twinbeam/correlators.hpp"
#include "twinbeam/diagnostics.hpp"
#include "twinbeam/error.hpp"
#include "twinbeam/schmidt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <set>
#include <thread>

namespace twinbeam {

namespace {

JointSpectralAmplitude source_jsa(const SourceConfig& source) {
  return build_jsa(source_grid(source), pump_envelope(source), phase_matching(source));
}

// Runs body(k) for k in [0, count). Results must be written by index; the
// exception from the lowest failing index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t workers = std::min<std::size_t>(sweep_threads(), count);
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) {
          try {
            body(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct KValues {
  std::vector<double> signal;
  std::vector<double> idler;
};

KValues k_values(const SourceConfig& source, const std::vector<FilterSpec>& rows) {
  const JointSpectralAmplitude jsa = source_jsa(source);
  const MarginalKernel ks = marginal_kernel(jsa, Beam::signal);
  const MarginalKernel ki = marginal_kernel(jsa, Beam::idler);
  KValues out;
  for (const auto& row : rows) {
    out.signal.push_back(effective_k(filtered_kernel(ks, realize_filter(row, jsa.grid, Beam::signal, source))));
    out.idler.push_back(effective_k(filtered_kernel(ki, realize_filter(row, jsa.grid, Beam::idler, source))));
  }
  return out;
}

Cell defined(const auto& compute) {
  try {
    return Cell{compute()};
  } catch (const UndefinedMoment&) {
    return Cell{};
  }
}

}  // namespace

unsigned sweep_threads() {
  if (const char* env = std::getenv("TWINBEAM_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double gain_for_mean_photons(const Eigen::VectorXd& lambdas, double mean_photons) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
    throw InvalidArgument("gain_for_mean_photons: target must be >= 0");
  }
  if (mean_photons == 0.0) return 0.0;
  const auto mean = [&](double gain) { return (gain * lambdas.array()).sinh().square().sum(); };
  double lo = 0.0;
  double hi = 1.0;
  while (mean(hi) < mean_photons) {
    hi *= 2.0;
    if (hi > 1e3) throw NumericalFailure("gain_for_mean_photons: target out of reach");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean(mid) < mean_photons ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("least_squares_line: need two or more points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("least_squares_line: x values are all equal");
  const double slope = sxy / sxx;
  return LinearFit{slope, my - slope * mx};
}

ResultTable run_k_table(const ScenarioConfig& config) {
  const KValues k = k_values(config.source, config.k_table_rows);
  ResultTable table({"filter", "K_s", "K_i"});
  for (std::size_t row = 0; row < config.k_table_rows.size(); ++row) {
    table.add_row({filter_label(config.k_table_rows[row]), k.signal[row], k.idler[row]});
  }
  return table;
}

GridConvergence check_grid_convergence(const ScenarioConfig& config) {
  SourceConfig fine = config.source;
  fine.grid *= 2;
  // Same span at both resolutions.
  fine.span = config.source.span.value_or(default_span(pump_envelope(config.source), phase_matching(config.source)));
  const KValues coarse = k_values(config.source, config.k_table_rows);
  const KValues dense = k_values(fine, config.k_table_rows);

  GridConvergence result;
  for (std::size_t k = 0; k < coarse.signal.size(); ++k) {
    result.max_relative_change = std::max({result.max_relative_change,
                                           std::abs(dense.signal[k] / coarse.signal[k] - 1.0),
                                           std::abs(dense.idler[k] / coarse.idler[k] - 1.0)});
  }
  result.converged = result.max_relative_change <= kGridConvergenceTolerance;
  return result;
}

ResultTable run_g_sweep(const ScenarioConfig& config) {
  const JointSpectralAmplitude jsa = source_jsa(config.source);
  const SchmidtDecomposition dec = schmidt_decompose(jsa);
  const SpectralFilter fs = realize_filter(config.signal_filter, jsa.grid, Beam::signal, config.source);
  const SpectralFilter fi = realize_filter(config.idler_filter, jsa.grid, Beam::idler, config.source);
  const Beam trigger = config.trigger_beam;

  std::vector<double> gains;
  for (double v : config.gain_sweep.values) {
    gains.push_back(config.gain_sweep.parameter == SweepParameter::gain ? v : gain_for_mean_photons(dec.lambdas, v));
  }

  std::vector<std::vector<Cell>> rows(gains.size());
  parallel_for(gains.size(), [&](std::size_t k) {
    const TwinBeamCorrelators corr = apply_filters(build_correlators(dec, gains[k]), fs, fi);
    MomentEvaluator eval(corr);
    const int trigger_s = trigger == Beam::signal ? 1 : 2;
    rows[k] = {gains[k],
               corr.mean_signal(),
               corr.mean_idler(),
               defined([&] { return eval.normalized(2, 0); }),
               defined([&] { return eval.normalized(0, 2); }),
               defined([&] { return eval.normalized(1, 1); }),
               defined([&] { return eval.normalized(trigger_s, 3 - trigger_s); }),
               defined([&] { return heralded_g2_click(eval, trigger); }),
               defined([&] { return noise_reduction_factor(eval); })};
  });

  ResultTable table({"B", "n_s", "n_i", "g20", "g02", "g11", "g12", "g2click", "nrf"});
  std::vector<double> xs;
  std::vector<double> ys;
  for (auto& row : rows) {
    const double* g11 = std::get_if<double>(&row[5]);
    const double* g12 = std::get_if<double>(&row[6]);
    if (g11 && g12) {
      xs.push_back(*g11);
      ys.push_back(*g12);
    }
    table.add_row(std::move(row));
  }

  table.metadata["g12_orientation"] = trigger == Beam::signal ? "g^(1,2): 1 on signal (trigger), 2 on idler"
                                                              : "g^(1,2): 1 on idler (trigger), 2 on signal";
  table.metadata["schmidt_K"] = k_parameter(dec.lambdas);
  table.metadata["schmidt_rank"] = dec.rank();
  nlohmann::ordered_json fit = nullptr;
  if (xs.size() >= 2 && std::any_of(xs.begin(), xs.end(), [&](double x) { return x != xs.front(); })) {
    const LinearFit line = least_squares_line(xs, ys);
    fit = {{"slope", line.slope}, {"intercept", line.intercept}, {"points", xs.size()}};
  }
  table.metadata["fit_g12_vs_g11"] = std::move(fit);
  return table;
}

std::map<std::string, ResultTable> run_scenario(const ScenarioConfig& config) {
  WarningCapture capture;
  std::map<std::string, ResultTable> tables;

  nlohmann::ordered_json base;
  base["engine"] = kEngineVersion;
  base["config"] = to_json(config);
  const GridConvergence conv = check_grid_convergence(config);
  base["grid_convergence"] = {{"status", conv.converged ? "converged" : "unconverged"},
                              {"max_relative_change", conv.max_relative_change},
                              {"grids", {config.source.grid, 2 * config.source.grid}}};

  const auto wants = [&](Output o) {
    return std::find(config.outputs.begin(), config.outputs.end(), o) != config.outputs.end();
  };
  if (wants(Output::k_table)) tables.emplace(output_name(Output::k_table), run_k_table(config));

  if (wants(Output::g2_vs_gain) || wants(Output::g12_vs_g11) || wants(Output::g2click_vs_g11) || wants(Output::nrf)) {
    const ResultTable sweep = run_g_sweep(config);
    const auto add = [&](Output o, const std::vector<std::string>& names) {
      if (wants(o)) tables.emplace(output_name(o), sweep.select(names));
    };
    add(Output::g2_vs_gain, {"B", "n_s", "n_i", "g20", "g02"});
    add(Output::g12_vs_g11, {"B", "g11", "g12"});
    add(Output::g2click_vs_g11, {"B", "g11", "g2click"});
    add(Output::nrf, {"B", "n_s", "n_i", "nrf"});
  }

  const auto messages = capture.messages();
  const std::set<std::string> unique(messages.begin(), messages.end());
  base["warnings"] = std::vector<std::string>(unique.begin(), unique.end());

  for (auto& [name, table] : tables) {
    nlohmann::ordered_json meta = base;
    meta["table"] = name;
    for (const auto& [key, value] : table.metadata.items()) meta[key] = value;
    table.metadata = std::move(meta);
  }
  return tables;
}

}  // namespace twinbeam
