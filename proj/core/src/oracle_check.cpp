#include "twinbeam/oracle_check.hpp"

#include "twinbeam/schmidt.hpp"

#include <algorithm>
#include <cmath>

namespace twinbeam {

OracleCase random_oracle_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bins(1, 2);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  OracleCase c;
  const int bs = bins(rng);
  const int bi = bins(rng);
  c.jsa.amplitudes.resize(bs, bi);
  for (int a = 0; a < bs; ++a) {
    for (int b = 0; b < bi; ++b) c.jsa.amplitudes(a, b) = {unit(rng), unit(rng)};
  }
  const double scale = 0.3 + 0.35 * (unit(rng) + 1.0);
  c.jsa.amplitudes *= scale / c.jsa.amplitudes.norm();
  c.gain = 0.02 + 0.14 * (unit(rng) + 1.0);
  return c;
}

TwinBeamCorrelators small_jsa_correlators(const SmallJsa& jsa, double gain) {
  return build_correlators(schmidt_decompose(jsa.amplitudes), gain * jsa.amplitudes.norm());
}

OracleReport compare_with_oracle(const OracleCase& c, int cutoff, int max_order) {
  const TwinBeamCorrelators corr = small_jsa_correlators(c.jsa, c.gain);
  MomentEvaluator evaluator(corr);
  const FockDensityMatrix rho = build_pdc_state(c.jsa, c.gain, cutoff);

  OracleReport report;
  report.truncation_error = rho.truncation_error();
  for (int order = 1; order <= max_order; ++order) {
    for (int n = order; n >= 0; --n) {
      const int m = order - n;
      MomentComparison cmp{n, m, evaluator.moment(n, m), factorial_moment(rho, n, m), 0.0};
      cmp.relative_deviation = std::abs(cmp.gaussian - cmp.fock) / std::abs(cmp.fock);
      report.max_relative_deviation = std::max(report.max_relative_deviation, cmp.relative_deviation);
      report.moments.push_back(cmp);
    }
  }
  return report;
}

}  // namespace twinbeam
