#pragma once

#include "twinbeam/correlators.hpp"
#include "twinbeam/fock_oracle.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace twinbeam {

/// Random few-bin system for cross-checking the Gaussian engine against the
/// Fock oracle: 1-2 bins per beam, Frobenius norm in [0.3, 1], gain in
/// [0.02, 0.3].
struct OracleCase {
  SmallJsa jsa;
  double gain = 0.0;
};

OracleCase random_oracle_case(std::mt19937_64& rng);

/// Gaussian-engine correlators for a few-bin amplitude; the amplitude norm
/// is folded into the gain.
TwinBeamCorrelators small_jsa_correlators(const SmallJsa& jsa, double gain);

struct MomentComparison {
  int n = 0;
  int m = 0;
  double gaussian = 0.0;
  double fock = 0.0;
  double relative_deviation = 0.0;
};

struct OracleReport {
  std::vector<MomentComparison> moments;
  double truncation_error = 0.0;
  double max_relative_deviation = 0.0;
};

/// Compares every moment with 1 <= n+m <= max_order.
OracleReport compare_with_oracle(const OracleCase& c, int cutoff = 12, int max_order = 3);

}  // namespace twinbeam
