#pragma once

#include "twinbeam/spectral.hpp"

#include <Eigen/Dense>

namespace twinbeam {

/// Broadband mode decomposition f(ws, wi) = sum_k lambda_k phi_k(ws) psi_k(wi).
///
/// Columns of `modes_s` are phi_k and columns of `modes_i` are psi_k, so the
/// amplitude is reconstructed as modes_s * diag(lambdas) * modes_i^T (plain
/// transpose, no conjugation). Weights are descending and sum_k lambda_k^2 = 1
/// after truncation of weights below 1e-7 of the largest.
struct SchmidtDecomposition {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXcd modes_s;
  Eigen::MatrixXcd modes_i;

  Eigen::Index rank() const noexcept { return lambdas.size(); }
};

inline constexpr double kSchmidtTruncation = 1e-7;

/// SVD of an arbitrary (possibly rectangular, unnormalized) amplitude matrix.
/// Each mode pair is phase-fixed so the largest-magnitude entry of phi_k is
/// real and positive.
SchmidtDecomposition schmidt_decompose(const Eigen::MatrixXcd& amplitude);
SchmidtDecomposition schmidt_decompose(const JointSpectralAmplitude& jsa);

/// K = 1 / sum_k lambda_k^4. Requires sum_k lambda_k^2 = 1 within 1e-8.
double k_parameter(const Eigen::VectorXd& lambdas);

/// Reduced single-beam kernel: F F^dagger for signal, F^T F^* for idler.
struct MarginalKernel {
  Beam beam = Beam::signal;
  Eigen::MatrixXcd matrix;
};

MarginalKernel marginal_kernel(const JointSpectralAmplitude& jsa, Beam beam);
MarginalKernel marginal_kernel(const Eigen::MatrixXcd& amplitude, Beam beam);

/// A'(x, x') = t(x) A(x, x') t*(x'). Not renormalized: the trace drops to the
/// transmitted fraction.
MarginalKernel filtered_kernel(const MarginalKernel& kernel, const SpectralFilter& filter);

/// Trace-form mode number (Tr A)^2 / Tr(A^2).
double effective_k(const MarginalKernel& kernel);

}  // namespace twinbeam
