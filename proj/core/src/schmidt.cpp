#include "twinbeam/schmidt.hpp"

#include "twinbeam/error.hpp"

#include <cmath>
#include <complex>

namespace twinbeam {

SchmidtDecomposition schmidt_decompose(const Eigen::MatrixXcd& amplitude) {
  if (amplitude.size() == 0) throw InvalidArgument("schmidt_decompose: empty amplitude");
  if (!amplitude.allFinite()) throw NumericalFailure("schmidt_decompose: non-finite amplitude");

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(amplitude, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalFailure("schmidt_decompose: SVD did not converge");

  const Eigen::VectorXd& sigma = svd.singularValues();
  if (!(sigma.size() > 0 && sigma[0] > 0.0)) throw InvalidArgument("schmidt_decompose: amplitude is zero");

  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma[rank] >= kSchmidtTruncation * sigma[0]) ++rank;

  SchmidtDecomposition dec;
  dec.lambdas = sigma.head(rank) / sigma.head(rank).norm();
  dec.modes_s = svd.matrixU().leftCols(rank);
  // F = U S V^dagger = sum_k s_k u_k conj(v_k)^T, so psi_k = conj(v_k).
  dec.modes_i = svd.matrixV().leftCols(rank).conjugate();

  for (Eigen::Index k = 0; k < rank; ++k) {
    Eigen::Index peak = 0;
    dec.modes_s.col(k).cwiseAbs().maxCoeff(&peak);
    const std::complex<double> z = dec.modes_s(peak, k);
    const std::complex<double> phase = std::conj(z) / std::abs(z);
    dec.modes_s.col(k) *= phase;
    dec.modes_i.col(k) *= std::conj(phase);
    dec.modes_s(peak, k) = std::abs(z);
  }
  return dec;
}

SchmidtDecomposition schmidt_decompose(const JointSpectralAmplitude& jsa) { return schmidt_decompose(jsa.values); }

double k_parameter(const Eigen::VectorXd& lambdas) {
  if (lambdas.size() == 0) throw InvalidArgument("k_parameter: no weights");
  if ((lambdas.array() < 0.0).any()) throw InvalidArgument("k_parameter: negative weight");
  const double norm2 = lambdas.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-8) throw InvalidArgument("k_parameter: weights are not normalized");
  return 1.0 / lambdas.array().square().square().sum();
}

MarginalKernel marginal_kernel(const Eigen::MatrixXcd& amplitude, Beam beam) {
  MarginalKernel kernel;
  kernel.beam = beam;
  if (beam == Beam::signal) {
    kernel.matrix = amplitude * amplitude.adjoint();
  } else {
    kernel.matrix = amplitude.transpose() * amplitude.conjugate();
  }
  return kernel;
}

MarginalKernel marginal_kernel(const JointSpectralAmplitude& jsa, Beam beam) {
  return marginal_kernel(jsa.values, beam);
}

MarginalKernel filtered_kernel(const MarginalKernel& kernel, const SpectralFilter& filter) {
  if (filter.samples.size() != kernel.matrix.rows()) {
    throw InvalidArgument("filtered_kernel: filter and kernel are sampled on different grids");
  }
  MarginalKernel out;
  out.beam = kernel.beam;
  out.matrix = filter.samples.asDiagonal() * kernel.matrix * filter.samples.conjugate().asDiagonal();
  return out;
}

double effective_k(const MarginalKernel& kernel) {
  const double trace = kernel.matrix.trace().real();
  if (!(trace > 0.0)) throw InvalidArgument("effective_k: kernel has zero trace");
  // Tr(A^2) = sum |A_xy|^2 for Hermitian A.
  return trace * trace / kernel.matrix.squaredNorm();
}

}  // namespace twinbeam
