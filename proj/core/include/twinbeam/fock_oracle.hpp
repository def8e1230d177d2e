#pragma once

#include "twinbeam/spectral.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace twinbeam {

/// Few-bin joint amplitude for the truncated-Fock oracle: at most two bins
/// per beam, scale absorbed into the gain.
struct SmallJsa {
  Eigen::MatrixXcd amplitudes;  // bins_s x bins_i
};

struct ModeLabel {
  Beam beam;
  int bin;
};

inline constexpr std::size_t kMaxFockDimension = 30000;

/// Density operator on the product Fock space of up to four modes, each
/// truncated at `cutoff` photons.
///
/// Stored as an ensemble of unnormalized pure branches,
/// rho = sum_j |psi_j><psi_j|, which is what Kraus channels produce.
/// Hermiticity and positivity hold by construction.
class FockDensityMatrix {
 public:
  FockDensityMatrix(std::vector<ModeLabel> modes, int cutoff, std::vector<Eigen::VectorXcd> branches,
                    double truncation_error);

  const std::vector<ModeLabel>& modes() const noexcept { return modes_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Eigen::VectorXcd>& branches() const noexcept { return branches_; }

  /// Population discarded at the cutoff boundary when the state was built.
  double truncation_error() const noexcept { return truncation_error_; }

  double trace() const;
  std::complex<double> element(std::size_t row, std::size_t col) const;
  Eigen::VectorXd diagonal() const;
  /// Dense matrix; refused above 4096 basis states.
  Eigen::MatrixXcd dense() const;

  /// Photon number of `mode` in basis state `index`.
  int occupation(std::size_t index, int mode) const noexcept;
  std::size_t stride(int mode) const noexcept;
  std::size_t index_of(const std::vector<int>& occupations) const;

 private:
  std::vector<ModeLabel> modes_;
  int cutoff_;
  std::size_t dimension_;
  std::vector<Eigen::VectorXcd> branches_;
  double truncation_error_;
};

/// exp(B sum_ab F_ab a_a^dag b_b^dag - h.c.)|0> in the truncated space.
/// Signal bins come first in the mode order.
FockDensityMatrix build_pdc_state(const SmallJsa& jsa, double gain, int cutoff);

/// Amplitude-damping channel with transmission `efficiency` on one mode.
FockDensityMatrix apply_loss(const FockDensityMatrix& rho, int mode, double efficiency);

/// Tr[rho (n_s)_n (n_i)_m] with falling factorials of the total beam photon
/// numbers.
double factorial_moment(const FockDensityMatrix& rho, int n, int m);

/// g^(2) of the other beam conditioned on an on/off click of the trigger
/// beam detected with efficiency `trigger_efficiency`.
double click_conditioned_g2(const FockDensityMatrix& rho, Beam trigger, double trigger_efficiency);

}  // namespace twinbeam
