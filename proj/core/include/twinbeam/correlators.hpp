#pragma once

#include "twinbeam/schmidt.hpp"
#include "twinbeam/spectral.hpp"

#include <Eigen/Dense>

#include <memory>

namespace twinbeam {

enum class Provenance { unfiltered, filtered };

/// Second moments of a zero-mean twin-beam Gaussian state in the frequency
/// basis:
///   signal_number(x, x') = <a_s^dag(x') a_s(x)>
///   idler_number(y, y')  = <a_i^dag(y') a_i(y)>
///   pair(x, y)           = <a_s(x) a_i(y)>
/// Same-beam squeezing and cross-beam <a_s^dag a_i> are zero for every state
/// reachable by down-conversion followed by beam-local attenuation, so they
/// are not stored.
class TwinBeamCorrelators {
 public:
  /// Validates that both number matrices are Hermitian and PSD within
  /// 1e-10 (relative to their trace) and that dimensions agree.
  static TwinBeamCorrelators from_matrices(Eigen::MatrixXcd signal_number, Eigen::MatrixXcd idler_number,
                                           Eigen::MatrixXcd pair, double gain, Provenance provenance);

  const Eigen::MatrixXcd& signal_number() const noexcept { return signal_number_; }
  const Eigen::MatrixXcd& idler_number() const noexcept { return idler_number_; }
  const Eigen::MatrixXcd& pair() const noexcept { return pair_; }
  double gain() const noexcept { return gain_; }
  Provenance provenance() const noexcept { return provenance_; }

  double mean_signal() const { return signal_number_.trace().real(); }
  double mean_idler() const { return idler_number_.trace().real(); }

 private:
  friend TwinBeamCorrelators build_correlators(const SchmidtDecomposition&, double);
  friend TwinBeamCorrelators apply_transmissions(const TwinBeamCorrelators&, const Eigen::VectorXcd&,
                                                 const Eigen::VectorXcd&);

  TwinBeamCorrelators(Eigen::MatrixXcd ns, Eigen::MatrixXcd ni, Eigen::MatrixXcd m, double gain, Provenance p)
      : signal_number_(std::move(ns)), idler_number_(std::move(ni)), pair_(std::move(m)), gain_(gain),
        provenance_(p) {}

  Eigen::MatrixXcd signal_number_;
  Eigen::MatrixXcd idler_number_;
  Eigen::MatrixXcd pair_;
  double gain_ = 0.0;
  Provenance provenance_ = Provenance::unfiltered;
};

/// Exact-gain twin beams: each Schmidt pair is a two-mode squeezer with
/// squeezing gain * lambda_k.
TwinBeamCorrelators build_correlators(const SchmidtDecomposition& dec, double gain);

/// Frequency-dependent attenuation (beam-splitter coupling to vacuum) on
/// each beam.
TwinBeamCorrelators apply_filters(const TwinBeamCorrelators& corr, const SpectralFilter& signal_filter,
                                  const SpectralFilter& idler_filter);

/// Same as apply_filters, from raw transmission samples.
TwinBeamCorrelators apply_transmissions(const TwinBeamCorrelators& corr, const Eigen::VectorXcd& t_signal,
                                        const Eigen::VectorXcd& t_idler);

struct MomentValue {
  int n = 0;
  int m = 0;
  double value = 0.0;
};

struct MomentOptions {
  /// Largest n + m accepted.
  int max_order = 5;
};

/// Evaluates normally ordered moments of one correlator set, sharing cycle
/// traces and matrix products between moments. Summation order over
/// matchings is fixed, so results are reproducible bit for bit.
class MomentEvaluator {
 public:
  explicit MomentEvaluator(TwinBeamCorrelators corr, MomentOptions options = {});
  ~MomentEvaluator();
  MomentEvaluator(const MomentEvaluator&) = delete;
  MomentEvaluator& operator=(const MomentEvaluator&) = delete;

  /// <: n_s^n n_i^m :>
  double moment(int n, int m);
  /// g^(n,m)
  double normalized(int n, int m);

  const TwinBeamCorrelators& correlators() const noexcept { return corr_; }

 private:
  struct Cache;
  TwinBeamCorrelators corr_;
  MomentOptions options_;
  std::unique_ptr<Cache> cache_;
};

/// Normally ordered moment <: n_s^n n_i^m :> via the Gaussian moment theorem.
MomentValue wick_normal_moment(const TwinBeamCorrelators& corr, int n, int m, const MomentOptions& options = {});

/// g^(n,m) = <: n_s^n n_i^m :> / (<n_s>^n <n_i>^m).
double normalized_correlation(const TwinBeamCorrelators& corr, int n, int m,
                              const MomentOptions& options = {});

/// Low-trigger-efficiency heralded second moment of the beam opposite to
/// `trigger`: g^(1,2) / [g^(1,1)]^2, with the first index on the trigger.
double heralded_g2_click(const TwinBeamCorrelators& corr, Beam trigger);
double heralded_g2_click(MomentEvaluator& evaluator, Beam trigger);

/// Var(n_s - n_i) / (<n_s> + <n_i>).
double noise_reduction_factor(const TwinBeamCorrelators& corr);
double noise_reduction_factor(MomentEvaluator& evaluator);

/// g^(1,2) boundaries for pure twin beams in the single-mode and multimode
/// limits.
double boundary_g12_single_mode(double g11);
double boundary_g12_multimode(double g11);

}  // namespace twinbeam
