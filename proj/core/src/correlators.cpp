#include "twinbeam/correlators.hpp"

#include "twinbeam/error.hpp"
#include "twinbeam/wick.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

namespace twinbeam {

namespace {

void check_hermitian_psd(const Eigen::MatrixXcd& n, const char* label) {
  if (n.rows() != n.cols()) throw InvalidArgument(std::string(label) + " is not square");
  if (!n.allFinite()) throw InvalidArgument(std::string(label) + " has non-finite entries");
  const double scale = std::max(1.0, n.norm());
  if ((n - n.adjoint()).norm() > 1e-10 * scale) throw InvalidArgument(std::string(label) + " is not Hermitian");
  if (n.rows() == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(n, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure(std::string(label) + ": eigensolver failed");
  const double trace = n.trace().real();
  if (eig.eigenvalues().minCoeff() < -1e-10 * std::max(trace, 0.0)) {
    throw InvalidArgument(std::string(label) + " is not positive semidefinite");
  }
}

}  // namespace

TwinBeamCorrelators TwinBeamCorrelators::from_matrices(Eigen::MatrixXcd signal_number, Eigen::MatrixXcd idler_number,
                                                       Eigen::MatrixXcd pair, double gain, Provenance provenance) {
  check_hermitian_psd(signal_number, "signal number matrix");
  check_hermitian_psd(idler_number, "idler number matrix");
  if (pair.rows() != signal_number.rows() || pair.cols() != idler_number.rows()) {
    throw InvalidArgument("pair matrix dimensions do not match the number matrices");
  }
  if (!pair.allFinite()) throw InvalidArgument("pair matrix has non-finite entries");
  return TwinBeamCorrelators(std::move(signal_number), std::move(idler_number), std::move(pair), gain, provenance);
}

TwinBeamCorrelators build_correlators(const SchmidtDecomposition& dec, double gain) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw InvalidArgument("build_correlators: gain must be >= 0");
  const Eigen::ArrayXd r = gain * dec.lambdas.array();
  const Eigen::VectorXd occupation = r.sinh().square().matrix();
  const Eigen::VectorXd pairing = (r.sinh() * r.cosh()).matrix();

  Eigen::MatrixXcd ns = dec.modes_s * occupation.asDiagonal() * dec.modes_s.adjoint();
  Eigen::MatrixXcd ni = dec.modes_i * occupation.asDiagonal() * dec.modes_i.adjoint();
  Eigen::MatrixXcd m = dec.modes_s * pairing.asDiagonal() * dec.modes_i.transpose();
  return TwinBeamCorrelators(std::move(ns), std::move(ni), std::move(m), gain, Provenance::unfiltered);
}

TwinBeamCorrelators apply_transmissions(const TwinBeamCorrelators& corr, const Eigen::VectorXcd& t_signal,
                                        const Eigen::VectorXcd& t_idler) {
  if (t_signal.size() != corr.signal_number().rows() || t_idler.size() != corr.idler_number().rows()) {
    throw InvalidArgument("apply_filters: filter grid does not match the correlator grid");
  }
  if ((t_signal.cwiseAbs().array() > 1.0 + 1e-12).any() || (t_idler.cwiseAbs().array() > 1.0 + 1e-12).any()) {
    throw InvalidArgument("apply_filters: transmission amplitude exceeds 1");
  }
  // Beam-splitter coupling to vacuum leaves normally ordered moments
  // rescaled by t and adds no noise.
  Eigen::MatrixXcd ns = t_signal.asDiagonal() * corr.signal_number() * t_signal.conjugate().asDiagonal();
  Eigen::MatrixXcd ni = t_idler.asDiagonal() * corr.idler_number() * t_idler.conjugate().asDiagonal();
  Eigen::MatrixXcd m = t_signal.asDiagonal() * corr.pair() * t_idler.asDiagonal();
  return TwinBeamCorrelators(std::move(ns), std::move(ni), std::move(m), corr.gain(), Provenance::filtered);
}

TwinBeamCorrelators apply_filters(const TwinBeamCorrelators& corr, const SpectralFilter& signal_filter,
                                  const SpectralFilter& idler_filter) {
  return apply_transmissions(corr, signal_filter.samples, idler_filter.samples);
}

struct MomentEvaluator::Cache {
  std::array<Eigen::MatrixXcd, 8> factors;
  std::array<bool, 8> ready{};
  std::unordered_map<std::string, std::complex<double>> traces;
  std::unordered_map<std::string, Eigen::MatrixXcd> products;
  std::map<std::pair<int, int>, double> moments;
};

MomentEvaluator::MomentEvaluator(TwinBeamCorrelators corr, MomentOptions options)
    : corr_(std::move(corr)), options_(options), cache_(std::make_unique<Cache>()) {}

MomentEvaluator::~MomentEvaluator() = default;

namespace {

using wick::Factor;

const Eigen::MatrixXcd& factor_matrix(const TwinBeamCorrelators& corr, std::array<Eigen::MatrixXcd, 8>& factors,
                                      std::array<bool, 8>& ready, Factor f) {
  const auto k = static_cast<std::size_t>(f);
  if (!ready[k]) {
    switch (f) {
      case Factor::Ns: factors[k] = corr.signal_number(); break;
      case Factor::NsT: factors[k] = corr.signal_number().transpose(); break;
      case Factor::Ni: factors[k] = corr.idler_number(); break;
      case Factor::NiT: factors[k] = corr.idler_number().transpose(); break;
      case Factor::M: factors[k] = corr.pair(); break;
      case Factor::MT: factors[k] = corr.pair().transpose(); break;
      case Factor::Mc: factors[k] = corr.pair().conjugate(); break;
      case Factor::McT: factors[k] = corr.pair().adjoint(); break;
    }
    ready[k] = true;
  }
  return factors[k];
}

}  // namespace

double MomentEvaluator::moment(int n, int m) {
  if (n < 0 || m < 0) throw InvalidArgument("moment order must be non-negative");
  if (n + m > options_.max_order) {
    throw Refused("moment order n+m = " + std::to_string(n + m) + " exceeds the guard of " +
                  std::to_string(options_.max_order));
  }
  if (auto it = cache_->moments.find({n, m}); it != cache_->moments.end()) return it->second;

  const auto matrix = [&](Factor f) -> const Eigen::MatrixXcd& {
    return factor_matrix(corr_, cache_->factors, cache_->ready, f);
  };

  // Product F_1 ... F_k for a key of factor codes, memoized by prefix.
  const auto product = [&](const std::string& key, auto&& self) -> const Eigen::MatrixXcd& {
    if (key.size() == 1) return matrix(static_cast<Factor>(key[0] - 'a'));
    if (auto it = cache_->products.find(key); it != cache_->products.end()) return it->second;
    const Eigen::MatrixXcd& head = self(key.substr(0, key.size() - 1), self);
    Eigen::MatrixXcd value = head * matrix(static_cast<Factor>(key.back() - 'a'));
    return cache_->products.emplace(key, std::move(value)).first->second;
  };

  const auto cycle_trace = [&](const wick::Cycle& cycle) {
    const std::string key = wick::canonical_key(cycle);
    if (auto it = cache_->traces.find(key); it != cache_->traces.end()) return it->second;
    std::complex<double> value;
    const Eigen::MatrixXcd& last = matrix(static_cast<Factor>(key.back() - 'a'));
    if (key.size() == 1) {
      value = last.trace();
    } else {
      // Tr(P L) = sum_ij P_ij L_ji
      const Eigen::MatrixXcd& head = product(key.substr(0, key.size() - 1), product);
      value = head.cwiseProduct(last.transpose()).sum();
    }
    cache_->traces.emplace(key, value);
    return value;
  };

  const auto ops = wick::normal_ordered_product(n, m);
  std::complex<double> total = 0.0;
  if (ops.empty()) {
    total = 1.0;
  } else {
    for (const auto& matching : wick::nonzero_matchings(ops)) {
      std::complex<double> term = 1.0;
      for (const auto& cycle : wick::contraction_cycles(ops, matching)) term *= cycle_trace(cycle);
      total += term;
    }
  }

  if (!std::isfinite(total.real())) throw NumericalFailure("moment evaluation produced a non-finite value");
  // Rounding can leave a vanishing moment slightly negative.
  const double value = std::max(total.real(), 0.0);
  cache_->moments.emplace(std::make_pair(n, m), value);
  return value;
}

double MomentEvaluator::normalized(int n, int m) {
  const double ns = corr_.mean_signal();
  const double ni = corr_.mean_idler();
  if (n > 0 && !(ns > 0.0)) throw UndefinedMoment("g(n,m): signal mean photon number is zero");
  if (m > 0 && !(ni > 0.0)) throw UndefinedMoment("g(n,m): idler mean photon number is zero");
  return moment(n, m) / (std::pow(ns, n) * std::pow(ni, m));
}

MomentValue wick_normal_moment(const TwinBeamCorrelators& corr, int n, int m, const MomentOptions& options) {
  MomentEvaluator evaluator(corr, options);
  return MomentValue{n, m, evaluator.moment(n, m)};
}

double normalized_correlation(const TwinBeamCorrelators& corr, int n, int m, const MomentOptions& options) {
  MomentEvaluator evaluator(corr, options);
  return evaluator.normalized(n, m);
}

double heralded_g2_click(MomentEvaluator& evaluator, Beam trigger) {
  const double g11 = evaluator.normalized(1, 1);
  const double g12 = trigger == Beam::signal ? evaluator.normalized(1, 2) : evaluator.normalized(2, 1);
  return g12 / (g11 * g11);
}

double heralded_g2_click(const TwinBeamCorrelators& corr, Beam trigger) {
  MomentEvaluator evaluator(corr);
  return heralded_g2_click(evaluator, trigger);
}

double noise_reduction_factor(MomentEvaluator& evaluator) {
  const TwinBeamCorrelators& corr = evaluator.correlators();
  const double ns = corr.mean_signal();
  const double ni = corr.mean_idler();
  if (!(ns + ni > 0.0)) throw UndefinedMoment("noise_reduction_factor: no photons in either beam");
  const double var_s = evaluator.moment(2, 0) + ns - ns * ns;
  const double var_i = evaluator.moment(0, 2) + ni - ni * ni;
  const double cov = evaluator.moment(1, 1) - ns * ni;
  return std::max(0.0, (var_s + var_i - 2.0 * cov) / (ns + ni));
}

double noise_reduction_factor(const TwinBeamCorrelators& corr) {
  MomentEvaluator evaluator(corr);
  return noise_reduction_factor(evaluator);
}

double boundary_g12_single_mode(double g11) { return 4.0 * g11 - 2.0; }
double boundary_g12_multimode(double g11) { return 2.0 * g11 - 1.0; }

}  // namespace twinbeam
