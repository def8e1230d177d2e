#include "twinbeam/fock_oracle.hpp"

#include "twinbeam/diagnostics.hpp"
#include "twinbeam/error.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <sstream>

namespace twinbeam {

namespace {

std::size_t checked_dimension(std::size_t modes, int cutoff) {
  std::size_t dim = 1;
  for (std::size_t k = 0; k < modes; ++k) {
    dim *= static_cast<std::size_t>(cutoff + 1);
    if (dim > kMaxFockDimension) {
      throw Refused("Fock space dimension exceeds " + std::to_string(kMaxFockDimension));
    }
  }
  return dim;
}

double falling_factorial(int n, int k) {
  double value = 1.0;
  for (int j = 0; j < k; ++j) value *= static_cast<double>(n - j);
  return value;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double value = 1.0;
  for (int j = 1; j <= k; ++j) value = value * static_cast<double>(n - k + j) / static_cast<double>(j);
  return value;
}

// exp(A) v by scaled Taylor steps; A is sparse.
Eigen::VectorXcd expm_times(const Eigen::SparseMatrix<std::complex<double>>& a, Eigen::VectorXcd v) {
  double norm1 = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    double column = 0.0;
    for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(a, c); it; ++it) column += std::abs(it.value());
    norm1 = std::max(norm1, column);
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(norm1)));
  const double h = 1.0 / steps;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = v;
    Eigen::VectorXcd sum = v;
    for (int k = 1; k <= 80; ++k) {
      term = (h / k) * (a * term);
      sum += term;
      if (term.norm() <= 1e-17 * sum.norm()) break;
    }
    v = std::move(sum);
  }
  return v;
}

}  // namespace

FockDensityMatrix::FockDensityMatrix(std::vector<ModeLabel> modes, int cutoff, std::vector<Eigen::VectorXcd> branches,
                                     double truncation_error)
    : modes_(std::move(modes)),
      cutoff_(cutoff),
      dimension_(checked_dimension(modes_.size(), cutoff)),
      branches_(std::move(branches)),
      truncation_error_(truncation_error) {
  for (const auto& b : branches_) {
    if (static_cast<std::size_t>(b.size()) != dimension_) {
      throw InvalidArgument("FockDensityMatrix: branch dimension mismatch");
    }
  }
}

double FockDensityMatrix::trace() const {
  double t = 0.0;
  for (const auto& b : branches_) t += b.squaredNorm();
  return t;
}

std::complex<double> FockDensityMatrix::element(std::size_t row, std::size_t col) const {
  std::complex<double> value = 0.0;
  for (const auto& b : branches_) {
    value += b[static_cast<Eigen::Index>(row)] * std::conj(b[static_cast<Eigen::Index>(col)]);
  }
  return value;
}

Eigen::VectorXd FockDensityMatrix::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension_));
  for (const auto& b : branches_) d += b.cwiseAbs2();
  return d;
}

Eigen::MatrixXcd FockDensityMatrix::dense() const {
  if (dimension_ > 4096) throw Refused("FockDensityMatrix::dense: dimension too large");
  const auto dim = static_cast<Eigen::Index>(dimension_);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& b : branches_) rho.noalias() += b * b.adjoint();
  return rho;
}

std::size_t FockDensityMatrix::stride(int mode) const noexcept {
  std::size_t s = 1;
  for (std::size_t k = static_cast<std::size_t>(mode) + 1; k < modes_.size(); ++k) s *= static_cast<std::size_t>(cutoff_ + 1);
  return s;
}

int FockDensityMatrix::occupation(std::size_t index, int mode) const noexcept {
  return static_cast<int>((index / stride(mode)) % static_cast<std::size_t>(cutoff_ + 1));
}

std::size_t FockDensityMatrix::index_of(const std::vector<int>& occupations) const {
  if (occupations.size() != modes_.size()) throw InvalidArgument("index_of: wrong number of modes");
  std::size_t index = 0;
  for (std::size_t k = 0; k < occupations.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] > cutoff_) throw InvalidArgument("index_of: occupation out of range");
    index = index * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(occupations[k]);
  }
  return index;
}

FockDensityMatrix build_pdc_state(const SmallJsa& jsa, double gain, int cutoff) {
  const auto bins_s = static_cast<int>(jsa.amplitudes.rows());
  const auto bins_i = static_cast<int>(jsa.amplitudes.cols());
  if (bins_s < 1 || bins_i < 1 || bins_s > 2 || bins_i > 2) {
    throw Refused("build_pdc_state: at most two bins per beam are supported");
  }
  if (jsa.amplitudes.cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("build_pdc_state: amplitude is zero");
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw InvalidArgument("build_pdc_state: gain must be >= 0");
  if (cutoff < 4) throw InvalidArgument("build_pdc_state: cutoff must be at least 4");

  std::vector<ModeLabel> modes;
  for (int b = 0; b < bins_s; ++b) modes.push_back({Beam::signal, b});
  for (int b = 0; b < bins_i; ++b) modes.push_back({Beam::idler, b});
  const std::size_t dim = checked_dimension(modes.size(), cutoff);
  const auto mode_count = static_cast<int>(modes.size());

  // Scratch state only used for index arithmetic.
  const FockDensityMatrix layout(modes, cutoff, {}, 0.0);

  std::vector<Eigen::Triplet<std::complex<double>>> entries;
  for (std::size_t index = 0; index < dim; ++index) {
    for (int a = 0; a < bins_s; ++a) {
      for (int b = 0; b < bins_i; ++b) {
        const std::complex<double> f = gain * jsa.amplitudes(a, b);
        if (f == 0.0) continue;
        const int ia = a;
        const int ib = bins_s + b;
        const int na = layout.occupation(index, ia);
        const int nb = layout.occupation(index, ib);
        if (na < cutoff && nb < cutoff) {
          const std::size_t up = index + layout.stride(ia) + layout.stride(ib);
          entries.emplace_back(static_cast<int>(up), static_cast<int>(index),
                               f * std::sqrt(static_cast<double>((na + 1) * (nb + 1))));
        }
        if (na > 0 && nb > 0) {
          const std::size_t down = index - layout.stride(ia) - layout.stride(ib);
          entries.emplace_back(static_cast<int>(down), static_cast<int>(index),
                               -std::conj(f) * std::sqrt(static_cast<double>(na * nb)));
        }
      }
    }
  }
  Eigen::SparseMatrix<std::complex<double>> generator(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  generator.setFromTriplets(entries.begin(), entries.end());

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  psi[0] = 1.0;
  psi = expm_times(generator, std::move(psi));
  if (!psi.allFinite()) throw NumericalFailure("build_pdc_state: non-finite state vector");

  // Population that reached the cutoff level is discarded and reported.
  double leakage = 0.0;
  for (std::size_t index = 0; index < dim; ++index) {
    for (int k = 0; k < mode_count; ++k) {
      if (layout.occupation(index, k) == cutoff) {
        leakage += std::norm(psi[static_cast<Eigen::Index>(index)]);
        psi[static_cast<Eigen::Index>(index)] = 0.0;
        break;
      }
    }
  }
  if (leakage > 1e-4) {
    std::ostringstream msg;
    msg << "Fock cutoff " << cutoff << " truncates " << leakage << " of the state population";
    warn(msg.str());
  }
  return FockDensityMatrix(std::move(modes), cutoff, {std::move(psi)}, leakage);
}

FockDensityMatrix apply_loss(const FockDensityMatrix& rho, int mode, double efficiency) {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw InvalidArgument("apply_loss: efficiency must lie in [0, 1]");
  if (mode < 0 || mode >= static_cast<int>(rho.modes().size())) throw InvalidArgument("apply_loss: no such mode");

  const int cutoff = rho.cutoff();
  const std::size_t dim = rho.dimension();
  const std::size_t step = rho.stride(mode);

  // Kraus operator E_l |n> = sqrt(C(n,l) eta^(n-l) (1-eta)^l) |n-l>.
  std::vector<std::vector<double>> weight(static_cast<std::size_t>(cutoff + 1),
                                          std::vector<double>(static_cast<std::size_t>(cutoff + 1), 0.0));
  for (int n = 0; n <= cutoff; ++n) {
    for (int l = 0; l <= n; ++l) {
      weight[static_cast<std::size_t>(l)][static_cast<std::size_t>(n)] =
          std::sqrt(binomial(n, l) * std::pow(efficiency, n - l) * std::pow(1.0 - efficiency, l));
    }
  }

  std::vector<Eigen::VectorXcd> branches;
  for (const auto& psi : rho.branches()) {
    for (int l = 0; l <= cutoff; ++l) {
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
      bool any = false;
      for (std::size_t index = 0; index < dim; ++index) {
        const std::complex<double> amp = psi[static_cast<Eigen::Index>(index)];
        if (amp == 0.0) continue;
        const int n = rho.occupation(index, mode);
        if (n < l) continue;
        const double w = weight[static_cast<std::size_t>(l)][static_cast<std::size_t>(n)];
        if (w == 0.0) continue;
        out[static_cast<Eigen::Index>(index - static_cast<std::size_t>(l) * step)] += w * amp;
        any = true;
      }
      if (any) branches.push_back(std::move(out));
    }
  }
  return FockDensityMatrix(rho.modes(), cutoff, std::move(branches), rho.truncation_error());
}

double factorial_moment(const FockDensityMatrix& rho, int n, int m) {
  if (n < 0 || m < 0) throw InvalidArgument("factorial_moment: negative order");
  if (rho.cutoff() - (n + m) < 2) {
    warn("factorial_moment: order " + std::to_string(n + m) + " too close to Fock cutoff " +
         std::to_string(rho.cutoff()));
  }
  const Eigen::VectorXd p = rho.diagonal();
  const auto mode_count = static_cast<int>(rho.modes().size());
  double total = 0.0;
  for (std::size_t index = 0; index < rho.dimension(); ++index) {
    const double weight = p[static_cast<Eigen::Index>(index)];
    if (weight == 0.0) continue;
    int ns = 0;
    int ni = 0;
    for (int k = 0; k < mode_count; ++k) {
      (rho.modes()[static_cast<std::size_t>(k)].beam == Beam::signal ? ns : ni) += rho.occupation(index, k);
    }
    total += weight * falling_factorial(ns, n) * falling_factorial(ni, m);
  }
  return total;
}

double click_conditioned_g2(const FockDensityMatrix& rho, Beam trigger, double trigger_efficiency) {
  if (!(trigger_efficiency > 0.0 && trigger_efficiency <= 1.0)) {
    throw InvalidArgument("click_conditioned_g2: trigger efficiency must lie in (0, 1]");
  }
  FockDensityMatrix lossy = rho;
  const auto mode_count = static_cast<int>(rho.modes().size());
  for (int k = 0; k < mode_count; ++k) {
    if (rho.modes()[static_cast<std::size_t>(k)].beam == trigger) lossy = apply_loss(lossy, k, trigger_efficiency);
  }

  // Click POVM 1 - |0><0| on the trigger beam is diagonal, as are the
  // conditioned-beam factorial moments.
  const Eigen::VectorXd p = lossy.diagonal();
  double click = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (std::size_t index = 0; index < lossy.dimension(); ++index) {
    const double weight = p[static_cast<Eigen::Index>(index)];
    if (weight == 0.0) continue;
    int nt = 0;
    int nc = 0;
    for (int k = 0; k < mode_count; ++k) {
      (lossy.modes()[static_cast<std::size_t>(k)].beam == trigger ? nt : nc) += lossy.occupation(index, k);
    }
    if (nt == 0) continue;
    click += weight;
    first += weight * nc;
    second += weight * falling_factorial(nc, 2);
  }
  if (click < 1e-12) throw UndefinedMoment("click_conditioned_g2: trigger click probability below 1e-12");
  if (!(first > 0.0)) throw UndefinedMoment("click_conditioned_g2: conditioned beam is empty");
  return second * click / (first * first);
}

}  // namespace twinbeam
