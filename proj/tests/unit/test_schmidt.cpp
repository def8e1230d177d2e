#include "support/brute_force.hpp"

#include "twinbeam/diagnostics.hpp"
#include "twinbeam/error.hpp"
#include "twinbeam/schmidt.hpp"
#include "twinbeam/spectral.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <numeric>
#include <random>

using namespace twinbeam;
using namespace twinbeam::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using cd = std::complex<double>;

JointSpectralAmplitude calibrated_jsa(std::size_t points = 512) {
  const PumpEnvelope pump{8.6};
  const PhaseMatching pm{1.45, 1.59, 1.05};
  WarningCapture capture;
  return build_jsa(build_grid(0, 0, default_span(pump, pm), points), pump, pm);
}

double bandwidth(double nm) { return bandwidth_to_angular(nm, 796.0); }

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  Eigen::VectorXd v = es.eigenvalues().reverse();
  return v;
}

}  // namespace

TEST_CASE("rank-one amplitude has a single mode", "[schmidt]") {
  std::mt19937_64 rng(3);
  Eigen::VectorXcd u = random_complex(rng, 6, 1);
  Eigen::VectorXcd v = random_complex(rng, 6, 1);
  u.normalize();
  v.normalize();
  const auto dec = schmidt_decompose(Eigen::MatrixXcd(u * v.transpose()));
  REQUIRE(dec.rank() == 1);
  CHECK_THAT(dec.lambdas(0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(k_parameter(dec.lambdas), WithinAbs(1.0, 1e-12));
}

TEST_CASE("diagonal amplitude gives two equal modes", "[schmidt]") {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(2, 2);
  f(0, 0) = f(1, 1) = 1.0 / std::sqrt(2.0);
  const auto dec = schmidt_decompose(f);
  REQUIRE(dec.rank() == 2);
  CHECK_THAT(dec.lambdas(0), WithinAbs(1.0 / std::sqrt(2.0), 1e-14));
  CHECK_THAT(dec.lambdas(1), WithinAbs(1.0 / std::sqrt(2.0), 1e-14));
  CHECK_THAT(k_parameter(dec.lambdas), WithinAbs(2.0, 1e-12));
}

TEST_CASE("decomposition invariants on random amplitudes", "[schmidt][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index g = 3 + trial * 4;
    Eigen::MatrixXcd f = random_complex(rng, g, g);
    f /= f.norm();
    const auto dec = schmidt_decompose(f);

    const Eigen::MatrixXcd rebuilt =
        dec.modes_s * dec.lambdas.cast<cd>().asDiagonal() * dec.modes_i.transpose();
    CHECK((rebuilt - f).norm() < 1e-8);
    CHECK_THAT(dec.lambdas.squaredNorm(), WithinAbs(1.0, 1e-9));
    for (Eigen::Index k = 1; k < dec.rank(); ++k) CHECK(dec.lambdas(k) <= dec.lambdas(k - 1));

    const auto r = dec.rank();
    CHECK((dec.modes_s.adjoint() * dec.modes_s - Eigen::MatrixXcd::Identity(r, r)).norm() < 1e-9);
    CHECK((dec.modes_i.adjoint() * dec.modes_i - Eigen::MatrixXcd::Identity(r, r)).norm() < 1e-9);

    for (Eigen::Index k = 0; k < r; ++k) {
      Eigen::Index at = 0;
      dec.modes_s.col(k).cwiseAbs().maxCoeff(&at);
      CHECK(dec.modes_s(at, k).imag() == 0.0);
      CHECK(dec.modes_s(at, k).real() > 0.0);
    }

    const double k = k_parameter(dec.lambdas);
    CHECK(k >= 1.0);
    CHECK(k <= static_cast<double>(r) + 1e-9);
  }
}

TEST_CASE("truncation drops negligible weights and renormalizes", "[schmidt]") {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(3, 3);
  f(0, 0) = 1.0;
  f(1, 1) = 0.5;
  f(2, 2) = 1e-9;
  const auto dec = schmidt_decompose(f);
  CHECK(dec.rank() == 2);
  CHECK_THAT(dec.lambdas.squaredNorm(), WithinAbs(1.0, 1e-12));
  CHECK_THAT(dec.lambdas(0) / dec.lambdas(1), WithinRel(2.0, 1e-12));
}

TEST_CASE("phase fixing is deterministic", "[schmidt]") {
  std::mt19937_64 rng(5);
  Eigen::MatrixXcd f = random_complex(rng, 8, 8);
  f /= f.norm();
  const auto a = schmidt_decompose(f);
  const auto b = schmidt_decompose(Eigen::MatrixXcd(f * std::polar(1.0, 0.7)));
  CHECK((a.lambdas - b.lambdas).norm() < 1e-12);
  CHECK((a.modes_s - b.modes_s).norm() < 1e-10);
}

TEST_CASE("k_parameter examples and errors", "[schmidt]") {
  CHECK_THAT(k_parameter(Eigen::VectorXd::Ones(1)), WithinAbs(1.0, 1e-15));
  Eigen::VectorXd two(2);
  two << std::sqrt(0.5), std::sqrt(0.5);
  CHECK_THAT(k_parameter(two), WithinAbs(2.0, 1e-12));
  Eigen::VectorXd skew(2);
  skew << std::sqrt(0.8), std::sqrt(0.2);
  CHECK_THAT(k_parameter(skew), WithinAbs(1.47059, 1e-5));
  Eigen::VectorXd bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(k_parameter(bad), InvalidArgument);
}

TEST_CASE("K is invariant under global phase and consistent relabeling", "[schmidt][property]") {
  std::mt19937_64 rng(8);
  Eigen::MatrixXcd f = random_complex(rng, 10, 10);
  f /= f.norm();
  const double k = k_parameter(schmidt_decompose(f).lambdas);
  CHECK_THAT(k_parameter(schmidt_decompose(Eigen::MatrixXcd(f * cd(0, 1))).lambdas), WithinRel(k, 1e-12));

  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXcd p(10, 10);
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) p(a, b) = f(perm[a], perm[b]);
  }
  CHECK_THAT(k_parameter(schmidt_decompose(p).lambdas), WithinRel(k, 1e-12));
}

TEST_CASE("marginal kernels", "[schmidt]") {
  std::mt19937_64 rng(21);
  Eigen::MatrixXcd f = random_complex(rng, 12, 12);
  f /= f.norm();
  const auto dec = schmidt_decompose(f);

  for (Beam beam : {Beam::signal, Beam::idler}) {
    const auto kernel = marginal_kernel(f, beam);
    CHECK(kernel.beam == beam);
    CHECK((kernel.matrix - kernel.matrix.adjoint()).norm() < 1e-12);
    CHECK_THAT(kernel.matrix.trace().real(), WithinAbs(1.0, 1e-9));
    const Eigen::VectorXd ev = sorted_eigenvalues(kernel.matrix);
    CHECK(ev.minCoeff() >= -1e-10);
    for (Eigen::Index k = 0; k < dec.rank(); ++k) {
      CHECK_THAT(ev(k), WithinAbs(dec.lambdas(k) * dec.lambdas(k), 1e-8));
    }
    CHECK_THAT(effective_k(kernel), WithinRel(k_parameter(dec.lambdas), 1e-9));
  }

  Eigen::VectorXcd u = random_complex(rng, 5, 1);
  u.normalize();
  const auto projector = marginal_kernel(Eigen::MatrixXcd(u * u.transpose()), Beam::signal);
  CHECK((projector.matrix * projector.matrix - projector.matrix).norm() < 1e-12);
  CHECK_THAT(effective_k(projector), WithinAbs(1.0, 1e-12));
}

TEST_CASE("filtered kernels and effective K", "[schmidt]") {
  std::mt19937_64 rng(4);
  Eigen::MatrixXcd f = random_complex(rng, 16, 16);
  f /= f.norm();
  const auto grid = build_grid(0, 0, 10.0, 16);
  const auto kernel = marginal_kernel(f, Beam::idler);

  const auto same = filtered_kernel(kernel, make_filter(FilterKind::identity, 0, 0, grid));
  CHECK((same.matrix - kernel.matrix).norm() == 0.0);

  SpectralFilter constant = make_filter(FilterKind::identity, 0, 0, grid);
  constant.samples.setConstant(std::sqrt(0.3));
  const auto scaled = filtered_kernel(kernel, constant);
  CHECK((scaled.matrix - 0.3 * kernel.matrix).norm() < 1e-14);
  CHECK_THAT(effective_k(scaled), WithinRel(effective_k(kernel), 1e-12));

  const auto narrow = filtered_kernel(kernel, make_filter(FilterKind::gaussian, 0, 2.0, grid));
  CHECK(narrow.matrix.trace().real() < 1.0);

  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(2, 2);
  diag(0, 0) = diag(1, 1) = 0.5;
  CHECK_THAT(effective_k(MarginalKernel{Beam::signal, diag}), WithinAbs(2.0, 1e-14));

  CHECK_THROWS_AS(effective_k(MarginalKernel{Beam::signal, Eigen::MatrixXcd::Zero(3, 3)}), InvalidArgument);
  CHECK_THROWS_AS(filtered_kernel(kernel, make_filter(FilterKind::identity, 0, 0, build_grid(0, 0, 1.0, 8))),
                  InvalidArgument);
}

TEST_CASE("calibrated source: frozen K and filtered mode numbers", "[schmidt][regression]") {
  // Values from tests/support/reference_values.py (independent numpy code).
  const auto jsa = calibrated_jsa();
  const auto dec = schmidt_decompose(jsa);
  CHECK_THAT(k_parameter(dec.lambdas), WithinRel(23.01385839448457, 1e-9));

  const auto ks = marginal_kernel(jsa, Beam::signal);
  const auto ki = marginal_kernel(jsa, Beam::idler);
  const Eigen::VectorXd es = sorted_eigenvalues(ks.matrix);
  const Eigen::VectorXd ei = sorted_eigenvalues(ki.matrix);
  CHECK((es - ei).cwiseAbs().maxCoeff() < 1e-8);

  struct Row {
    double nm, k_s, k_i;
  };
  const Row rows[] = {{1.0, 1.9480133729936457, 1.5031420924151022},
                      {2.5, 4.1794510471428525, 2.9743705093023802},
                      {10.0, 13.128589816654305, 9.941064251967209}};
  double prev_s = 0.0, prev_i = 0.0;
  for (const auto& row : rows) {
    const auto filter = make_filter(FilterKind::gaussian, 0.0, bandwidth(row.nm), jsa.grid);
    const double k_s = effective_k(filtered_kernel(ks, filter));
    const double k_i = effective_k(filtered_kernel(ki, filter));
    CHECK_THAT(k_s, WithinRel(row.k_s, 1e-9));
    CHECK_THAT(k_i, WithinRel(row.k_i, 1e-9));
    CHECK(k_i < k_s);
    CHECK(k_s > prev_s);
    CHECK(k_i > prev_i);
    prev_s = k_s;
    prev_i = k_i;
  }
  CHECK(effective_k(ks) > prev_s);
  CHECK(effective_k(ki) > prev_i);
}
