#include "support/brute_force.hpp"

#include "twinbeam/correlators.hpp"
#include "twinbeam/diagnostics.hpp"
#include "twinbeam/error.hpp"
#include "twinbeam/fock_oracle.hpp"
#include "twinbeam/oracle_check.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace twinbeam;
using namespace twinbeam::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SmallJsa single_bin() { return SmallJsa{Eigen::MatrixXcd::Ones(1, 1)}; }

double fock_nrf(const FockDensityMatrix& rho) {
  const double ns = factorial_moment(rho, 1, 0);
  const double ni = factorial_moment(rho, 0, 1);
  const double var = factorial_moment(rho, 2, 0) + ns - ns * ns + factorial_moment(rho, 0, 2) + ni - ni * ni -
                     2.0 * (factorial_moment(rho, 1, 1) - ns * ni);
  return var / (ns + ni);
}

}  // namespace

TEST_CASE("vacuum at zero gain", "[fock]") {
  const auto rho = build_pdc_state(single_bin(), 0.0, 6);
  CHECK_THAT(rho.trace(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(std::abs(rho.element(0, 0)), WithinAbs(1.0, 1e-15));
  CHECK(rho.truncation_error() == 0.0);
  for (int n = 0; n <= 2; ++n) {
    for (int m = 0; m <= 2; ++m) {
      if (n + m > 0) CHECK(factorial_moment(rho, n, m) == 0.0);
    }
  }
}

TEST_CASE("two-mode squeezed vacuum photon statistics", "[fock]") {
  const double b = 0.2;
  const auto rho = build_pdc_state(single_bin(), b, 12);
  REQUIRE(rho.modes().size() == 2);
  CHECK(rho.modes()[0].beam == Beam::signal);
  CHECK(rho.modes()[1].beam == Beam::idler);
  CHECK(rho.truncation_error() < 1e-6);

  const Eigen::VectorXd p = rho.diagonal();
  const double t2 = std::pow(std::tanh(b), 2);
  for (int ns = 0; ns <= 12; ++ns) {
    for (int ni = 0; ni <= 12; ++ni) {
      const double expected = ns == ni ? std::pow(t2, ns) / std::pow(std::cosh(b), 2) : 0.0;
      CHECK_THAT(p(static_cast<Eigen::Index>(rho.index_of({ns, ni}))), WithinAbs(expected, 1e-10));
    }
  }
  const double n = std::pow(std::sinh(b), 2);
  CHECK_THAT(factorial_moment(rho, 1, 0), WithinRel(n, 1e-10));
  CHECK_THAT(factorial_moment(rho, 1, 1), WithinAbs(2.0 * n * n + n, 1e-8));
  CHECK_THAT(factorial_moment(rho, 1, 2), WithinRel(6.0 * n * n * n + 4.0 * n * n, 1e-8));
}

TEST_CASE("diagonal amplitudes give independent squeezers", "[fock]") {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(2, 2);
  f(0, 0) = 0.8;
  f(1, 1) = 0.6;
  const double b = 0.3;
  const auto rho = build_pdc_state(SmallJsa{f}, b, 8);
  REQUIRE(rho.modes().size() == 4);
  const Eigen::VectorXd p = rho.diagonal();
  auto tmsv = [](double r, int k) { return std::pow(std::tanh(r), 2 * k) / std::pow(std::cosh(r), 2); };
  for (int a = 0; a <= 3; ++a) {
    for (int c = 0; c <= 3; ++c) {
      const auto idx = rho.index_of({a, c, a, c});
      CHECK_THAT(p(static_cast<Eigen::Index>(idx)), WithinAbs(tmsv(0.8 * b, a) * tmsv(0.6 * b, c), 1e-10));
    }
  }
  CHECK_THAT(p(static_cast<Eigen::Index>(rho.index_of({1, 0, 0, 1}))), WithinAbs(0.0, 1e-14));
}

TEST_CASE("state norm and truncation accounting", "[fock][property]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto c = random_oracle_case(rng);
    const auto rho = build_pdc_state(c.jsa, c.gain, 12);
    CHECK(rho.truncation_error() < 1e-6);
    CHECK_THAT(rho.trace(), WithinAbs(1.0 - rho.truncation_error(), 1e-10));
  }
  WarningCapture capture;
  const auto coarse = build_pdc_state(single_bin(), 1.5, 4);
  CHECK(coarse.truncation_error() > 1e-4);
  CHECK(capture.messages().size() == 1);
}

TEST_CASE("dense view is Hermitian and positive", "[fock]") {
  std::mt19937_64 rng(2);
  const auto rho = apply_loss(build_pdc_state(SmallJsa{random_complex(rng, 2, 1)}, 0.3, 6), 2, 0.6);
  const Eigen::MatrixXcd d = rho.dense();
  CHECK((d - d.adjoint()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
  CHECK_THROWS_AS(build_pdc_state(SmallJsa{Eigen::MatrixXcd::Ones(2, 2)}, 0.1, 12).dense(), Refused);
}

TEST_CASE("input validation", "[fock]") {
  CHECK_THROWS_AS(build_pdc_state(single_bin(), 0.1, 3), InvalidArgument);
  CHECK_THROWS_AS(build_pdc_state(single_bin(), -0.1, 8), InvalidArgument);
  CHECK_THROWS_AS(build_pdc_state(SmallJsa{Eigen::MatrixXcd::Zero(1, 1)}, 0.1, 8), InvalidArgument);
  CHECK_THROWS_AS(build_pdc_state(SmallJsa{Eigen::MatrixXcd::Ones(3, 1)}, 0.1, 8), Refused);
  CHECK_THROWS_AS(build_pdc_state(SmallJsa{Eigen::MatrixXcd::Ones(2, 2)}, 0.1, 13), Refused);
  const auto rho = build_pdc_state(single_bin(), 0.1, 6);
  CHECK_THROWS_AS(apply_loss(rho, 0, 1.2), InvalidArgument);
  CHECK_THROWS_AS(apply_loss(rho, 5, 0.5), InvalidArgument);
  CHECK_THROWS_AS(click_conditioned_g2(rho, Beam::signal, 0.0), InvalidArgument);
}

TEST_CASE("loss channel", "[fock]") {
  const auto rho = build_pdc_state(single_bin(), 0.3, 10);
  const auto same = apply_loss(rho, 1, 1.0);
  CHECK_THAT(same.trace(), WithinAbs(rho.trace(), 1e-14));
  CHECK((same.diagonal() - rho.diagonal()).norm() < 1e-15);

  const auto dark = apply_loss(rho, 1, 0.0);
  CHECK_THAT(dark.trace(), WithinAbs(rho.trace(), 1e-12));
  CHECK(factorial_moment(dark, 0, 1) == 0.0);
  CHECK_THAT(factorial_moment(dark, 1, 0), WithinRel(factorial_moment(rho, 1, 0), 1e-12));

  for (double eta : {0.9, 0.5, 0.1}) {
    const auto lossy = apply_loss(rho, 1, eta);
    CHECK_THAT(lossy.trace(), WithinAbs(rho.trace(), 1e-12));
    CHECK_THAT(factorial_moment(lossy, 0, 1), WithinRel(eta * factorial_moment(rho, 0, 1), 1e-10));
  }
}

TEST_CASE("one-sided loss NRF matches binomial algebra", "[fock]") {
  const double b = 0.25;
  const double eta = 0.5;
  const double n = std::pow(std::sinh(b), 2);
  const auto rho = apply_loss(build_pdc_state(single_bin(), b, 12), 1, eta);
  // Var(n_s - n_i) = n(n+1)(1-eta)^2 + eta(1-eta)n over (1+eta)n.
  const double expected = (1.0 - eta) * ((n + 1.0) * (1.0 - eta) + eta) / (1.0 + eta);
  CHECK_THAT(fock_nrf(rho), WithinAbs(expected, 1e-8));

  const auto both = apply_loss(apply_loss(build_pdc_state(single_bin(), b, 12), 0, 0.3), 1, 0.3);
  CHECK_THAT(fock_nrf(both), WithinAbs(0.7, 1e-8));
}

TEST_CASE("oracle agrees with the Gaussian engine", "[fock][oracle]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const auto c = random_oracle_case(rng);
    const auto report = compare_with_oracle(c, 12, 3);
    CHECK(report.moments.size() == 9);
    CHECK(report.max_relative_deviation < std::max(1e-6, 10.0 * report.truncation_error));
  }
}

TEST_CASE("bin loss equals a two-point filter", "[fock][oracle]") {
  std::mt19937_64 rng(4);
  Eigen::MatrixXcd f = random_complex(rng, 2, 2);
  f /= f.norm();
  const double b = 0.25;
  auto rho = build_pdc_state(SmallJsa{f}, b, 12);
  rho = apply_loss(rho, 0, 0.7);
  rho = apply_loss(rho, 3, 0.2);

  Eigen::VectorXcd ts(2), ti(2);
  ts << std::sqrt(0.7), 1.0;
  ti << 1.0, std::sqrt(0.2);
  const auto corr = apply_transmissions(small_jsa_correlators(SmallJsa{f}, b), ts, ti);
  MomentEvaluator ev(corr);
  for (int n = 0; n <= 2; ++n) {
    for (int m = 0; n + m <= 3; ++m) {
      if (n + m == 0) continue;
      CHECK(rel_diff(factorial_moment(rho, n, m), ev.moment(n, m)) < 1e-6);
    }
  }
}

TEST_CASE("click-conditioned g2", "[fock]") {
  const double b = 0.15;
  const auto rho = build_pdc_state(single_bin(), b, 12);
  const auto corr = small_jsa_correlators(single_bin(), b);
  const double low_efficiency = click_conditioned_g2(rho, Beam::signal, 1e-3);
  CHECK_THAT(low_efficiency, WithinRel(heralded_g2_click(corr, Beam::signal), 0.02));
  CHECK(click_conditioned_g2(rho, Beam::signal, 1.0) < low_efficiency);
  CHECK(click_conditioned_g2(rho, Beam::idler, 1e-3) > 0.0);

  CHECK_THROWS_AS(click_conditioned_g2(build_pdc_state(single_bin(), 0.0, 6), Beam::signal, 0.5), UndefinedMoment);
}

TEST_CASE("factorial moment warns near the cutoff", "[fock]") {
  const auto rho = build_pdc_state(single_bin(), 0.1, 4);
  WarningCapture capture;
  factorial_moment(rho, 2, 1);
  CHECK(capture.messages().size() == 1);
}
