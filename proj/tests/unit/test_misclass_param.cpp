#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "miscls/misclass_param.hpp"
#include "miscls/mathutil.hpp"
#include "test_helpers.hpp"

using namespace miscls;

TEST_CASE("gamma_param closed forms") {
  const int p = 6;
  NuVector nu = NuVector::zeros(p);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(p);
  GammaPair g = gamma_param(nu, z);
  CHECK(g.g01 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.g10 == doctest::Approx(0.5).epsilon(1e-14));

  // setting (I) parameters at z = 0
  nu.nu1 = -2.15;
  nu.nu2 << 1.0, 1.0, -1.5, 1.1, -1.3, 0.0;
  g = gamma_param(nu, z);
  CHECK(g.g01 == doctest::Approx(0.10433122311900131).epsilon(1e-12));
}

TEST_CASE("gamma_param derivative layout and finite differences") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 0.6);
  const int p = 3;
  for (int rep = 0; rep < 50; ++rep) {
    NuVector nu = testutil::random_nu(p, rng);
    Eigen::VectorXd z(p);
    for (int j = 0; j < p; ++j) z(j) = gauss(rng);
    const GammaPair g = gamma_param(nu, z);

    auto f01 = [&](const Eigen::VectorXd& v) {
      return gamma_param(NuVector::from_flat(v), z).g01;
    };
    auto f10 = [&](const Eigen::VectorXd& v) {
      return gamma_param(NuVector::from_flat(v), z).g10;
    };
    const Eigen::VectorXd flat = nu.flatten();
    const Eigen::VectorXd fd01 = testutil::central_diff(f01, flat);
    const Eigen::VectorXd fd10 = testutil::central_diff(f10, flat);
    for (int k = 0; k < 2 * (p + 1); ++k) {
      CHECK(testutil::rel_close(g.d01(k), fd01(k), 1e-6, 1e-7));
      CHECK(testutil::rel_close(g.d10(k), fd10(k), 1e-6, 1e-7));
    }
    // g01 depends only on (nu1, nu2); g10 only on (nu3, nu4)
    CHECK(g.d01.tail(p + 1).norm() == 0.0);
    CHECK(g.d10.head(p + 1).norm() == 0.0);
  }
}

TEST_CASE("a_coefficients boundary and substitution") {
  const int p = 2;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(p);

  // gamma01 = gamma10 = 0 via large negative intercepts
  NuVector nu = NuVector::zeros(p);
  nu.nu1 = -40.0;
  nu.nu3 = -40.0;
  ACoeffs a = a_coefficients(nu, 1, z);
  CHECK(a.a0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.a1 == doctest::Approx(1.0).epsilon(1e-12));

  // gamma01 = 0.1, gamma10 = 0.2, y* = 0 -> a0 = 0.9, a1 = 0.2
  nu.nu1 = std::log(0.1 / 0.9);
  nu.nu3 = std::log(0.2 / 0.8);
  a = a_coefficients(nu, 0, z);
  CHECK(a.a0 == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(a.a1 == doctest::Approx(0.2).epsilon(1e-10));

  CHECK_THROWS_AS(a_coefficients(nu, 2, z), std::invalid_argument);
}

TEST_CASE("a_coefficients derivatives match finite differences") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 0.5);
  const int p = 3;
  for (int rep = 0; rep < 40; ++rep) {
    NuVector nu = testutil::random_nu(p, rng);
    Eigen::VectorXd z(p);
    for (int j = 0; j < p; ++j) z(j) = gauss(rng);
    for (int ystar : {0, 1}) {
      const ACoeffs a = a_coefficients(nu, ystar, z);
      auto f0 = [&](const Eigen::VectorXd& v) {
        return a_coefficients(NuVector::from_flat(v), ystar, z).a0;
      };
      auto f1 = [&](const Eigen::VectorXd& v) {
        return a_coefficients(NuVector::from_flat(v), ystar, z).a1;
      };
      const Eigen::VectorXd flat = nu.flatten();
      const Eigen::VectorXd fd0 = testutil::central_diff(f0, flat);
      const Eigen::VectorXd fd1 = testutil::central_diff(f1, flat);
      for (int k = 0; k < 2 * (p + 1); ++k) {
        CHECK(testutil::rel_close(a.da0(k), fd0(k), 1e-6, 1e-7));
        CHECK(testutil::rel_close(a.da1(k), fd1(k), 1e-6, 1e-7));
      }
    }
  }
}

TEST_CASE("a sums over y* and the mu* identity") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 0.7);
  const int p = 4;
  for (int rep = 0; rep < 50; ++rep) {
    NuVector nu = testutil::random_nu(p, rng);
    Eigen::VectorXd z(p);
    for (int j = 0; j < p; ++j) z(j) = gauss(rng);

    const ACoeffs a_y1 = a_coefficients(nu, 1, z);
    const ACoeffs a_y0 = a_coefficients(nu, 0, z);
    CHECK(a_y1.a0 + a_y0.a0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a_y1.a1 + a_y0.a1 == doctest::Approx(1.0).epsilon(1e-14));

    // mu*(z) = gamma01 + (1 - gamma01 - gamma10) mu equals a1 mu + a0 (1-mu) at y*=1
    const GammaPair g = gamma_param(nu, z);
    const double mu = expit(0.3 + 0.4 * z.sum());
    const double lhs = g.g01 + (1.0 - g.g01 - g.g10) * mu;
    const double rhs = a_y1.a1 * mu + a_y1.a0 * (1.0 - mu);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}
