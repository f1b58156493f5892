#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "../support.hpp"
#include "hypgaf/errors.hpp"
#include "hypgaf/gaf_model.hpp"

using namespace hypgaf;

TEST_CASE("coefficient_sq values") {
  for (double L : {0.25, 0.5, 1.0, 2.0, 5.0}) CHECK(coefficient_sq(L, 0) == 1.0);
  for (std::size_t n = 0; n < 200; ++n) CHECK(coefficient_sq(1.0, n) == 1.0);
  CHECK(coefficient_sq(2.0, 3) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("coefficient_sq agrees with the gamma form") {
  for (double L : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    for (std::size_t n = 0; n <= 20; ++n) {
      const double nn = static_cast<double>(n);
      const double gamma_form = std::exp(std::lgamma(L + nn) - std::lgamma(L) - std::lgamma(nn + 1.0));
      CHECK(coefficient_sq(L, n) == doctest::Approx(gamma_form).epsilon(1e-12));
    }
  }
}

TEST_CASE("GafParams validation") {
  CHECK_THROWS_AS((GafParams{0.0, 0.5, 1e-8}.validate()), DomainError);
  CHECK_THROWS_AS((GafParams{1.0, 1.0, 1e-8}.validate()), DomainError);
  CHECK_THROWS_AS((GafParams{1.0, 0.0, 1e-8}.validate()), DomainError);
  CHECK_THROWS_AS((GafParams{1.0, 0.5, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((GafParams{1.0, 0.5, 1.0}.validate()), DomainError);
  CHECK_NOTHROW((GafParams{1.0, 0.5, 1e-8}.validate()));
}

TEST_CASE("sample_gaf is deterministic and meets the tail budget") {
  const GafParams p{1.0, 0.9, 1e-8};
  const GafSample a = sample_gaf(p, 42);
  const GafSample b = sample_gaf(p, 42);
  REQUIRE(a.coeffs.size() == b.coeffs.size());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    CHECK(a.coeffs[i].real() == b.coeffs[i].real());
    CHECK(a.coeffs[i].imag() == b.coeffs[i].imag());
  }
  CHECK(a.coeffs.size() == a.truncation_degree + 1);
  CHECK(a.tail_sigma2 <= 1e-8 / 0.19);
  CHECK(sample_gaf(p, 43).coeffs[0] != a.coeffs[0]);

  const GafParams q{0.5, 0.5, 1e-8};
  const GafSample c = sample_gaf(q, 1);
  CHECK(c.tail_sigma2 <= 1e-8 * std::pow(0.75, -0.5));
  // Minimality: one degree less breaks the budget.
  CHECK(tail_variance_bound(0.5, 0.5, c.truncation_degree - 1) > 1e-8 * std::pow(0.75, -0.5));
}

TEST_CASE("tail_variance_bound dominates the true tail") {
  for (double L : {0.5, 1.0, 2.0}) {
    for (double r : {0.5, 0.9}) {
      for (std::size_t N : {10u, 50u, 200u}) {
        double direct = 0.0;
        for (std::size_t n = N + 1; n < N + 20000; ++n) {
          direct += coefficient_sq(L, n) * std::pow(r, 2.0 * static_cast<double>(n));
        }
        CHECK(tail_variance_bound(L, r, N) >= direct * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("truncation hits the resource cap") {
  GafParams p{1.0, 0.999, 1e-12};
  p.max_degree = 100;
  CHECK_THROWS_AS(sample_gaf(p, 0), ResourceError);
}

TEST_CASE("coefficients have unit mean square") {
  const GafParams p{1.0, 0.9, 1e-8};
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; count < 100000; ++seed) {
    const GafSample s = sample_gaf(p, seed);
    for (const Complex& c : s.coeffs) {
      sum += std::norm(c);
      if (++count == 100000) break;
    }
  }
  CHECK(std::abs(sum / 100000.0 - 1.0) <= 0.02);
}

TEST_CASE("evaluate") {
  const GafSample s = sample_gaf(GafParams{2.0, 0.8, 1e-10}, 7);
  CHECK(evaluate(s, Complex(0.0, 0.0)) == s.coeffs[0]);
  CHECK_THROWS_AS(evaluate(s, Complex(0.81, 0.0)), DomainError);
  CHECK_NOTHROW(evaluate(s, Complex(0.8, 0.0)));

  const GafSample t = sample_gaf(GafParams{2.0, 0.8, 1e-10}, 8);
  GafSample sum = s;
  for (std::size_t i = 0; i < sum.coeffs.size(); ++i) sum.coeffs[i] += t.coeffs[i];
  for (double th = 0.0; th < 6.28; th += 0.3) {
    const Complex z = std::polar(0.75, th);
    const Complex lhs = evaluate(sum, z);
    const Complex rhs = evaluate(s, z) + evaluate(t, z);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("empirical covariance and variance of f") {
  const std::size_t trials = 100000;
  {
    const Complex z(0.5, 0.0);
    const Complex w(0.3, 0.0);
    const GafParams p{1.0, 0.5, 1e-12};
    Complex mean(0.0, 0.0);
    double m2 = 0.0;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
      const GafSample s = sample_gaf(p, seed);
      const double x = (evaluate(s, z) * std::conj(evaluate(s, w))).real();
      mean += x;
      m2 += x * x;
    }
    const double m = mean.real() / trials;
    const double se = std::sqrt((m2 / trials - m * m) / trials);
    CHECK(std::abs(m - 1.0 / (1.0 - 0.15)) <= 3.0 * se);
  }
  {
    const Complex z(0.0, 0.5);
    const GafParams p{2.0, 0.5, 1e-12};
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
      const double x = std::norm(evaluate(sample_gaf(p, seed + 1000000), z));
      m1 += x;
      m2 += x * x;
    }
    const double m = m1 / trials;
    const double se = std::sqrt((m2 / trials - m * m) / trials);
    CHECK(std::abs(m - pointwise_variance(2.0, 0.5)) <= 4.0 * se);
  }
}

TEST_CASE("moment formulas") {
  CHECK(expected_zero_count(1.0, 0.9) == doctest::Approx(0.81 / 0.19).epsilon(1e-15));
  CHECK(expected_zero_count(2.0, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(expected_zero_count(3.0, 1e-9) < 1e-17);
  CHECK(variance_l1(0.9) == doctest::Approx(0.81 / 0.3439).epsilon(1e-15));
  CHECK(variance_l1(1e-9) < 1e-17);
  CHECK(pointwise_variance(2.0, 0.5) == doctest::Approx(1.0 / 0.5625).epsilon(1e-15));
}

TEST_CASE("variance_regime") {
  const auto a = variance_regime(1.0);
  CHECK(a.regime == VarianceRegime::Super);
  CHECK(a.exponent == 1.0);
  const auto b = variance_regime(0.5);
  CHECK(b.regime == VarianceRegime::Critical);
  CHECK(b.exponent == 1.0);
  const auto c = variance_regime(0.25);
  CHECK(c.regime == VarianceRegime::Sub);
  CHECK(c.exponent == 1.5);
}

TEST_CASE("eigen_spectrum single node") {
  for (double r0 : {0.5, 0.8, 0.95}) {
    const EigSpectrum s = eigen_spectrum(1.0, r0, 1);
    REQUIRE(s.lambdas.size() == 1);
    CHECK(s.lambdas[0] == doctest::Approx(1.0 / (1.0 - r0 * r0)).epsilon(1e-13));
  }
}

TEST_CASE("eigen_spectrum against the circulant oracle and trace identity") {
  for (double L : {1.0, 2.0}) {
    for (double r0 : {0.8, 0.9, 0.95}) {
      for (std::size_t N : {4u, 8u, 32u}) {
        const EigSpectrum s = eigen_spectrum(L, r0, N);
        REQUIRE(s.lambdas.size() == N);
        double trace = 0.0;
        for (std::size_t m = 0; m < N; ++m) {
          CHECK(s.lambdas[m] > 0.0);
          CHECK(s.lambdas[m] == doctest::Approx(oracle::circulant_eigenvalue(L, r0, N, m)).epsilon(1e-10));
          trace += s.lambdas[m];
        }
        // sum_n a_n^2 r0^(2n) = (1 - r0^2)^(-L).
        CHECK(trace == doctest::Approx(N * pointwise_variance(L, r0)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("spectrum_bounds_check") {
  const SpectrumBounds b = spectrum_bounds_check(eigen_spectrum(1.0, 0.9, 8), 0.1);
  CHECK(b.lambda_ok);
  CHECK(b.logdet >= b.logdet_lower);

  const SpectrumBounds one = spectrum_bounds_check(eigen_spectrum(1.0, 0.9, 1), 0.1);
  CHECK(one.logdet == doctest::Approx(std::log(1.0 / 0.19)).epsilon(1e-13));

  CHECK(spectrum_bounds_check(eigen_spectrum(2.0, 0.99, 32), 0.01).lambda_ok);

  EigSpectrum bad = eigen_spectrum(1.0, 0.9, 4);
  bad.lambdas[2] = 0.0;
  CHECK_THROWS_AS(spectrum_bounds_check(bad, 0.1), DegenerateSpectrum);
}
