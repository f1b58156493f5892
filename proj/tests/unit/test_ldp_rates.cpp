#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "hypgaf/errors.hpp"
#include "hypgaf/ldp_rates.hpp"
#include "hypgaf/specials.hpp"

using namespace hypgaf;

namespace {
const double kPi2Over3 = std::numbers::pi * std::numbers::pi / 3.0;
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("regime dispatch") {
  CHECK(regime_of(0.75) == Regime::AlphaLow);
  CHECK(regime_of(1.0) == Regime::AlphaOne);
  CHECK(regime_of(2.0) == Regime::AlphaHigh);
  CHECK_THROWS_AS(regime_of(0.5), DomainError);
  CHECK_THROWS_AS(rate_function(0.4, 1.0), DomainError);
  CHECK(std::string(to_string(Regime::AlphaOne)) != std::string(to_string(Regime::AlphaLow)));
  CHECK(std::string(to_string(WBranch::Wm1)) != std::string(to_string(WBranch::W0)));
}

TEST_CASE("limiting_log_mgf") {
  for (double a : {0.75, 1.0, 2.0}) CHECK(limiting_log_mgf(a, 0.0) == 0.0);
  CHECK(limiting_log_mgf(0.75, 3.0) == 4.5);
  CHECK(limiting_log_mgf(2.0, -3.0) == 0.0);
  CHECK(limiting_log_mgf(2.0, 3.0) == 9.0);
  const double h = 1e-3;
  const double second =
      (limiting_log_mgf(1.0, h) - 2.0 * limiting_log_mgf(1.0, 0.0) + limiting_log_mgf(1.0, -h)) / (h * h);
  CHECK(std::abs(second - 1.0) <= 1e-5);
  CHECK(std::isfinite(limiting_log_mgf(1.0, 800.0)));
  CHECK(std::isfinite(limiting_log_mgf(1.0, -800.0)));
}

TEST_CASE("rate_function anchors") {
  const RateResult a = rate_function(1.0, -2.0);
  CHECK(std::abs(a.value - kPi2Over3) <= 1e-12);
  CHECK(a.branch == WBranch::BranchPoint);
  CHECK(rate_function(1.0, -2.0 + 5e-10).branch == WBranch::BranchPoint);

  const RateResult z = rate_function(1.0, 0.0);
  CHECK(std::abs(z.value) <= 1e-12);
  CHECK(z.branch == WBranch::W0);

  CHECK(rate_function(0.75, 1.4).value == doctest::Approx(0.98).epsilon(1e-15));
  CHECK(rate_function(0.75, 1.4).regime == Regime::AlphaLow);
  CHECK(rate_function(2.0, 3.0).value == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(rate_function(2.0, -0.1).value == kInf);
  CHECK(rate_function(1.0, -2.5).value == kInf);
  CHECK(rate_function(1.0, -1.0).branch == WBranch::Wm1);
  CHECK(rate_function(1.0, 1.0).branch == WBranch::W0);

  const LegendreResult num = legendre_numeric(1.0, 1.0);
  CHECK(std::abs(rate_function(1.0, 1.0).value - num.value) <= 1e-8);
}

TEST_CASE("stationary points") {
  for (double x = -1.95; x <= 6.0; x += 0.05) {
    if (std::abs(x) < 1e-9) continue;
    const double lam = stationary_lambda(x);
    if (x < 0.0) {
      CHECK(lam < 0.0);
    } else {
      CHECK(lam > 0.0);
    }
    const double h = 1e-6;
    const double d = (h_alpha_one(lam + h, x) - h_alpha_one(lam - h, x)) / (2.0 * h);
    CHECK(std::abs(d) <= 1e-6);
  }
}

TEST_CASE("c_of_t") {
  for (double t : {1.0, 2.0, 3.0}) CHECK(c_of_t(2.0, t) == doctest::Approx(t * t / 4.0).epsilon(1e-15));
  CHECK(c_of_t(0.75, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    CHECK(std::abs(c_of_t(1.0, t) - rate_function(1.0, t).value) <= 1e-12);
  }
  CHECK_THROWS_AS(c_of_t(1.0, 0.0), DomainError);
}

TEST_CASE("legendre_numeric") {
  for (double a : {0.75, 1.0, 2.0}) CHECK(std::abs(legendre_numeric(a, 0.0).value) <= 1e-10);
  CHECK(std::abs(legendre_numeric(1.0, -2.0).value - kPi2Over3) <= 1e-6);
  const LegendreResult d = legendre_numeric(2.0, -0.5);
  CHECK(d.diverged);
  CHECK(d.value == kInf);
  CHECK(legendre_numeric(1.0, -2.5).diverged);
}

TEST_CASE("closed form against the numeric transform") {
  auto check = [](double alpha, double x) {
    const RateResult c = rate_function(alpha, x);
    const LegendreResult n = legendre_numeric(alpha, x);
    if (std::isinf(c.value)) {
      CHECK(n.diverged);
    } else {
      CHECK(!n.diverged);
      CHECK(std::abs(c.value - n.value) <= 1e-8 * std::max(1.0, c.value));
    }
  };
  for (int i = 0; i <= 159; ++i) check(1.0, -1.95 + 0.05 * i);
  for (int i = 0; i <= 40; ++i) check(0.75, -5.0 + 0.25 * i);
  for (int i = 0; i <= 24; ++i) check(2.0, 0.25 * i);
  for (double x : {-3.0, -1.0, -0.01}) check(2.0, x);
}

TEST_CASE("rate function shape") {
  for (double alpha : {0.75, 1.0, 2.0}) {
    const double lo = alpha == 1.0 ? -1.9 : (alpha > 1.0 ? 0.0 : -5.0);
    const double step = 0.05;
    for (double x = lo + step; x < 5.0; x += step) {
      const double f0 = rate_function(alpha, x - step).value;
      const double f1 = rate_function(alpha, x).value;
      const double f2 = rate_function(alpha, x + step).value;
      CHECK(f1 >= 0.0);
      CHECK(f0 - 2.0 * f1 + f2 >= -1e-12);
    }
    CHECK(std::abs(rate_function(alpha, 0.0).value) <= 1e-12);
  }
}

TEST_CASE("upper deviations are cheaper than lower ones") {
  for (double t : {0.5, 1.0, 1.5, 1.9}) {
    CHECK(rate_function(1.0, t).value < rate_function(1.0, -t).value);
  }
}

TEST_CASE("limits at the ends of the alpha = 1 domain") {
  double prev = 0.0;
  for (double d : {1.0, 0.1, 1e-2, 1e-4, 1e-6, 1e-8}) {
    const double v = rate_function(1.0, -2.0 + d).value;
    CHECK(v > prev);
    CHECK(v < kPi2Over3);
    prev = v;
  }
  CHECK(kPi2Over3 - prev < 1e-6);
  prev = 0.0;
  for (double x : {1.0, 10.0, 100.0, 1e3, 1e4}) {
    const double v = rate_function(1.0, x).value;
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 1e4);
}
