#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "../support.hpp"
#include "hypgaf/errors.hpp"
#include "hypgaf/exact_l1.hpp"
#include "hypgaf/gaf_model.hpp"
#include "hypgaf/ldp_rates.hpp"
#include "hypgaf/specials.hpp"

using namespace hypgaf;

namespace {

double log_sum_from(const std::vector<double>& p, std::size_t V) {
  long double s = 0.0L;
  for (std::size_t j = V; j < p.size(); ++j) s += p[j];
  return std::log(static_cast<double>(s));
}

}  // namespace

TEST_CASE("build_model invariants") {
  const PoissonBinomialModel m = build_model(0.9, 1e-12);
  CHECK(m.probs.size() == m.K);
  CHECK(m.tv_bound <= 1e-12);
  CHECK(std::pow(0.81, static_cast<double>(m.K)) / 0.19 > 1e-12);
  for (std::size_t k = 1; k < m.K; ++k) CHECK(m.probs[k] < m.probs[k - 1]);
  CHECK(m.probs[0] == doctest::Approx(0.81).epsilon(1e-15));
  CHECK(std::abs(m.mean() - 0.81 / 0.19) <= 1e-12);
  CHECK(std::abs(m.variance() - 0.81 / (1.0 - 0.6561)) <= 1e-12);
  CHECK(m.variance() == doctest::Approx(variance_l1(0.9)).epsilon(1e-12));

  const PoissonBinomialModel small = build_model(0.1, 1e-15);
  double p0 = 1.0;
  for (double p : small.probs) p0 *= 1.0 - p;
  CHECK(p0 == doctest::Approx(0.98989).epsilon(1e-5));
  CHECK(pmf(small).values[0] == doctest::Approx(p0).epsilon(1e-15));

  CHECK_THROWS_AS(build_model(1.0, 1e-12), DomainError);
  CHECK_THROWS_AS(build_model(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(build_model(1.0 - 1e-9, 1e-12), ResourceError);
}

TEST_CASE("pmf of a single Bernoulli") {
  const std::vector<double> p{0.3};
  const std::vector<double> v = poisson_binomial_pmf(p);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("pmf equals exhaustive enumeration for K <= 15") {
  for (double r : {0.5, 0.8, 0.9, 0.97}) {
    for (std::size_t K : {1u, 5u, 10u, 15u}) {
      const PoissonBinomialModel m = build_model_terms(r, K);
      const std::vector<double> dp = pmf(m).values;
      const std::vector<double> brute = oracle::enumerate_pmf(m.probs);
      REQUIRE(dp.size() == brute.size());
      for (std::size_t j = 0; j < dp.size(); ++j) CHECK(std::abs(dp[j] - brute[j]) <= 1e-12);
    }
  }
}

TEST_CASE("pmf sums to one and has the model mean") {
  for (double r : {0.3, 0.8, 0.9, 0.99, 0.999}) {
    const PoissonBinomialModel m = build_model(r, 1e-12);
    const Pmf p = pmf(m);
    long double total = 0.0L, mean = 0.0L;
    for (std::size_t j = 0; j < p.values.size(); ++j) {
      CHECK(p.values[j] >= 0.0);
      total += p.values[j];
      mean += j * static_cast<long double>(p.values[j]);
    }
    CHECK(std::abs(static_cast<double>(total) - 1.0) <= 1e-12);
    CHECK(static_cast<double>(mean) == doctest::Approx(m.mean()).epsilon(1e-12));
    CHECK(p.tv_bound == m.tv_bound);
  }
}

TEST_CASE("tail_exact edge cases and enumeration oracle") {
  const PoissonBinomialModel m = build_model_terms(0.9, 15);
  CHECK(tail_exact(m, 0) == 0.0);
  CHECK(tail_exact(m, 16) == -std::numeric_limits<double>::infinity());
  const std::vector<double> brute = oracle::enumerate_pmf(m.probs);
  for (std::size_t V = 1; V <= 15; ++V) {
    CHECK(tail_exact(m, V) == doctest::Approx(log_sum_from(brute, V)).epsilon(1e-11));
  }
  for (long long W = 0; W <= 15; ++W) {
    long double below = 0.0L, above = 0.0L;
    for (long long j = 0; j <= 15; ++j) (j <= W ? below : above) += brute[j];
    // Near log 1 the complement carries the relative precision.
    const double want = below < 0.5L ? std::log(static_cast<double>(below))
                                     : std::log1p(-static_cast<double>(above));
    CHECK(lower_tail_exact(m, W) == doctest::Approx(want).epsilon(1e-11).scale(1e-4));
  }
  CHECK(lower_tail_exact(m, -1) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("tail_exact is nonincreasing and matches the plain tail sum where it is representable") {
  const PoissonBinomialModel m = build_model(0.9, 1e-12);
  const std::vector<double> p = pmf(m).values;
  double prev = 0.0;
  for (std::size_t V = 0; V <= m.K + 1; ++V) {
    const double t = tail_exact(m, V);
    CHECK(t <= prev);
    prev = t;
    if (V < 40) CHECK(t == doctest::Approx(log_sum_from(p, V)).epsilon(1e-10));
  }
}

TEST_CASE("deep tails stay finite") {
  const PoissonBinomialModel m = build_model(0.99, 1e-12);
  const double t = tail_exact(m, 600);
  CHECK(std::isfinite(t));
  CHECK(t < -700.0);
  CHECK(tail_exact(m, 601) < t);
}

TEST_CASE("sample_count moments and law") {
  const PoissonBinomialModel m = build_model(0.9, 1e-12);
  CHECK(sample_count(m, 99) == sample_count(m, 99));
  const std::size_t n = 100000;
  std::vector<double> hist(m.K + 1, 0.0);
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    const std::size_t c = sample_count(m, seed);
    hist[c] += 1.0;
    sum += static_cast<double>(c);
  }
  CHECK(std::abs(sum / n - m.mean()) <= 3.0 * std::sqrt(variance_l1(0.9) / n));
  CHECK(oracle::chi_square_pvalue(hist, pmf(m).values, static_cast<double>(n)) > 0.01);

  const PoissonBinomialModel tiny = build_model(1e-4, 1e-15);
  std::size_t zeros = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) zeros += sample_count(tiny, seed) == 0;
  CHECK(zeros >= 9990);
}

TEST_CASE("log_mgf_centered derivatives and convexity") {
  const PoissonBinomialModel m = build_model(0.9, 1e-12);
  CHECK(log_mgf_centered(m, 0.0) == 0.0);
  const double h = 1e-5;
  CHECK(std::abs((log_mgf_centered(m, h) - log_mgf_centered(m, -h)) / (2.0 * h)) <= 1e-8);
  const double h2 = 1e-3;
  const double second =
      (log_mgf_centered(m, h2) - 2.0 * log_mgf_centered(m, 0.0) + log_mgf_centered(m, -h2)) / (h2 * h2);
  CHECK(second == doctest::Approx(m.variance()).epsilon(1e-6));

  const double step = 0.25;
  for (double s = -40.0; s <= 40.0; s += step) {
    const double d2 = log_mgf_centered(m, s + step) - 2.0 * log_mgf_centered(m, s) +
                      log_mgf_centered(m, s - step);
    CHECK(d2 >= -1e-9 * std::max(1.0, std::abs(log_mgf_centered(m, s))));
  }
  CHECK(std::isfinite(log_mgf_centered(m, 700.0)));
  CHECK(std::isfinite(log_mgf_centered(m, -700.0)));
  CHECK(log_mgf(m, 0.0) == 0.0);
  CHECK(tilted_mean(m, 0.0) == doctest::Approx(m.mean()).epsilon(1e-14));
  const std::vector<double> tp = tilted_probs(m, 1.0);
  double tm = 0.0;
  for (double q : tp) tm += q;
  CHECK(tm == doctest::Approx(tilted_mean(m, 1.0)).epsilon(1e-13));
}

TEST_CASE("scaled_log_mgf limits") {
  {
    const PoissonBinomialModel m = build_model(0.9, 1e-12);
    CHECK(scaled_log_mgf(m, 1.0, 0.0) == 0.0);
  }
  // alpha = 0.75, lambda = 1: monotone approach to 1/2.
  double prev_gap = 1e300;
  for (int j = 6; j <= 12; ++j) {
    const PoissonBinomialModel m = build_model(1.0 - std::ldexp(1.0, -j), 1e-12);
    const double gap = std::abs(scaled_log_mgf(m, 0.75, 1.0) - 0.5);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.05);

  const PoissonBinomialModel m = build_model(0.999, 1e-12);
  const double target = 2.0 - 2.0 * specials::dilog(1.0 - std::exp(-1.0));
  CHECK(std::abs(scaled_log_mgf(m, 1.0, -1.0) - target) <= 1e-2);
  CHECK(target == doctest::Approx(limiting_log_mgf(1.0, -1.0)).epsilon(1e-14));

  // Pointwise trend toward the limit on a lambda grid at alpha = 1 and 2.
  for (double alpha : {1.0, 2.0}) {
    for (double lambda : {-1.5, -0.5, 0.5, 1.5}) {
      double prev = 1e300;
      for (int j = 6; j <= 12; j += 2) {
        const PoissonBinomialModel mj = build_model(1.0 - std::ldexp(1.0, -j), 1e-12);
        const double gap = std::abs(scaled_log_mgf(mj, alpha, lambda) - limiting_log_mgf(alpha, lambda));
        CHECK((gap < prev || gap < 1e-9));
        prev = gap;
      }
    }
  }
}
