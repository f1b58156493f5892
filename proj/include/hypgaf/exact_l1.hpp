#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hypgaf {

/// The count n_1(r) as a sum of independent Bernoulli(r^(2k)), k = 1..K.
/// Omitting k > K moves the law by at most tv_bound in total variation.
struct PoissonBinomialModel {
  double r = 0.0;
  std::vector<double> probs;
  std::size_t K = 0;
  double tv_bound = 0.0;

  /// Sum of the success probabilities of the truncated model.
  double mean() const;
  /// Sum of p_k (1 - p_k) of the truncated model.
  double variance() const;
};

inline constexpr std::size_t kMaxModelTerms = 100'000'000;
inline constexpr std::size_t kMaxPmfTerms = 1'000'000;

/// Smallest K with r^(2(K+1)) / (1 - r^2) <= epsilon_tv.
PoissonBinomialModel build_model(double r, double epsilon_tv);

/// Model with an explicit number of Bernoulli terms.
PoissonBinomialModel build_model_terms(double r, std::size_t K);

struct Pmf {
  std::vector<double> values;
  double tv_bound = 0.0;
};

/// Law of a sum of independent Bernoulli(probs[k]) by sequential
/// convolution. Entries below 1e-300 of the running peak are dropped.
std::vector<double> poisson_binomial_pmf(std::span<const double> probs);

Pmf pmf(const PoissonBinomialModel& model);

/// log P[n >= V] for the truncated model; -inf when V > K.
///
/// The law is first tilted so that its mean sits at V, which keeps the
/// relevant part of the distribution inside double range; the tail is then
/// summed from the far end inward with Kahan compensation. With V at or
/// below the mean the tilt is zero and this is the plain pmf tail sum.
double tail_exact(const PoissonBinomialModel& model, std::size_t V);

/// log P[n <= W] for the truncated model; -inf when W < 0.
double lower_tail_exact(const PoissonBinomialModel& model, long long W);

std::size_t sample_count(const PoissonBinomialModel& model, std::uint64_t seed);

/// log E[exp(s n)] of the truncated model.
double log_mgf(const PoissonBinomialModel& model, double s);

/// log E[exp(s (n - mean))].
double log_mgf_centered(const PoissonBinomialModel& model, double s);

/// d/ds log E[exp(s n)], i.e. the mean of the exponentially tilted law.
double tilted_mean(const PoissonBinomialModel& model, double s);

/// Success probabilities of the law tilted by exp(s n).
std::vector<double> tilted_probs(const PoissonBinomialModel& model, double s);

/// eps_r Lambda_r(lambda / eps_r) with eps_r = v_1(r)^-(2 alpha - 1). The
/// Bernoulli terms beyond the model length are summed as well, since tilts
/// of order 1 / (1 - r) make them count.
double scaled_log_mgf(const PoissonBinomialModel& model, double alpha, double lambda);

}  // namespace hypgaf
