#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hypgaf/exact_l1.hpp"
#include "hypgaf/gaf_model.hpp"
#include "hypgaf/zero_counter.hpp"

namespace hypgaf {

struct McConfig {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 1;
  double epsilon_tail = 1e-12;
  std::size_t initial_nodes = 512;
  /// Winding refinement cap; past it the count falls back to root finding.
  std::size_t max_nodes = 16384;
  double min_modulus_factor = 10.0;
  /// Fresh sub-seeds tried for a replicate whose count cannot be certified.
  unsigned max_resamples = 8;
  /// Abort when more than this fraction of replicates stays uncertified.
  double max_unreliable_fraction = 0.01;
};

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; the first exception is rethrown after all workers
/// stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Zero counts of independent GAF replicates inside |z| <= r. Replicate i
/// uses stream_seed(seed, i); a resample attempt a of replicate i uses
/// stream_seed(stream_seed(seed, i), a + 1).
struct ReplicateCounts {
  std::vector<std::size_t> counts;
  std::size_t resamples = 0;
  std::size_t root_fallbacks = 0;
  /// Replicates still uncertified after all resample attempts; their counts
  /// are excluded from `counts`.
  std::size_t unreliable = 0;
};

ReplicateCounts replicate_counts(double L, double r, std::size_t trials, std::uint64_t seed,
                                 const McConfig& cfg = {});

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double stderr_mean = 0.0;
  std::size_t trials = 0;
  std::size_t resamples = 0;
  std::size_t root_fallbacks = 0;
  std::size_t unreliable = 0;
  std::vector<std::size_t> counts;
};

Moments empirical_moments(double L, double r, std::size_t trials, std::uint64_t seed,
                          const McConfig& cfg = {});

enum class TailMethod { ExactDP, PlainMC, TiltedMC };
const char* to_string(TailMethod method);

struct TailEstimate {
  double p_hat = 0.0;
  double log_p = 0.0;
  double stderr = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t replicates = 0;
  TailMethod method = TailMethod::ExactDP;
  /// Plain MC saw no hits; ci_high is then a one-sided 95% Wilson bound.
  bool zero_hits = false;
  double tv_bound = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ95OneSided = 1.6448536269514722;

/// Wilson score interval for `hits` successes in `n` trials.
std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n, double z = kZ95);

TailEstimate tail_exact_estimate(const PoissonBinomialModel& model, std::size_t V);

TailEstimate tail_plain_mc(double L, double r, std::size_t V, std::size_t trials,
                           std::uint64_t seed, const McConfig& cfg = {});

struct TiltedTail {
  TailEstimate estimate;
  double tilt = 0.0;
  /// Mean and standard error of the likelihood ratio alone (expected 1).
  double weight_mean = 0.0;
  double weight_stderr = 0.0;
  /// Standard error of log_p by the delta method.
  double log_stderr = 0.0;
};

/// Importance sampling under the exponential tilt whose mean is V. The
/// interval is the normal interval p_hat +- 1.96 stderr clipped to [0, 1].
TiltedTail tail_tilted_l1(const PoissonBinomialModel& model, std::size_t V, std::size_t trials,
                          std::uint64_t seed, unsigned threads = 1);

/// Truncation that keeps tails at V accurate relative to r^(2V): the
/// smallest K with r^(2(K+1)) / (1 - r^2) <= epsilon_tv r^(2V).
PoissonBinomialModel build_model_for_tail(double r, double epsilon_tv, std::size_t V);

struct DeviationRow {
  int j = 0;
  double r = 0.0;
  double mu = 0.0;
  double v = 0.0;
  std::size_t upper = 0;
  long long lower = 0;
  std::size_t K = 0;
  double log_p = 0.0;
  double c = 0.0;
  double ratio = 0.0;
};

/// For r_j = 1 - 2^-j: -log P[|n - mu| >= t v^alpha] / (c(t) v^(2 alpha - 1))
/// from the exact law, with thresholds ceil(mu + t v^alpha) and
/// floor(mu - t v^alpha).
std::vector<DeviationRow> deviation_scaling_l1(double alpha, double t, int j_min, int j_max,
                                               double epsilon_tv = 1e-12);

struct OvercrowdingConfig {
  double rule_constant = 2.0;
  /// Require V >= rule_constant / (1 - r) * log(1 / (1 - r)).
  bool enforce_assumption = true;
  double epsilon_tv = 1e-12;
};

struct OvercrowdingRow {
  double r = 0.0;
  std::size_t V = 0;
  std::size_t K = 0;
  double neg_log_p = 0.0;
  double normalized = 0.0;
};

/// ceil(C / (1 - r) * log(1 / (1 - r))).
std::size_t overcrowding_threshold(double r, double C);

std::vector<OvercrowdingRow> overcrowding_scaling_l1(const std::vector<double>& r_grid,
                                                     const OvercrowdingConfig& cfg = {});
std::vector<OvercrowdingRow> overcrowding_scaling_l1(
    const std::vector<std::pair<double, std::size_t>>& queries, const OvercrowdingConfig& cfg = {});

struct CertificateReport {
  std::vector<Complex> coeffs;
  std::size_t m = 0;
  double L = 0.0;
  double r = 0.0;
  /// min over the contour of |c_m z^m| - |f(z) - c_m z^m|, less the tail bound.
  double rouche_margin = 0.0;
  double worst_theta = 0.0;
  double tail_bound = 0.0;
  std::size_t verified_count = 0;
};

inline constexpr std::size_t kCertificateNodes = 4096;

/// Deterministic polynomial whose coefficients sit at safe extremes of the
/// overcrowding events, so that the z^m term dominates on |z| = r.
/// Throws CertificateFailed when m is outside the admissible regime or the
/// dominance check fails.
CertificateReport build_certificate(double L, double r, std::size_t m, std::uint64_t seed,
                                    const McConfig& cfg = {});

}  // namespace hypgaf
