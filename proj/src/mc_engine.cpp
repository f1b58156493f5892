#include "hypgaf/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "hypgaf/errors.hpp"
#include "hypgaf/ldp_rates.hpp"
#include "hypgaf/rng.hpp"

namespace hypgaf {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

struct ReplicateOutcome {
  std::size_t count = 0;
  unsigned resamples = 0;
  bool root_fallback = false;
  bool reliable = false;
};

ReplicateOutcome count_one(const GafParams& params, const CountConfig& ccfg, std::uint64_t base,
                           unsigned max_resamples) {
  ReplicateOutcome out;
  for (unsigned a = 0; a <= max_resamples; ++a) {
    const std::uint64_t seed = a == 0 ? base : stream_seed(base, a);
    const GafSample sample = sample_gaf(params, seed);
    try {
      out.count = count_winding(sample, ccfg).count;
      out.reliable = true;
      return out;
    } catch (const UnreliableContour&) {
    } catch (const NonConvergent&) {
      try {
        out.count = count_roots(sample, ccfg).count;
        out.root_fallback = true;
        out.reliable = true;
        return out;
      } catch (const ReliabilityError&) {
      }
    }
    ++out.resamples;
  }
  return out;
}

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
          stop = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

ReplicateCounts replicate_counts(double L, double r, std::size_t trials, std::uint64_t seed,
                                 const McConfig& cfg) {
  GafParams params{L, r, cfg.epsilon_tail};
  params.validate();
  CountConfig ccfg;
  ccfg.r = r;
  ccfg.initial_nodes = cfg.initial_nodes;
  ccfg.max_nodes = cfg.max_nodes;
  ccfg.min_modulus_factor = cfg.min_modulus_factor;
  ccfg.validate();
  truncation_degree(params);  // surface resource errors before spawning work

  std::vector<ReplicateOutcome> outcomes(trials);
  parallel_for(trials, cfg.threads, [&](std::size_t i) {
    outcomes[i] = count_one(params, ccfg, stream_seed(seed, i), cfg.max_resamples);
  });

  ReplicateCounts out;
  out.counts.reserve(trials);
  for (const auto& o : outcomes) {
    out.resamples += o.resamples;
    out.root_fallbacks += o.root_fallback ? 1 : 0;
    if (o.reliable) {
      out.counts.push_back(o.count);
    } else {
      ++out.unreliable;
    }
  }
  if (static_cast<double>(out.unreliable) > cfg.max_unreliable_fraction * static_cast<double>(trials)) {
    std::ostringstream msg;
    msg << "experiment aborted: " << out.unreliable << " of " << trials
        << " replicates uncertified after " << cfg.max_resamples << " resamples (L = " << L
        << ", r = " << r << ", resamples = " << out.resamples << ")";
    throw ExperimentAborted(msg.str());
  }
  return out;
}

Moments empirical_moments(double L, double r, std::size_t trials, std::uint64_t seed,
                          const McConfig& cfg) {
  if (trials < 100) throw DomainError("empirical_moments: trials must be at least 100");
  auto rc = replicate_counts(L, r, trials, seed, cfg);
  Moments m;
  m.trials = rc.counts.size();
  m.resamples = rc.resamples;
  m.root_fallbacks = rc.root_fallbacks;
  m.unreliable = rc.unreliable;
  const double n = static_cast<double>(m.trials);
  double sum = 0.0;
  for (auto c : rc.counts) sum += static_cast<double>(c);
  m.mean = sum / n;
  double ss = 0.0;
  for (auto c : rc.counts) {
    const double d = static_cast<double>(c) - m.mean;
    ss += d * d;
  }
  m.variance = ss / (n - 1.0);
  m.stderr_mean = std::sqrt(m.variance / n);
  m.counts = std::move(rc.counts);
  return m;
}

const char* to_string(TailMethod method) {
  switch (method) {
    case TailMethod::ExactDP: return "ExactDP";
    case TailMethod::PlainMC: return "PlainMC";
    case TailMethod::TiltedMC: return "TiltedMC";
  }
  return "?";
}

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0)};
}

TailEstimate tail_exact_estimate(const PoissonBinomialModel& model, std::size_t V) {
  TailEstimate est;
  est.method = TailMethod::ExactDP;
  est.log_p = tail_exact(model, V);
  est.p_hat = std::exp(est.log_p);
  est.ci_low = est.p_hat;
  est.ci_high = est.p_hat;
  est.tv_bound = model.tv_bound;
  return est;
}

TailEstimate tail_plain_mc(double L, double r, std::size_t V, std::size_t trials,
                           std::uint64_t seed, const McConfig& cfg) {
  if (trials < 1000) throw DomainError("tail_plain_mc: trials must be at least 1000");
  GafParams params{L, r, cfg.epsilon_tail};
  params.validate();
  TailEstimate est;
  est.method = TailMethod::PlainMC;
  std::size_t hits = 0;
  std::size_t n = trials;
  if (V > 0) {
    const auto rc = replicate_counts(L, r, trials, seed, cfg);
    n = rc.counts.size();
    for (auto c : rc.counts) hits += c >= V ? 1 : 0;
  } else {
    hits = trials;
  }
  est.replicates = n;
  est.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  est.log_p = hits == 0 ? kNegInf : std::log(est.p_hat);
  est.stderr = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n));
  if (hits == 0) {
    est.zero_hits = true;
    const double z2 = kZ95OneSided * kZ95OneSided;
    const double nn = static_cast<double>(n);
    est.ci_low = 0.0;
    est.ci_high = (z2 / nn) / (1.0 + z2 / nn);
  } else {
    std::tie(est.ci_low, est.ci_high) = wilson_interval(hits, n);
  }
  return est;
}

TiltedTail tail_tilted_l1(const PoissonBinomialModel& model, std::size_t V, std::size_t trials,
                          std::uint64_t seed, unsigned threads) {
  if (V > model.K) throw DomainError("tail_tilted_l1: V exceeds the model length");
  if (trials < 2) throw DomainError("tail_tilted_l1: trials must be at least 2");
  const double target = static_cast<double>(V);
  double s = 0.0;
  if (tilted_mean(model, 0.0) < target) {
    double lo = 0.0;
    double hi = 50.0;
    if (tilted_mean(model, hi) < target) {
      throw TiltInfeasible("tail_tilted_l1: no tilt in [0, 50] reaches the threshold");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tilted_mean(model, mid) < target ? lo : hi) = mid;
    }
    s = 0.5 * (lo + hi);
  }
  const auto q = tilted_probs(model, s);
  const double log_m = log_mgf(model, s);

  struct Draw {
    bool hit;
    double log_w;
  };
  std::vector<Draw> draws(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng(stream_seed(seed, i));
    std::size_t count = 0;
    for (double qk : q) count += rng.uniform_open() < qk ? 1 : 0;
    draws[i] = {count >= V, log_m - s * static_cast<double>(count)};
  });

  const double n = static_cast<double>(trials);
  TiltedTail out;
  out.tilt = s;

  // Weight moments, scaled by the largest log-weight.
  double wmax = kNegInf;
  for (const auto& d : draws) wmax = std::max(wmax, d.log_w);
  double wsum = 0.0;
  double wsq = 0.0;
  for (const auto& d : draws) {
    const double w = std::exp(d.log_w - wmax);
    wsum += w;
    wsq += w * w;
  }
  const double wmean = wsum / n;
  const double wvar = std::max(0.0, (wsq - n * wmean * wmean) / (n - 1.0));
  out.weight_mean = std::exp(wmax) * wmean;
  out.weight_stderr = std::exp(wmax) * std::sqrt(wvar / n);

  TailEstimate& est = out.estimate;
  est.method = TailMethod::TiltedMC;
  est.replicates = trials;
  est.tv_bound = model.tv_bound;
  double hmax = kNegInf;
  for (const auto& d : draws) {
    if (d.hit) hmax = std::max(hmax, d.log_w);
  }
  if (hmax == kNegInf) {
    est.zero_hits = true;
    est.log_p = kNegInf;
    out.log_stderr = std::numeric_limits<double>::infinity();
    return out;
  }
  double ysum = 0.0;
  double ysq = 0.0;
  for (const auto& d : draws) {
    if (!d.hit) continue;
    const double y = std::exp(d.log_w - hmax);
    ysum += y;
    ysq += y * y;
  }
  const double ymean = ysum / n;
  const double yvar = std::max(0.0, (ysq - n * ymean * ymean) / (n - 1.0));
  out.log_stderr = std::sqrt(yvar / n) / ymean;
  est.log_p = hmax + std::log(ymean);
  est.p_hat = std::exp(est.log_p);
  est.stderr = est.p_hat * out.log_stderr;
  est.ci_low = std::max(0.0, est.p_hat - kZ95 * est.stderr);
  est.ci_high = std::min(1.0, est.p_hat + kZ95 * est.stderr);
  return out;
}

PoissonBinomialModel build_model_for_tail(double r, double epsilon_tv, std::size_t V) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("build_model_for_tail: r must lie in (0, 1)");
  if (!(epsilon_tv > 0.0 && epsilon_tv < 1.0)) {
    throw DomainError("build_model_for_tail: epsilon_tv must lie in (0, 1)");
  }
  const double log_r2 = 2.0 * std::log(r);
  const double need = static_cast<double>(V) + (std::log(epsilon_tv) + std::log1p(-r * r)) / log_r2;
  if (need > static_cast<double>(kMaxModelTerms)) {
    throw ResourceError("build_model_for_tail: required K exceeds 1e8");
  }
  return build_model_terms(r, static_cast<std::size_t>(std::max(1.0, std::ceil(need) - 1.0)));
}

std::vector<DeviationRow> deviation_scaling_l1(double alpha, double t, int j_min, int j_max,
                                               double epsilon_tv) {
  regime_of(alpha);
  if (!(t > 0.0)) throw DomainError("deviation_scaling_l1: t must be positive");
  if (j_min < 1 || j_max < j_min) throw DomainError("deviation_scaling_l1: invalid j range");
  const double c = c_of_t(alpha, t);
  std::vector<DeviationRow> rows;
  for (int j = j_min; j <= j_max; ++j) {
    DeviationRow row;
    row.j = j;
    row.r = 1.0 - std::ldexp(1.0, -j);
    row.mu = expected_zero_count(1.0, row.r);
    row.v = variance_l1(row.r);
    const double d = t * std::pow(row.v, alpha);
    row.upper = static_cast<std::size_t>(std::ceil(row.mu + d));
    row.lower = static_cast<long long>(std::floor(row.mu - d));
    const auto model = build_model_for_tail(row.r, epsilon_tv, row.upper);
    row.K = model.K;
    const double up = tail_exact(model, row.upper);
    const double lo = row.lower >= 0 ? lower_tail_exact(model, row.lower) : kNegInf;
    row.log_p = log_add_exp(up, lo);
    row.c = c;
    row.ratio = -row.log_p / (c * std::pow(row.v, 2.0 * alpha - 1.0));
    rows.push_back(row);
  }
  return rows;
}

std::size_t overcrowding_threshold(double r, double C) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("overcrowding_threshold: r must lie in (0, 1)");
  const double inv = 1.0 / (1.0 - r);
  return static_cast<std::size_t>(std::ceil(C * inv * std::log(inv)));
}

std::vector<OvercrowdingRow> overcrowding_scaling_l1(const std::vector<double>& r_grid,
                                                     const OvercrowdingConfig& cfg) {
  std::vector<std::pair<double, std::size_t>> queries;
  queries.reserve(r_grid.size());
  for (double r : r_grid) queries.emplace_back(r, overcrowding_threshold(r, cfg.rule_constant));
  return overcrowding_scaling_l1(queries, cfg);
}

std::vector<OvercrowdingRow> overcrowding_scaling_l1(
    const std::vector<std::pair<double, std::size_t>>& queries, const OvercrowdingConfig& cfg) {
  std::vector<OvercrowdingRow> rows;
  rows.reserve(queries.size());
  for (const auto& [r, V] : queries) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("overcrowding_scaling_l1: r must lie in (0, 1)");
    if (V == 0) throw DomainError("overcrowding_scaling_l1: V must be positive");
    if (cfg.enforce_assumption) {
      const double inv = 1.0 / (1.0 - r);
      if (static_cast<double>(V) < cfg.rule_constant * inv * std::log(inv)) {
        std::ostringstream msg;
        msg << "overcrowding_scaling_l1: V = " << V << " is below the threshold rule at r = " << r;
        throw DomainError(msg.str());
      }
    }
    const auto model = build_model_for_tail(r, cfg.epsilon_tv, V);
    OvercrowdingRow row;
    row.r = r;
    row.V = V;
    row.K = model.K;
    row.neg_log_p = -tail_exact(model, V);
    row.normalized = row.neg_log_p / ((1.0 - r) * static_cast<double>(V) * static_cast<double>(V));
    rows.push_back(row);
  }
  return rows;
}

CertificateReport build_certificate(double L, double r, std::size_t m, std::uint64_t seed,
                                    const McConfig& cfg) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("build_certificate: L must be positive");
  if (!(r >= 0.5 && r < 1.0)) {
    throw CertificateFailed("build_certificate: r must lie in [1/2, 1)", nan, nan);
  }
  const double m_floor = std::max(4.0 * expected_zero_count(L, r), 8.0);
  if (static_cast<double>(m) < m_floor) {
    std::ostringstream msg;
    msg << "build_certificate: m = " << m << " is below the admissible floor " << m_floor;
    throw CertificateFailed(msg.str(), nan, nan);
  }

  const double delta = 1.0 - r;
  const double sqrt_delta = std::sqrt(delta);
  const double log_r = std::log(r);
  const double md = static_cast<double>(m);

  // log a_n for n = 0..m, extended on demand below.
  std::vector<double> log_a{0.0};
  const auto extend_log_a = [&](std::size_t n) {
    while (log_a.size() <= n) {
      const double k = static_cast<double>(log_a.size());
      log_a.push_back(log_a.back() + 0.5 * std::log((L + k - 1.0) / k));
    }
  };
  extend_log_a(2 * m);
  const double log_am = log_a[m];
  const double dominant_mod = 8.0 * md * sqrt_delta * std::exp(log_am);
  const double dominant_on_circle = dominant_mod * std::exp(md * log_r);

  // Past 2m the moduli are sqrt(n) a_n / 2; successive terms of
  // sqrt(n) a_n r^n have ratio r sqrt((L + n) / n), decreasing in n.
  const double budget = 1e-12 * dominant_on_circle;
  const auto log_far = [&](std::size_t n) {
    return std::log(0.5) + 0.5 * std::log(static_cast<double>(n)) + log_a[n] +
           static_cast<double>(n) * log_r;
  };
  std::size_t N = 2 * m;
  double tail = 0.0;
  for (;; ++N) {
    if (N > 1'000'000) throw ResourceError("build_certificate: truncation degree exceeds 1e6");
    extend_log_a(N + 1);
    const double nd = static_cast<double>(N + 1);
    const double q = r * std::sqrt((L + nd) / nd);
    if (q < 1.0) {
      tail = std::exp(log_far(N + 1)) / (1.0 - q);
      if (tail <= budget) break;
    }
  }

  Rng rng(seed);
  std::vector<Complex> coeffs(N + 1);
  const double near_mod = 0.5 * sqrt_delta * std::exp(log_am + md * log_r);
  const double mid_mod = 0.5 * std::exp(log_am + md * log_r);
  for (std::size_t n = 0; n <= N; ++n) {
    double mod;
    if (n < m) {
      mod = near_mod * std::exp(-static_cast<double>(n) * log_r);
    } else if (n == m) {
      mod = dominant_mod;
    } else if (n <= 2 * m) {
      mod = mid_mod;
    } else {
      mod = std::exp(log_far(n) - static_cast<double>(n) * log_r);
    }
    coeffs[n] = std::polar(mod, rng.angle());
  }

  CertificateReport rep;
  rep.L = L;
  rep.r = r;
  rep.m = m;
  rep.tail_bound = tail;
  std::vector<Complex> rest = coeffs;
  rest[m] = 0.0;
  rep.rouche_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kCertificateNodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(kCertificateNodes);
    const double gap =
        dominant_on_circle - std::abs(evaluate_polynomial(rest, std::polar(r, theta))) - tail;
    if (gap < rep.rouche_margin) {
      rep.rouche_margin = gap;
      rep.worst_theta = theta;
    }
  }
  if (!(rep.rouche_margin > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "build_certificate: dominance fails at theta = " << rep.worst_theta
        << " with margin " << rep.rouche_margin;
    throw CertificateFailed(msg.str(), rep.rouche_margin, rep.worst_theta);
  }

  GafSample sample = GafSample::from_polynomial(coeffs, r);
  sample.L = L;
  sample.seed = seed;
  sample.tail_sigma2 = tail * tail;
  CountConfig ccfg;
  ccfg.r = r;
  ccfg.initial_nodes = cfg.initial_nodes;
  ccfg.min_modulus_factor = cfg.min_modulus_factor;
  rep.verified_count = count_winding(sample, ccfg).count;
  rep.coeffs = std::move(coeffs);
  return rep;
}

}  // namespace hypgaf
