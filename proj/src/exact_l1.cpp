#include "hypgaf/exact_l1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hypgaf/errors.hpp"
#include "hypgaf/gaf_model.hpp"
#include "hypgaf/rng.hpp"

namespace hypgaf {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTrimRelative = 1e-300;

void check_r(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("PoissonBinomialModel: r must lie in (0, 1)");
}

double tv_for(double r, std::size_t K) {
  return std::exp(2.0 * static_cast<double>(K + 1) * std::log(r)) / (1.0 - r * r);
}

void check_pmf_size(std::size_t K) {
  if (K > kMaxPmfTerms) {
    std::ostringstream msg;
    msg << "pmf: K = " << K << " exceeds the cap " << kMaxPmfTerms;
    throw ResourceError(msg.str());
  }
}

// log(1 - p + p e^s) without overflow or cancellation.
double log_bernoulli_mgf(double p, double s) {
  if (s <= 0.0) return std::log1p(p * std::expm1(s));
  return s + std::log(p + (1.0 - p) * std::exp(-s));
}

// Tilt s at which the tilted mean equals target, for mean < target < K.
double solve_tilt_up(const PoissonBinomialModel& model, double target) {
  double lo = 0.0;
  double hi = 1.0;
  while (tilted_mean(model, hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw NumericRangeError("tail_exact: tilt outside representable range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (tilted_mean(model, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_tilt_down(const PoissonBinomialModel& model, double target) {
  double lo = -1.0;
  double hi = 0.0;
  while (tilted_mean(model, lo) > target) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e6) throw NumericRangeError("lower_tail_exact: tilt outside representable range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, -lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    (tilted_mean(model, mid) > target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

double PoissonBinomialModel::mean() const {
  Kahan k;
  for (double p : probs) k.add(p);
  return k.sum;
}

double PoissonBinomialModel::variance() const {
  Kahan k;
  for (double p : probs) k.add(p * (1.0 - p));
  return k.sum;
}

PoissonBinomialModel build_model_terms(double r, std::size_t K) {
  check_r(r);
  if (K > kMaxModelTerms) throw ResourceError("build_model: K exceeds 1e8");
  PoissonBinomialModel m;
  m.r = r;
  m.K = K;
  m.tv_bound = tv_for(r, K);
  m.probs.resize(K);
  const double log_r2 = 2.0 * std::log(r);
  for (std::size_t k = 1; k <= K; ++k) m.probs[k - 1] = std::exp(log_r2 * static_cast<double>(k));
  return m;
}

PoissonBinomialModel build_model(double r, double epsilon_tv) {
  check_r(r);
  if (!(epsilon_tv > 0.0 && epsilon_tv < 1.0)) {
    throw DomainError("build_model: epsilon_tv must lie in (0, 1)");
  }
  // r^(2(K+1)) <= eps (1 - r^2)  <=>  K + 1 >= log(eps (1 - r^2)) / log(r^2).
  const double need = (std::log(epsilon_tv) + std::log1p(-r * r)) / (2.0 * std::log(r));
  if (need - 1.0 > static_cast<double>(kMaxModelTerms)) {
    throw ResourceError("build_model: required K exceeds 1e8");
  }
  auto K = static_cast<std::size_t>(std::max(1.0, std::ceil(need) - 1.0));
  while (K > 1 && tv_for(r, K - 1) <= epsilon_tv) --K;
  while (tv_for(r, K) > epsilon_tv) ++K;
  return build_model_terms(r, K);
}

std::vector<double> poisson_binomial_pmf(std::span<const double> probs) {
  const std::size_t K = probs.size();
  check_pmf_size(K);
  std::vector<double> cur(K + 1, 0.0);
  std::vector<double> next(K + 1, 0.0);
  cur[0] = 1.0;
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive window of retained states
  for (std::size_t k = 0; k < K; ++k) {
    const double p = probs[k];
    const double q = 1.0 - p;
    next[lo] = cur[lo] * q;
    for (std::size_t j = lo + 1; j <= hi; ++j) next[j] = cur[j] * q + cur[j - 1] * p;
    next[hi + 1] = cur[hi] * p;
    ++hi;
    double peak = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) peak = std::max(peak, next[j]);
    const double floor = kTrimRelative * peak;
    while (lo < hi && next[lo] < floor) ++lo;
    while (hi > lo && next[hi] < floor) --hi;
    std::swap(cur, next);
  }
  std::vector<double> out(K + 1, 0.0);
  std::copy(cur.begin() + static_cast<std::ptrdiff_t>(lo),
            cur.begin() + static_cast<std::ptrdiff_t>(hi + 1),
            out.begin() + static_cast<std::ptrdiff_t>(lo));
  return out;
}

Pmf pmf(const PoissonBinomialModel& model) {
  return Pmf{poisson_binomial_pmf(model.probs), model.tv_bound};
}

double tail_exact(const PoissonBinomialModel& model, std::size_t V) {
  if (V == 0) return 0.0;
  if (V > model.K) return kNegInf;
  check_pmf_size(model.K);
  if (V == model.K) {
    double acc = 0.0;
    for (double p : model.probs) acc += std::log(p);
    return acc;
  }
  const double vd = static_cast<double>(V);
  const double s = vd <= model.mean() ? 0.0 : solve_tilt_up(model, vd);
  const auto q = tilted_probs(model, s);
  const auto law = poisson_binomial_pmf(q);
  Kahan acc;
  for (std::size_t j = model.K + 1; j-- > V;) {
    if (law[j] == 0.0) continue;
    acc.add(law[j] * std::exp(-s * static_cast<double>(j - V)));
  }
  if (!(acc.sum > 0.0)) return kNegInf;
  return log_mgf(model, s) - s * vd + std::log(acc.sum);
}

double lower_tail_exact(const PoissonBinomialModel& model, long long W) {
  if (W < 0) return kNegInf;
  if (static_cast<std::size_t>(W) >= model.K) return 0.0;
  check_pmf_size(model.K);
  if (W == 0) {
    double acc = 0.0;
    for (double p : model.probs) acc += std::log1p(-p);
    return acc;
  }
  const double wd = static_cast<double>(W);
  const double s = wd >= model.mean() ? 0.0 : solve_tilt_down(model, wd);
  const auto q = tilted_probs(model, s);
  const auto law = poisson_binomial_pmf(q);
  Kahan acc;
  for (std::size_t j = 0; j <= static_cast<std::size_t>(W); ++j) {
    if (law[j] == 0.0) continue;
    acc.add(law[j] * std::exp(-s * (static_cast<double>(j) - wd)));
  }
  if (!(acc.sum > 0.0)) return kNegInf;
  return log_mgf(model, s) - s * wd + std::log(acc.sum);
}

std::size_t sample_count(const PoissonBinomialModel& model, std::uint64_t seed) {
  Rng rng(seed);
  std::size_t n = 0;
  for (double p : model.probs) n += rng.uniform_open() < p ? 1 : 0;
  return n;
}

double log_mgf(const PoissonBinomialModel& model, double s) {
  Kahan acc;
  for (double p : model.probs) acc.add(log_bernoulli_mgf(p, s));
  if (!std::isfinite(acc.sum)) throw NumericRangeError("log_mgf: result is not finite");
  return acc.sum;
}

double log_mgf_centered(const PoissonBinomialModel& model, double s) {
  if (!std::isfinite(s)) throw NumericRangeError("log_mgf_centered: s must be finite");
  Kahan acc;
  for (double p : model.probs) acc.add(log_bernoulli_mgf(p, s) - p * s);
  if (!std::isfinite(acc.sum)) throw NumericRangeError("log_mgf_centered: result is not finite");
  return acc.sum;
}

double tilted_mean(const PoissonBinomialModel& model, double s) {
  Kahan acc;
  const double es = std::exp(-s);
  for (double p : model.probs) acc.add(p / (p + (1.0 - p) * es));
  return acc.sum;
}

std::vector<double> tilted_probs(const PoissonBinomialModel& model, double s) {
  std::vector<double> q(model.probs.size());
  const double es = std::exp(-s);
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double p = model.probs[k];
    q[k] = s == 0.0 ? p : p / (p + (1.0 - p) * es);
  }
  return q;
}

double scaled_log_mgf(const PoissonBinomialModel& model, double alpha, double lambda) {
  if (!(alpha > 0.5)) throw DomainError("scaled_log_mgf: alpha must exceed 1/2");
  const double v = variance_l1(model.r);
  const double s = std::pow(v, alpha - 1.0) * lambda;
  Kahan acc;
  acc.add(log_mgf_centered(model, s));
  // Terms k > K are negligible in total variation but not under large tilts.
  // p_k e^s can exceed one after p_k itself underflows, so work with log p_k.
  const double q = model.r * model.r;
  const double log_q = std::log(q);
  double log_p = static_cast<double>(model.K + 1) * log_q;
  for (std::size_t k = model.K + 1;; ++k) {
    const double p = std::exp(log_p);
    const double a = log_p + s;
    double term;
    if (s > 0.0 && a > 0.0) {
      term = a + std::log1p(std::exp(-a) - std::exp(-s)) - p * s;
    } else if (s > 0.0) {
      term = std::log1p(std::exp(a) * -std::expm1(-s)) - p * s;
    } else {
      term = std::log1p(p * std::expm1(s)) - p * s;
    }
    acc.add(term);
    if ((s <= 0.0 || a < -7.0) && std::abs(term) <= 1e-17 * std::abs(acc.sum)) {
      acc.add(term * q / (1.0 - q));
      break;
    }
    if (k - model.K > kMaxModelTerms) throw ResourceError("scaled_log_mgf: omitted terms do not decay");
    log_p += log_q;
  }
  return std::pow(v, -(2.0 * alpha - 1.0)) * acc.sum;
}

}  // namespace hypgaf
