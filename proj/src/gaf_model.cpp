#include "hypgaf/gaf_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hypgaf/errors.hpp"
#include "hypgaf/rng.hpp"

namespace hypgaf {

void GafParams::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("GafParams: L must be positive");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("GafParams: r must lie in (0, 1)");
  if (!(epsilon_tail > 0.0 && epsilon_tail < 1.0)) {
    throw DomainError("GafParams: epsilon_tail must lie in (0, 1)");
  }
}

double GafSample::tail_amplitude() const { return std::sqrt(tail_sigma2); }

GafSample GafSample::from_polynomial(std::vector<Complex> coeffs, double radius) {
  GafSample s;
  s.truncation_degree = coeffs.empty() ? 0 : coeffs.size() - 1;
  s.coeffs = std::move(coeffs);
  s.radius = radius;
  return s;
}

double coefficient_sq(double L, std::size_t n) {
  double a2 = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    a2 *= (L + static_cast<double>(k) - 1.0) / static_cast<double>(k);
  }
  return a2;
}

namespace {

// Ratio bound q for the terms t_n = a_n^2 r^(2n), n > N: t_{n+1}/t_n =
// r^2 (L+n)/(n+1) is monotone in n with limit r^2.
double tail_ratio_bound(double L, double r2, std::size_t N) {
  const double first = r2 * (L + static_cast<double>(N + 1)) / static_cast<double>(N + 2);
  return std::max(first, r2);
}

}  // namespace

double tail_variance_bound(double L, double r, std::size_t N) {
  const double r2 = r * r;
  const double q = tail_ratio_bound(L, r2, N);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  const double log_term = std::log(coefficient_sq(L, N + 1)) +
                          2.0 * static_cast<double>(N + 1) * std::log(r);
  return std::exp(log_term) / (1.0 - q);
}

std::size_t truncation_degree(const GafParams& params) {
  params.validate();
  const double r2 = params.r * params.r;
  const double log_budget =
      std::log(params.epsilon_tail) - params.L * std::log1p(-r2);
  const double log_r2 = std::log(r2);
  // Running log of t_{N+1} = a_{N+1}^2 r^(2(N+1)).
  double log_next = std::log(params.L) + log_r2;
  for (std::size_t N = 0; N <= params.max_degree; ++N) {
    const double q = tail_ratio_bound(params.L, r2, N);
    if (q < 1.0 && log_next - std::log1p(-q) <= log_budget) return N;
    const double n1 = static_cast<double>(N + 1);
    log_next += std::log((params.L + n1) / (n1 + 1.0)) + log_r2;
  }
  std::ostringstream msg;
  msg << "truncation degree exceeds cap " << params.max_degree;
  throw ResourceError(msg.str());
}

GafSample sample_gaf(const GafParams& params, std::uint64_t seed) {
  const std::size_t N = truncation_degree(params);
  GafSample s;
  s.truncation_degree = N;
  s.seed = seed;
  s.L = params.L;
  s.radius = params.r;
  s.tail_sigma2 = tail_variance_bound(params.L, params.r, N);
  s.coeffs.resize(N + 1);
  Rng rng(seed);
  double a2 = 1.0;
  for (std::size_t n = 0; n <= N; ++n) {
    if (n > 0) a2 *= (params.L + static_cast<double>(n) - 1.0) / static_cast<double>(n);
    s.coeffs[n] = rng.complex_gaussian() * std::sqrt(a2);
  }
  return s;
}

Complex evaluate_polynomial(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex evaluate(const GafSample& sample, Complex z) {
  if (std::abs(z) > sample.radius * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "evaluate: |z| = " << std::abs(z) << " exceeds the certified radius "
        << sample.radius;
    throw DomainError(msg.str());
  }
  return evaluate_polynomial(sample.coeffs, z);
}

double pointwise_variance(double L, double modulus) {
  return std::pow(1.0 - modulus * modulus, -L);
}

double expected_zero_count(double L, double r) {
  const double r2 = r * r;
  return L * r2 / (1.0 - r2);
}

VarianceAsymptotics variance_regime(double L) {
  if (L > 0.5) return {VarianceRegime::Super, 1.0};
  if (L == 0.5) return {VarianceRegime::Critical, 1.0};
  return {VarianceRegime::Sub, 2.0 - 2.0 * L};
}

double variance_l1(double r) {
  const double r2 = r * r;
  return r2 / (1.0 - r2 * r2);
}

EigSpectrum eigen_spectrum(double L, double r0, std::size_t N) {
  if (N == 0) throw DomainError("eigen_spectrum: N must be positive");
  if (!(r0 > 0.0 && r0 < 1.0)) throw DomainError("eigen_spectrum: r0 must lie in (0, 1)");
  if (!(L > 0.0)) throw DomainError("eigen_spectrum: L must be positive");
  EigSpectrum spec;
  spec.N = N;
  spec.r0 = r0;
  spec.L = L;
  spec.lambdas.assign(N, 0.0);
  const double r2 = r0 * r0;
  // Terms peak near n = (L r^2 - 1)/(1 - r^2) and decay geometrically after.
  const double peak = std::max(0.0, (L * r2 - 1.0) / (1.0 - r2));
  double term = 1.0;
  std::size_t quiet = 0;
  for (std::size_t n = 0;; ++n) {
    if (n > 0) term *= r2 * (L + static_cast<double>(n) - 1.0) / static_cast<double>(n);
    double& bucket = spec.lambdas[n % N];
    bucket += term;
    if (static_cast<double>(n) > peak && term <= 1e-17 * bucket) {
      if (++quiet >= N) break;
    } else {
      quiet = 0;
    }
    if (term == 0.0) break;
  }
  for (double& lam : spec.lambdas) lam *= static_cast<double>(N);
  return spec;
}

SpectrumBounds spectrum_bounds_check(const EigSpectrum& spec, double delta,
                                     const SpectrumBoundsConfig& cfg) {
  SpectrumBounds out;
  const double N = static_cast<double>(spec.N);
  double logdet = 0.0;
  double lmax = 0.0;
  for (std::size_t m = 0; m < spec.lambdas.size(); ++m) {
    const double lam = spec.lambdas[m];
    if (!(lam > 0.0)) {
      std::ostringstream msg;
      msg << "eigenvalue " << m << " is not positive";
      throw DegenerateSpectrum(msg.str());
    }
    logdet += std::log(lam);
    lmax = std::max(lmax, lam);
  }
  out.lambda_max = lmax;
  out.lambda_bound = cfg.lambda_constant * N * std::max(1.0, std::pow(delta, 1.0 - spec.L));
  out.lambda_ok = lmax <= out.lambda_bound;
  out.logdet = logdet;
  out.logdet_lower = -4.0 * delta * N * N + spec.L * N * std::log(N) - cfg.logdet_margin * N;
  return out;
}

}  // namespace hypgaf
