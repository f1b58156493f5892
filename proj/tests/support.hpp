// Test-side oracles, written independently of the library code paths.
#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <cstddef>
#include <vector>

namespace oracle {

// Law of a Bernoulli sum by enumerating all 2^K outcomes.
inline std::vector<double> enumerate_pmf(const std::vector<double>& probs) {
  const std::size_t K = probs.size();
  std::vector<double> out(K + 1, 0.0);
  for (unsigned long mask = 0; mask < (1UL << K); ++mask) {
    double p = 1.0;
    std::size_t ones = 0;
    for (std::size_t k = 0; k < K; ++k) {
      if (mask & (1UL << k)) {
        p *= probs[k];
        ++ones;
      } else {
        p *= 1.0 - probs[k];
      }
    }
    out[ones] += p;
  }
  return out;
}

// Pearson chi-square p-value. Adjacent bins are pooled until each has
// expected count >= 5; a short final group joins its neighbour.
inline double chi_square_pvalue(const std::vector<double>& observed,
                                const std::vector<double>& probs, double n) {
  std::vector<double> obs;
  std::vector<double> exp;
  double o = 0.0;
  double e = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    o += k < observed.size() ? observed[k] : 0.0;
    e += probs[k] * n;
    if (e >= 5.0) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  for (std::size_t k = probs.size(); k < observed.size(); ++k) o += observed[k];
  if ((o > 0.0 || e > 0.0) && !exp.empty()) {
    obs.back() += o;
    exp.back() += e;
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  const double df = static_cast<double>(obs.size()) - 1.0;
  if (df < 1.0) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Lambert W by bisection on w e^w = x over a bracket on the requested side
// of -1.
inline double lambert_w_bisect(bool principal, double x) {
  double lo, hi;
  if (principal) {
    lo = -1.0;
    hi = std::max(1.0, std::log1p(std::max(x, 0.0)) + 1.0);
  } else {
    lo = -1.0;
    while (lo * std::exp(lo) < x) lo *= 2.0;  // w e^w increases toward 0- as w -> -inf
    hi = -1.0;
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = mid * std::exp(mid) - x;
    const bool increasing = principal;
    if ((f < 0.0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Li2(x) = -int_0^1 log(1 - x t) / t dt by tanh-sinh quadrature.
inline double dilog_quadrature(double x) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const auto f = [x](double t) { return t == 0.0 ? -x : std::log1p(-x * t) / t; };
  return -integrator.integrate(f, 0.0, 1.0, 1e-15);
}

// Eigenvalue m of the covariance of f at N equispaced points on |z| = r0:
// the circulant matrix K(j - k) = sum_n a_n^2 r0^(2n) e^(2 pi i (j-k) n / N)
// is applied to the m-th Fourier vector and the Rayleigh quotient taken.
inline double circulant_eigenvalue(double L, double r0, std::size_t N, std::size_t m) {
  // Long double: the smallest eigenvalues are ~1e-6 of the kernel entries
  // they are computed from.
  using R = long double;
  using C = std::complex<R>;
  const R two_pi = 2.0L * std::numbers::pi_v<R>;
  std::vector<C> kernel(N, C(0.0L, 0.0L));
  R a2 = 1.0L;
  R w = 1.0L;
  for (std::size_t n = 0; n < 200000; ++n) {
    if (n > 0) {
      a2 *= (static_cast<R>(L) + static_cast<R>(n) - 1.0L) / static_cast<R>(n);
      w *= static_cast<R>(r0) * static_cast<R>(r0);
    }
    const R term = a2 * w;
    for (std::size_t d = 0; d < N; ++d) {
      kernel[d] += term * std::polar(R(1), two_pi * static_cast<R>((d * n) % N) / static_cast<R>(N));
    }
    if (n > 100 && term < 1e-26L) break;
  }
  std::vector<C> u(N);
  for (std::size_t j = 0; j < N; ++j) {
    u[j] = std::polar(1.0L / std::sqrt(static_cast<R>(N)), two_pi * static_cast<R>(j * m % N) / static_cast<R>(N));
  }
  C q(0.0L, 0.0L);
  for (std::size_t j = 0; j < N; ++j) {
    C row(0.0L, 0.0L);
    for (std::size_t k = 0; k < N; ++k) row += kernel[(j + N - k) % N] * u[k];
    q += std::conj(u[j]) * row;
  }
  return static_cast<double>(q.real());
}

}  // namespace oracle
