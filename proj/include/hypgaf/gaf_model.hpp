#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hypgaf {

using Complex = std::complex<double>;

/// Parameters of a hyperbolic GAF realization: intensity L, the radius the
/// sample must be accurate on, and the relative tail-variance budget.
struct GafParams {
  double L = 1.0;
  double r = 0.5;
  double epsilon_tail = 1e-12;
  /// Hard cap on the truncation degree.
  std::size_t max_degree = 1'000'000;

  /// Throws DomainError unless L > 0, 0 < r < 1 and 0 < epsilon_tail < 1.
  void validate() const;
};

/// Truncated Taylor coefficients xi_n * a_n, n = 0..N, of one realization.
struct GafSample {
  std::vector<Complex> coeffs;
  std::size_t truncation_degree = 0;
  std::uint64_t seed = 0;
  /// Upper bound on sum_{n>N} a_n^2 r^(2n), the variance of the omitted tail
  /// at |z| = radius.
  double tail_sigma2 = 0.0;
  double L = 1.0;
  /// Largest |z| the truncation is certified for.
  double radius = 0.0;

  /// Standard deviation bound of the omitted tail on the valid disk.
  double tail_amplitude() const;

  /// A sample holding an explicit polynomial (no random tail), valid on
  /// |z| <= radius.
  static GafSample from_polynomial(std::vector<Complex> coeffs, double radius);
};

/// a_n^2 = L (L+1) ... (L+n-1) / n!, via the running-product recurrence.
double coefficient_sq(double L, std::size_t n);

/// Tail bound sum_{n>N} a_n^2 r^(2n) using the geometric ratio bound;
/// +inf when the ratio bound is not yet below one.
double tail_variance_bound(double L, double r, std::size_t N);

/// Smallest N whose tail bound is within epsilon_tail * (1 - r^2)^(-L).
std::size_t truncation_degree(const GafParams& params);

GafSample sample_gaf(const GafParams& params, std::uint64_t seed);

/// Horner evaluation of the truncated series. Throws DomainError for
/// |z| > sample.radius.
Complex evaluate(const GafSample& sample, Complex z);

/// Horner evaluation without the radius check; used on contours of
/// explicitly constructed polynomials.
Complex evaluate_polynomial(const std::vector<Complex>& coeffs, Complex z);

/// E|f(z)|^2 = (1 - |z|^2)^(-L).
double pointwise_variance(double L, double modulus);

/// E[n_L(r)] = L r^2 / (1 - r^2).
double expected_zero_count(double L, double r);

enum class VarianceRegime { Super, Critical, Sub };

struct VarianceAsymptotics {
  VarianceRegime regime;
  /// v_L(r) grows like (1-r)^(-exponent), times log(1/(1-r)) when Critical.
  double exponent;
};

VarianceAsymptotics variance_regime(double L);

/// Var[n_1(r)] = r^2 / (1 - r^4).
double variance_l1(double r);

/// Eigenvalues of the covariance matrix of f at N equally spaced points on
/// the circle of radius r0.
struct EigSpectrum {
  std::vector<double> lambdas;
  std::size_t N = 0;
  double r0 = 0.0;
  double L = 1.0;
};

/// lambda_m = N * sum_{n = m mod N} a_n^2 r0^(2n), summed until the modular
/// tails stagnate at machine precision.
EigSpectrum eigen_spectrum(double L, double r0, std::size_t N);

struct SpectrumBoundsConfig {
  double lambda_constant = 10.0;
  double logdet_margin = 10.0;
};

struct SpectrumBounds {
  bool lambda_ok = false;
  double lambda_max = 0.0;
  double lambda_bound = 0.0;
  double logdet = 0.0;
  double logdet_lower = 0.0;
};

/// Checks max lambda <= C N max(1, delta^(1-L)) and evaluates log det against
/// -4 delta N^2 + L N log N - C_margin N. Throws DegenerateSpectrum when any
/// eigenvalue is nonpositive.
SpectrumBounds spectrum_bounds_check(const EigSpectrum& spec, double delta,
                                     const SpectrumBoundsConfig& cfg = {});

}  // namespace hypgaf
