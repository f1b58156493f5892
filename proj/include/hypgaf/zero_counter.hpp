#pragma once

#include <cstddef>
#include <vector>

#include "hypgaf/gaf_model.hpp"

namespace hypgaf {

struct CountConfig {
  double r = 0.5;
  std::size_t initial_nodes = 512;
  std::size_t max_nodes = std::size_t{1} << 20;
  /// Required ratio between min |f| on the contour and the tail amplitude.
  double min_modulus_factor = 10.0;

  void validate() const;
};

enum class CountMethod { Winding, Roots };

struct CountResult {
  std::size_t count = 0;
  CountMethod method = CountMethod::Winding;
  std::size_t nodes_used = 0;
  double contour_min_modulus = 0.0;
  /// Accumulated phase / 2 pi (Winding only).
  double winding = 0.0;
};

/// All roots of the truncated polynomial, with exact zeros at the origin
/// listed first.
struct RootSet {
  std::vector<Complex> roots;
  std::size_t origin_multiplicity = 0;
  std::size_t sweeps = 0;
  bool used_fallback = false;
};

/// Argument-principle count on |z| = cfg.r with adaptive node doubling.
CountResult count_winding(const GafSample& sample, const CountConfig& cfg);

/// Aberth-Ehrlich root finding (Durand-Kerner fallback) plus Newton polish.
RootSet find_roots(const std::vector<Complex>& coeffs);

/// Number of roots with |z| <= cfg.r (1 + 1e-12). Throws BoundaryAmbiguous
/// for roots within 1e-9 of the circle.
CountResult count_roots(const GafSample& sample, const CountConfig& cfg);
CountResult count_roots(const RootSet& roots, const CountConfig& cfg);

/// Circle average of log|f| on |z| = r by the trapezoidal rule, doubling
/// nodes until successive levels agree to 1e-11.
struct CircleAverage {
  double value = 0.0;
  std::size_t nodes = 0;
};
CircleAverage circle_log_average(const GafSample& sample, double r, const CountConfig& cfg = {});

/// |log|f(0)| + sum_{|root| <= r} log(r/|root|) - circle average of log|f|.
double jensen_residual(const GafSample& sample, double r, const CountConfig& cfg = {});
double jensen_residual(const GafSample& sample, const RootSet& roots, double r,
                       const CountConfig& cfg = {});

struct IntegralInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// n(r) log(R/r) <= log max_{|z|=R} |f| - circle average of log|f| on r,
/// with R = (1 + r)/2; the maximum is taken over 4096 nodes.
IntegralInequality integral_inequality_check(const GafSample& sample, double r,
                                             const CountConfig& cfg = {});
IntegralInequality integral_inequality_check(const GafSample& sample, const RootSet& roots,
                                             double r, const CountConfig& cfg = {});

}  // namespace hypgaf
