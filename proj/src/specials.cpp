#include "hypgaf/specials.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hypgaf/errors.hpp"

namespace hypgaf::specials {
namespace {

constexpr int kMaxHalleyIterations = 50;

[[noreturn]] void throw_w_domain(Branch branch, double x) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "lambert_w(" << (branch == Branch::Principal ? "Principal" : "Lower")
      << ", " << x << "): argument outside the branch domain";
  throw DomainError(msg.str());
}

// Series in p = sqrt(2(e x + 1)) about the branch point; p > 0 gives W0,
// p < 0 gives W-1.
double branch_point_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 +
                                                                    p * (769.0 / 17280.0)))));
}

double initial_guess(Branch branch, double x) {
  const double p2 = 2.0 * (std::exp(1.0) * x + 1.0);
  const double p = std::sqrt(std::max(p2, 0.0));
  if (branch == Branch::Principal) {
    if (p < 0.5) return branch_point_series(p);
    if (x < 3.0) {
      // log1p is a good start on (-0.3, 3); the Halley steps do the rest.
      return x < 0.0 ? x * (1.0 - x) : std::log1p(x) * 0.8;
    }
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
  }
  if (p < 0.5) return branch_point_series(-p);
  // Log-log asymptote towards 0^-.
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

double halley(double x, double w) {
  for (int i = 0; i < kMaxHalleyIterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) {
      break;
    }
  }
  return w;
}

// Power series for |x| <= 1/2.
double dilog_series(double x) {
  double sum = 0.0;
  double term = x;
  for (int n = 1; n < 200; ++n) {
    const double add = term / (static_cast<double>(n) * n);
    sum += add;
    if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
    term *= x;
  }
  return sum;
}

// Li2 on [-1, 1] via the series and the reflection x -> 1 - x.
double dilog_unit(double x) {
  if (x > 0.5) {
    if (x == 1.0) return kPiSquaredOver6;
    return kPiSquaredOver6 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
  }
  if (x >= -0.5) return dilog_series(x);
  // x in [-1, -1/2): Landen's identity maps onto y = x/(x-1) in (1/3, 1/2].
  const double y = x / (x - 1.0);
  return -dilog_series(y) - 0.5 * std::log1p(-x) * std::log1p(-x);
}

}  // namespace

double lambert_w(Branch branch, double x) {
  if (std::isnan(x)) throw_w_domain(branch, x);
  if (x < -kInvE) {
    if (x < -kInvE - kBranchPointTolerance) throw_w_domain(branch, x);
    return -1.0;
  }
  if (branch == Branch::Lower && x >= 0.0) throw_w_domain(branch, x);
  if (x == -kInvE) return -1.0;
  if (branch == Branch::Principal) {
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;
  }
  double w = halley(x, initial_guess(branch, x));
  // Keep the result on its side of the branch point.
  if (branch == Branch::Principal && w < -1.0) w = -1.0;
  if (branch == Branch::Lower && w > -1.0) w = -1.0;
  return w;
}

double dilog(double x) {
  if (std::isnan(x) || x > 1.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "dilog(" << x << "): real evaluation requires x <= 1";
    throw DomainError(msg.str());
  }
  if (x >= -1.0) return dilog_unit(x);
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  // Inversion: Li2(-t) = -pi^2/6 - log(t)^2/2 - Li2(-1/t), t > 1.
  const double lt = std::log(-x);
  return -kPiSquaredOver6 - 0.5 * lt * lt - dilog_unit(1.0 / x);
}

double dilog_one_minus_exp(double y) {
  if (std::isnan(y)) throw DomainError("dilog_one_minus_exp: NaN argument");
  constexpr double kLog2 = 0.69314718055994530942;
  if (y < -kLog2) {
    // Reflection about 1/2 with 1 - x = e^y known exactly.
    const double e = std::exp(y);
    return kPiSquaredOver6 - y * std::log1p(-e) - dilog_series(e);
  }
  if (y <= kLog2) return dilog_unit(-std::expm1(y));
  // Inversion with log(e^y - 1) = y + log1p(-e^-y).
  const double lt = y + std::log1p(-std::exp(-y));
  return -kPiSquaredOver6 - 0.5 * lt * lt - dilog_unit(-1.0 / std::expm1(y));
}

double dilog_asymptotic_check(double t) {
  if (!(t >= 10.0)) {
    throw DomainError("dilog_asymptotic_check requires t >= 10");
  }
  const double lt = std::log(t);
  return dilog(-t) + 0.5 * lt * lt;
}

}  // namespace hypgaf::specials
