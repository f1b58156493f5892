#include "hypgaf/ldp_rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hypgaf/errors.hpp"
#include "hypgaf/specials.hpp"

namespace hypgaf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPiSquaredOver3 = std::numbers::pi * std::numbers::pi / 3.0;
constexpr double kBranchPointWindow = 1e-9;

constexpr double kBracketStart = 50.0;
constexpr double kBracketCap = 1e4;
constexpr double kObjectiveCap = 1e12;
constexpr double kLambdaTolerance = 1e-12;

// lambda / (1 - e^-lambda), increasing from 0 to inf, equal to 1 at 0.
double phi(double lambda) {
  if (lambda == 0.0) return 1.0;
  return lambda / -std::expm1(-lambda);
}

double phi_prime(double lambda) {
  if (std::abs(lambda) < 1e-4) return 0.5 + lambda / 6.0;
  const double d = -std::expm1(-lambda);
  return (d - lambda * std::exp(-lambda)) / (d * d);
}

}  // namespace

Regime regime_of(double alpha) {
  if (!(alpha > 0.5) || !std::isfinite(alpha)) throw DomainError("alpha must exceed 1/2");
  if (alpha < 1.0) return Regime::AlphaLow;
  if (alpha == 1.0) return Regime::AlphaOne;
  return Regime::AlphaHigh;
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::AlphaLow: return "AlphaLow";
    case Regime::AlphaOne: return "AlphaOne";
    case Regime::AlphaHigh: return "AlphaHigh";
  }
  return "?";
}

const char* to_string(WBranch branch) {
  switch (branch) {
    case WBranch::W0: return "W0";
    case WBranch::Wm1: return "Wm1";
    case WBranch::BranchPoint: return "BranchPoint";
    case WBranch::NotApplicable: return "NotApplicable";
  }
  return "?";
}

double limiting_log_mgf(double alpha, double lambda) {
  switch (regime_of(alpha)) {
    case Regime::AlphaLow: return 0.5 * lambda * lambda;
    case Regime::AlphaOne:
      return -2.0 * lambda - 2.0 * specials::dilog_one_minus_exp(lambda);
    case Regime::AlphaHigh: return lambda > 0.0 ? lambda * lambda : 0.0;
  }
  return kNaN;
}

double h_alpha_one(double y, double x) {
  return y * (x + 2.0) + 2.0 * specials::dilog_one_minus_exp(y);
}

double stationary_lambda(double x) {
  if (!(x > -2.0)) throw DomainError("stationary_lambda: requires x > -2");
  const double u = 0.5 * (x + 2.0);
  if (u == 1.0) return 0.0;
  const auto branch = x < 0.0 ? specials::Branch::Lower : specials::Branch::Principal;
  double lambda = u + specials::lambert_w(branch, -u * std::exp(-u));
  // The W route loses digits next to the branch point; polish on
  // phi(lambda) = u, which is well conditioned there.
  for (int i = 0; i < 8; ++i) {
    const double step = (phi(lambda) - u) / phi_prime(lambda);
    if (!std::isfinite(step)) break;
    lambda -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(lambda))) break;
  }
  return lambda;
}

RateResult rate_function(double alpha, double x) {
  RateResult out;
  out.regime = regime_of(alpha);
  out.lambda = kNaN;
  switch (out.regime) {
    case Regime::AlphaLow:
      out.value = 0.5 * x * x;
      return out;
    case Regime::AlphaHigh:
      out.value = x >= 0.0 ? 0.25 * x * x : kInf;
      return out;
    case Regime::AlphaOne: break;
  }
  if (std::abs(x + 2.0) < kBranchPointWindow) {
    out.branch = WBranch::BranchPoint;
    out.value = kPiSquaredOver3;
    return out;
  }
  if (x < -2.0) {
    out.value = kInf;
    return out;
  }
  out.branch = x < 0.0 ? WBranch::Wm1 : WBranch::W0;
  out.lambda = stationary_lambda(x);
  out.value = std::max(0.0, h_alpha_one(out.lambda, x));
  return out;
}

double c_of_t(double alpha, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("c_of_t: t must be positive");
  switch (regime_of(alpha)) {
    case Regime::AlphaLow: return 0.5 * t * t;
    case Regime::AlphaHigh: return 0.25 * t * t;
    case Regime::AlphaOne: break;
  }
  const double s = t + 2.0;
  const double u = 0.5 * s;
  const double w = specials::lambert_w(specials::Branch::Principal, -u * std::exp(-u));
  return 0.5 * s * s + 2.0 * specials::dilog_one_minus_exp(u + w) + s * w;
}

LegendreResult legendre_numeric(double alpha, double x) {
  regime_of(alpha);
  LegendreResult out;
  const auto f = [&](double lambda) { return lambda * x - limiting_log_mgf(alpha, lambda); };
  // Concave objective: grow each end while it still rises beyond rounding.
  const auto rising = [&](double end) {
    const double fe = f(end);
    const double fm = f(0.5 * end);
    return fe > fm + 1e-10 * std::max(1.0, std::abs(fm));
  };
  const auto diverged = [&] {
    out.value = kInf;
    out.diverged = true;
    return out;
  };
  double lo = -kBracketStart;
  double hi = kBracketStart;
  while (rising(lo)) {
    if (f(lo) > kObjectiveCap || lo <= -kBracketCap) return diverged();
    lo = std::max(2.0 * lo, -kBracketCap);
  }
  while (rising(hi)) {
    if (f(hi) > kObjectiveCap || hi >= kBracketCap) return diverged();
    hi = std::min(2.0 * hi, kBracketCap);
  }

  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 400; ++it) {
    const double tol = std::max(kLambdaTolerance,
                                8.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(std::abs(a), std::abs(b)));
    if (b - a <= tol) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  if (fc >= fd) {
    out.value = fc;
    out.argmax = c;
  } else {
    out.value = fd;
    out.argmax = d;
  }
  if (out.value > kObjectiveCap) return diverged();
  return out;
}

}  // namespace hypgaf
