#pragma once

namespace hypgaf {

enum class Regime { AlphaLow, AlphaOne, AlphaHigh };
enum class WBranch { W0, Wm1, BranchPoint, NotApplicable };

/// An extended-real rate value. `value` may be +inf; `lambda` is the
/// stationary point used on the alpha = 1 branches and NaN elsewhere.
struct RateResult {
  double value = 0.0;
  Regime regime = Regime::AlphaLow;
  WBranch branch = WBranch::NotApplicable;
  double lambda = 0.0;
};

/// Throws DomainError unless alpha > 1/2.
Regime regime_of(double alpha);

const char* to_string(Regime regime);
const char* to_string(WBranch branch);

/// Limiting scaled log-MGF Lambda(lambda) of the centered count.
double limiting_log_mgf(double alpha, double lambda);

/// y (x + 2) + 2 Li2(1 - e^y), whose stationary points in y give the
/// alpha = 1 rate function.
double h_alpha_one(double y, double x);

/// Stationary point lambda_j(x) = (x+2)/2 + W_j(-(x+2)/2 e^{-(x+2)/2}),
/// with W_{-1} for -2 < x < 0 and W_0 for x >= 0.
double stationary_lambda(double x);

/// Closed-form Legendre transform of limiting_log_mgf.
RateResult rate_function(double alpha, double x);

/// Tail constant c(t), t > 0.
double c_of_t(double alpha, double t);

struct LegendreResult {
  double value = 0.0;
  double argmax = 0.0;
  bool diverged = false;
};

/// sup over lambda of lambda x - Lambda(lambda) by golden-section search.
/// Reports value = +inf and diverged = true when the supremum is not
/// attained within |lambda| <= 1e4 or the objective passes 1e12.
LegendreResult legendre_numeric(double alpha, double x);

}  // namespace hypgaf
