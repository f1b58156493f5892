#pragma once

namespace hypgaf::specials {

/// Real branches of the Lambert W function.
enum class Branch { Principal, Lower };

inline constexpr double kInvE = 0.36787944117144232160;  // 1/e
inline constexpr double kPiSquaredOver6 = 1.6449340668482264365;

/// Inputs this far below -1/e are treated as the branch point itself.
inline constexpr double kBranchPointTolerance = 1e-14;

/// Solves w * exp(w) = x on the requested real branch.
///
/// Principal is defined on [-1/e, inf) and returns w >= -1; Lower is defined
/// on [-1/e, 0) and returns w <= -1. Throws DomainError outside the domain.
double lambert_w(Branch branch, double x);

/// Real dilogarithm Li2(x) = -int_0^x log(1-u)/u du for x <= 1.
double dilog(double x);

/// Li2(1 - exp(y)) for any real y, without forming exp(y) when it would
/// overflow or round to 1.
double dilog_one_minus_exp(double y);

/// dilog(-t) + log(t)^2 / 2, the correction to the large-argument asymptote.
/// Requires t >= 10.
double dilog_asymptotic_check(double t);

}  // namespace hypgaf::specials
