#include "hypgaf/zero_counter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "hypgaf/errors.hpp"

namespace hypgaf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kZeroCoefficient = 1e-300;
constexpr std::size_t kMaxSweeps = 1000;
constexpr double kBoundaryBand = 1e-9;
constexpr double kInequalityTolerance = 1e-6;
constexpr std::size_t kMaxModulusNodes = 4096;

void check_radius(const GafSample& sample, double r, const char* who) {
  if (!(r > 0.0) || r > sample.radius * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << who << ": radius " << r << " outside the sample's certified radius "
        << sample.radius;
    throw DomainError(msg.str());
  }
}

// Values of f at r e^(2 pi i k / m), k < m, with |z f'(z) / f(z)| alongside;
// the latter bounds the phase speed and exposes grids too coarse to resolve
// it. Both come from one backward DFT of the coefficients c_n r^n (and
// n c_n r^n) folded modulo m.
struct Contour {
  std::vector<Complex> f;
  std::vector<double> speed;
};

// Plans are cached per length. Planning is serialized; executing a plan on
// fresh arrays is thread safe.
fftw_plan plan_for(std::size_t m) {
  static std::mutex mu;
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = plans.find(m); it != plans.end()) return it->second;
  std::vector<Complex> in(m);
  std::vector<Complex> out(m);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(m, plan);
  return plan;
}

void backward_dft(std::vector<Complex>& in, std::vector<Complex>& out) {
  fftw_execute_dft(plan_for(in.size()), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

std::vector<Complex> circle_values(const std::vector<Complex>& coeffs, double r, std::size_t m) {
  std::vector<Complex> in(m, Complex{0.0, 0.0});
  double rn = 1.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n, rn *= r) in[n % m] += coeffs[n] * rn;
  std::vector<Complex> out(m);
  backward_dft(in, out);
  return out;
}

Contour contour_values(const std::vector<Complex>& coeffs, double r, std::size_t m) {
  std::vector<Complex> in(m, Complex{0.0, 0.0});
  std::vector<Complex> din(m, Complex{0.0, 0.0});
  double rn = 1.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n, rn *= r) {
    const Complex b = coeffs[n] * rn;
    in[n % m] += b;
    din[n % m] += static_cast<double>(n) * b;
  }
  Contour c{std::vector<Complex>(m), std::vector<double>(m)};
  std::vector<Complex> dout(m);
  backward_dft(in, c.f);
  backward_dft(din, dout);
  for (std::size_t k = 0; k < m; ++k) c.speed[k] = std::abs(dout[k] / c.f[k]);
  return c;
}

// Polynomial with stripped zero coefficients at both ends.
struct Reduced {
  std::vector<Complex> q;
  std::size_t origin = 0;
};

Reduced reduce(const std::vector<Complex>& coeffs) {
  std::size_t hi = coeffs.size();
  while (hi > 0 && std::abs(coeffs[hi - 1]) < kZeroCoefficient) --hi;
  if (hi == 0) throw DomainError("find_roots: the zero polynomial has no finite root set");
  std::size_t lo = 0;
  while (lo < hi && std::abs(coeffs[lo]) < kZeroCoefficient) ++lo;
  return Reduced{std::vector<Complex>(coeffs.begin() + static_cast<std::ptrdiff_t>(lo),
                                      coeffs.begin() + static_cast<std::ptrdiff_t>(hi)),
                 lo};
}

// p, p' and the rounding-error scale sum |q_k| |z|^k, evaluated in the
// variable (z or 1/z) that keeps powers bounded. For |z| > 1 the reversed
// polynomial is used and `value` is p(z) / z^d.
struct Eval {
  Complex value;
  Complex newton;  // p(z) / p'(z)
  double scale;
};

Eval evaluate_for_roots(const std::vector<Complex>& q, Complex z) {
  const std::size_t d = q.size() - 1;
  const double az = std::abs(z);
  Complex p{0.0, 0.0};
  Complex dp{0.0, 0.0};
  double scale = 0.0;
  if (az <= 1.0) {
    for (std::size_t k = q.size(); k-- > 0;) {
      dp = dp * z + p;
      p = p * z + q[k];
      scale = scale * az + std::abs(q[k]);
    }
    return {p, p / dp, scale};
  }
  const Complex w = 1.0 / z;
  const double aw = 1.0 / az;
  for (std::size_t k = 0; k <= d; ++k) {
    dp = dp * w + p;
    p = p * w + q[k];
    scale = scale * aw + std::abs(q[k]);
  }
  // p(z) = z^d rev(w); p'/p = w (d - w rev'(w)/rev(w)).
  const Complex log_deriv = w * (static_cast<double>(d) - w * dp / p);
  return {p, 1.0 / log_deriv, scale};
}

bool small_residual(const Eval& e, std::size_t degree) {
  return std::abs(e.value) <= 4.0 * static_cast<double>(degree + 1) * kEps * e.scale;
}

bool aberth(const std::vector<Complex>& q, std::vector<Complex>& z, std::size_t& sweeps) {
  const std::size_t d = z.size();
  std::vector<char> done(d, 0);
  for (sweeps = 1; sweeps <= kMaxSweeps; ++sweeps) {
    bool all_done = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      const Eval e = evaluate_for_roots(q, z[i]);
      if (small_residual(e, d)) {
        done[i] = 1;
        continue;
      }
      all_done = false;
      Complex s{0.0, 0.0};
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) s += 1.0 / (z[i] - z[j]);
      }
      Complex step = e.newton / (1.0 - e.newton * s);
      if (!std::isfinite(std::abs(step))) step = e.newton;
      // Stationary point of p: nudge off it.
      if (!std::isfinite(std::abs(step))) step = Complex{1e-3, 1e-3} * (1.0 + std::abs(z[i]));
      z[i] -= step;
      if (std::abs(step) <= 2.0 * kEps * std::abs(z[i])) done[i] = 1;
    }
    if (all_done) return true;
  }
  return false;
}

bool durand_kerner(const std::vector<Complex>& q, std::vector<Complex>& z, std::size_t& sweeps) {
  const std::size_t d = z.size();
  const Complex lead = q.back();
  for (std::size_t it = 0; it < kMaxSweeps; ++it, ++sweeps) {
    double max_rel = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const Eval e = evaluate_for_roots(q, z[i]);
      if (small_residual(e, d)) continue;
      Complex step;
      if (std::abs(z[i]) <= 1.0) {
        step = e.value / lead;
        for (std::size_t j = 0; j < d; ++j) {
          if (j != i) step /= (z[i] - z[j]);
        }
      } else {
        // p(z) / (lead prod (z - z_j)) = z rev(w) / lead * prod 1/(1 - z_j w).
        const Complex w = 1.0 / z[i];
        step = z[i] * e.value / lead;
        for (std::size_t j = 0; j < d; ++j) {
          if (j != i) step /= (1.0 - z[j] * w);
        }
      }
      if (!std::isfinite(std::abs(step))) continue;
      z[i] -= step;
      max_rel = std::max(max_rel, std::abs(step) / std::max(std::abs(z[i]), 1e-300));
    }
    if (max_rel <= 4.0 * kEps) return true;
  }
  return false;
}

void polish(const std::vector<Complex>& q, Complex& z) {
  const std::size_t d = q.size() - 1;
  for (int it = 0; it < 20; ++it) {
    const Eval e = evaluate_for_roots(q, z);
    if (small_residual(e, d) || !std::isfinite(std::abs(e.newton))) return;
    const Complex next = z - e.newton;
    const bool tiny = std::abs(next - z) <= kEps * std::abs(z);
    z = next;
    if (tiny) return;
  }
}

}  // namespace

void CountConfig::validate() const {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("CountConfig: r must lie in (0, 1)");
  if (initial_nodes < 16) throw DomainError("CountConfig: initial_nodes must be at least 16");
  if (max_nodes < initial_nodes) throw DomainError("CountConfig: max_nodes < initial_nodes");
  if (!(min_modulus_factor > 1.0)) throw DomainError("CountConfig: min_modulus_factor must exceed 1");
}

CountResult count_winding(const GafSample& sample, const CountConfig& cfg) {
  cfg.validate();
  check_radius(sample, cfg.r, "count_winding");
  const double threshold = cfg.min_modulus_factor * sample.tail_amplitude();
  auto grid = contour_values(sample.coeffs, cfg.r, cfg.initial_nodes);
  const auto& vals = grid.f;
  double total = 0.0;
  double min_mod = 0.0;
  for (;;) {
    // Refinement only lowers the minimum, so an unreliable grid stays so.
    min_mod = std::numeric_limits<double>::infinity();
    for (const auto& v : vals) min_mod = std::min(min_mod, std::abs(v));
    if (!(min_mod > threshold)) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "count_winding: min |f| = " << min_mod << " on the contour is below " << threshold;
      throw UnreliableContour(msg.str(), min_mod, threshold);
    }
    const std::size_t m = vals.size();
    const double dtheta = kTwoPi / static_cast<double>(m);
    double max_step = 0.0;
    double max_speed = 0.0;
    total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double step = std::arg(vals[(k + 1) % m] / vals[k]);
      max_step = std::max(max_step, std::abs(step));
      max_speed = std::max(max_speed, grid.speed[k]);
      total += step;
    }
    // Principal-value steps alone cannot see a phase that wraps a full
    // turn between nodes, hence the derivative bound.
    if (max_step <= std::numbers::pi / 2.0 && max_speed * dtheta <= std::numbers::pi / 2.0) break;
    if (2 * m > cfg.max_nodes) {
      std::ostringstream msg;
      msg << "count_winding: phase steps still exceed pi/2 at " << m << " nodes";
      throw NonConvergent(msg.str());
    }
    grid = contour_values(sample.coeffs, cfg.r, 2 * m);
  }
  const double winding = total / kTwoPi;
  const double rounded = std::round(winding);
  if (std::abs(winding - rounded) > 0.01 || rounded < 0.0) {
    std::ostringstream msg; msg.precision(17); msg << "count_winding: accumulated phase is not an integer multiple of 2 pi (winding " << winding << ", nodes " << vals.size() << ")"; throw NonConvergent(msg.str());
  }
  CountResult res;
  res.count = static_cast<std::size_t>(rounded);
  res.method = CountMethod::Winding;
  res.nodes_used = vals.size();
  res.contour_min_modulus = min_mod;
  res.winding = winding;
  return res;
}

RootSet find_roots(const std::vector<Complex>& coeffs) {
  const Reduced red = reduce(coeffs);
  RootSet out;
  out.origin_multiplicity = red.origin;
  out.roots.assign(red.origin, Complex{0.0, 0.0});
  const auto& q = red.q;
  const std::size_t d = q.size() - 1;
  if (d == 0) return out;
  if (d == 1) {
    out.roots.push_back(-q[0] / q[1]);
    return out;
  }
  const double radius =
      std::exp((std::log(std::abs(q[0])) - std::log(std::abs(q[d]))) / static_cast<double>(d));
  std::vector<Complex> z(d);
  for (std::size_t k = 0; k < d; ++k) {
    // Fixed offset plus a small deterministic jitter breaks symmetry.
    const double jitter = 0.01 * std::sin(1.7 * static_cast<double>(k) + 0.3);
    const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(d) + 0.4 + jitter;
    z[k] = std::polar(radius, theta);
  }
  std::size_t sweeps = 0;
  if (!aberth(q, z, sweeps)) {
    out.used_fallback = true;
    if (!durand_kerner(q, z, sweeps)) {
      std::ostringstream msg;
      msg << "find_roots: no convergence after " << sweeps << " sweeps (degree " << d << ")";
      throw NonConvergent(msg.str());
    }
  }
  out.sweeps = sweeps;
  for (auto& root : z) polish(q, root);
  out.roots.insert(out.roots.end(), z.begin(), z.end());
  return out;
}

CountResult count_roots(const RootSet& roots, const CountConfig& cfg) {
  cfg.validate();
  CountResult res;
  res.method = CountMethod::Roots;
  res.contour_min_modulus = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < roots.roots.size(); ++i) {
    const double mod = std::abs(roots.roots[i]);
    if (i >= roots.origin_multiplicity && std::abs(mod - cfg.r) < kBoundaryBand) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "count_roots: root of modulus " << mod << " lies on the contour |z| = " << cfg.r;
      throw BoundaryAmbiguous(msg.str(), mod);
    }
    if (mod <= cfg.r * (1.0 + 1e-12)) ++res.count;
  }
  return res;
}

CountResult count_roots(const GafSample& sample, const CountConfig& cfg) {
  cfg.validate();
  check_radius(sample, cfg.r, "count_roots");
  return count_roots(find_roots(sample.coeffs), cfg);
}

CircleAverage circle_log_average(const GafSample& sample, double r, const CountConfig& cfg) {
  check_radius(sample, r, "circle_log_average");
  const auto mean_log = [&](std::size_t m) {
    double sum = 0.0;
    for (const auto& v : circle_values(sample.coeffs, r, m)) sum += std::log(std::abs(v));
    return sum / static_cast<double>(m);
  };
  std::size_t m = cfg.initial_nodes;
  double prev = mean_log(m);
  while (2 * m <= cfg.max_nodes) {
    m *= 2;
    const double cur = mean_log(m);
    if (!std::isfinite(cur)) break;
    if (std::abs(cur - prev) <= 1e-11 * std::max(1.0, std::abs(cur))) return {cur, m};
    prev = cur;
  }
  throw NonConvergent("circle_log_average: trapezoidal rule did not converge within max_nodes");
}

double jensen_residual(const GafSample& sample, const RootSet& roots, double r,
                       const CountConfig& cfg) {
  if (sample.coeffs.empty() || !(std::abs(sample.coeffs[0]) > 1e-12)) {
    throw DomainError("jensen_residual: requires f(0) != 0");
  }
  CountConfig at_r = cfg;
  at_r.r = r;
  count_roots(roots, at_r);  // surfaces BoundaryAmbiguous
  double lhs = std::log(std::abs(sample.coeffs[0]));
  for (const auto& root : roots.roots) {
    const double mod = std::abs(root);
    if (mod <= r * (1.0 + 1e-12)) lhs += std::log(r / mod);
  }
  const double rhs = circle_log_average(sample, r, cfg).value;
  return std::abs(lhs - rhs);
}

double jensen_residual(const GafSample& sample, double r, const CountConfig& cfg) {
  check_radius(sample, r, "jensen_residual");
  return jensen_residual(sample, find_roots(sample.coeffs), r, cfg);
}

IntegralInequality integral_inequality_check(const GafSample& sample, const RootSet& roots,
                                             double r, const CountConfig& cfg) {
  const double outer = 0.5 * (1.0 + r);
  check_radius(sample, outer, "integral_inequality_check");
  CountConfig at_r = cfg;
  at_r.r = r;
  const auto count = count_roots(roots, at_r).count;
  double max_mod = 0.0;
  for (const auto& v : circle_values(sample.coeffs, outer, kMaxModulusNodes)) {
    max_mod = std::max(max_mod, std::abs(v));
  }
  IntegralInequality out;
  out.lhs = static_cast<double>(count) * std::log(outer / r);
  out.rhs = std::log(max_mod) - circle_log_average(sample, r, cfg).value;
  out.ok = out.lhs <= out.rhs + kInequalityTolerance;
  return out;
}

IntegralInequality integral_inequality_check(const GafSample& sample, double r,
                                             const CountConfig& cfg) {
  check_radius(sample, 0.5 * (1.0 + r), "integral_inequality_check");
  return integral_inequality_check(sample, find_roots(sample.coeffs), r, cfg);
}

}  // namespace hypgaf
