#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gazewalk/core.hpp"
#include "gazewalk/rng.hpp"
#include "gazewalk/stable_tables.hpp"

namespace gazewalk {

/// Parameters of an alpha-stable law in the continuous ("S0" / Zolotarev M)
/// parameterization: the location delta stays at the distribution's center as
/// alpha crosses 1, unlike the classical parameterization.
struct AlphaStableParams {
  double alpha = 2.0;  // stability exponent, (0, 2]
  double beta = 0.0;   // skewness, [-1, 1]
  double gamma = 1.0;  // scale, > 0
  double delta = 0.0;  // location

  void validate() const {
    if (!(alpha > 0.0) || alpha > 2.0 || !std::isfinite(alpha))
      throw ParameterError("alpha must be in (0, 2]");
    if (beta < -1.0 || beta > 1.0 || !std::isfinite(beta))
      throw ParameterError("beta must be in [-1, 1]");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw ParameterError("gamma must be positive");
    if (!std::isfinite(delta)) throw ParameterError("delta must be finite");
  }
};

namespace detail {

/// Standard S0 variate (gamma=1, delta=0) by the Chambers-Mallows-Stuck
/// transform. U uniform on (-pi/2, pi/2), W unit exponential.
inline double cms_standard(double alpha, double beta, Rng& rng) {
  const double u = kPi * (rng.uniform01() - 0.5);
  const double w = rng.exponential();

  if (std::abs(alpha - 1.0) < 1e-8) {
    const double h = kPi / 2.0 + beta * u;
    double z = (2.0 / kPi) *
               (h * std::tan(u) -
                beta * std::log((kPi / 2.0) * w * std::cos(u) / h));
    return z;
  }

  const double tan_half = std::tan(kPi * alpha / 2.0);
  const double b = std::atan(beta * tan_half) / alpha;
  const double s = std::pow(1.0 + beta * beta * tan_half * tan_half,
                            1.0 / (2.0 * alpha));
  const double z = s * std::sin(alpha * (u + b)) /
                   std::pow(std::cos(u), 1.0 / alpha) *
                   std::pow(std::cos(u - alpha * (u + b)) / w,
                            (1.0 - alpha) / alpha);
  // Shift from the classical parameterization into S0.
  return z - beta * tan_half;
}

/// Type-7 sample quantile (linear interpolation between order statistics).
inline double sample_quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = (static_cast<double>(n) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// One draw from the stable law. Finite for every valid parameter set.
inline double sample_alpha_stable(const AlphaStableParams& p, Rng& rng) {
  p.validate();
  const double z = detail::cms_standard(p.alpha, p.beta, rng);
  return p.gamma * z + p.delta;
}

namespace detail {

// Quantile-spread tables (stable_tables.hpp) on the (alpha, beta) grid,
// precomputed from large seeded draws of the standard S0 law; see
// tools/make_stable_tables.cpp. Spread statistics:
//   nu_alpha = (q95 - q05) / (q75 - q25)          index of tail weight
//   nu_beta  = (q95 + q05 - 2 q50) / (q95 - q05)  index of skewness
//   nu_c     = q75 - q25                          IQR of the standard law
//   nu_zeta  = -q50                               median offset, S0 location
// nu_alpha decreases in alpha; nu_beta increases in beta. Estimation inverts
// the tabulated forward map, the quantile-matching scheme of McCulloch.

inline double lerp(double a, double b, double t) { return a + (b - a) * t; }

/// Value of a table at (alpha, |beta|) by bilinear interpolation.
template <std::size_t NA, std::size_t NB>
double table_value(const double (&table)[NA][NB], double alpha, double abs_beta) {
  const auto& ag = stable_tables::kAlphaGrid;
  const auto& bg = stable_tables::kBetaGrid;
  alpha = std::clamp(alpha, ag[0], ag[NA - 1]);
  abs_beta = std::clamp(abs_beta, bg[0], bg[NB - 1]);

  std::size_t ia = 0;
  while (ia + 2 < NA && ag[ia + 1] < alpha) ++ia;
  std::size_t ib = 0;
  while (ib + 2 < NB && bg[ib + 1] < abs_beta) ++ib;

  const double ta = (alpha - ag[ia]) / (ag[ia + 1] - ag[ia]);
  const double tb = (abs_beta - bg[ib]) / (bg[ib + 1] - bg[ib]);
  return lerp(lerp(table[ia][ib], table[ia + 1][ib], ta),
              lerp(table[ia][ib + 1], table[ia + 1][ib + 1], ta), tb);
}

/// Solve nu_alpha(alpha, b) = target for alpha at fixed |beta| = b.
/// The tabulated map is strictly decreasing in alpha.
inline double invert_nu_alpha(double target, double abs_beta) {
  const auto& ag = stable_tables::kAlphaGrid;
  constexpr std::size_t na = stable_tables::kAlphaCount;
  if (target <= table_value(stable_tables::kNuAlpha, ag[na - 1], abs_beta))
    return ag[na - 1];
  if (target >= table_value(stable_tables::kNuAlpha, ag[0], abs_beta))
    return ag[0];
  double lo = ag[0], hi = ag[na - 1];
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (table_value(stable_tables::kNuAlpha, mid, abs_beta) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Solve nu_beta(alpha, b) = |target| for b at fixed alpha (increasing in b).
inline double invert_nu_beta(double target, double alpha) {
  const auto& bg = stable_tables::kBetaGrid;
  constexpr std::size_t nb = stable_tables::kBetaCount;
  if (target <= table_value(stable_tables::kNuBeta, alpha, bg[0])) return bg[0];
  if (target >= table_value(stable_tables::kNuBeta, alpha, bg[nb - 1]))
    return bg[nb - 1];
  double lo = bg[0], hi = bg[nb - 1];
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (table_value(stable_tables::kNuBeta, alpha, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Stable density by direct cosine-transform quadrature of the S0
/// characteristic function, with the power-tail asymptote far from the
/// center where the integrand oscillates too fast to resolve.
inline double stable_pdf(double x, const AlphaStableParams& p) {
  p.validate();
  const double xs = x - p.delta;
  const double a = p.alpha, g = p.gamma;

  if (std::abs(xs) > 50.0 * g) {
    const double side = xs > 0.0 ? p.beta : -p.beta;
    const double c =
        a * std::sin(kPi * a / 2.0) * std::tgamma(a) / kPi * (1.0 + side);
    const double v = c * std::pow(g, a) * std::pow(std::abs(xs), -a - 1.0);
    return v > 0.0 ? v : 0.0;
  }

  // Integrand support: exp(-(g u)^alpha) below 1e-13 is negligible.
  const double u_max = std::pow(29.93, 1.0 / a) / g;
  const double cycles = u_max * (std::abs(xs) + g) / kTwoPi;
  std::size_t n = static_cast<std::size_t>(16.0 * (cycles + 1.0));
  n = std::clamp<std::size_t>(n, 512, 262144);
  if (n % 2 == 1) ++n;  // Simpson needs an even interval count

  const bool near_one = std::abs(a - 1.0) < 1e-8;
  const double t_alpha = near_one ? 0.0 : std::tan(kPi * a / 2.0);
  auto integrand = [&](double u) {
    if (u == 0.0) return 1.0;
    const double gu = g * u;
    const double amp = std::exp(-std::pow(gu, a));
    double phase;
    if (near_one)
      phase = -u * xs - (2.0 / kPi) * p.beta * gu * std::log(gu);
    else
      phase = -u * xs - p.beta * t_alpha * (gu - std::pow(gu, a));
    return amp * std::cos(phase);
  };

  const double h = u_max / static_cast<double>(n);
  double sum = integrand(0.0) + integrand(u_max);
  for (std::size_t i = 1; i < n; ++i)
    sum += integrand(h * i) * (i % 2 ? 4.0 : 2.0);
  const double integral = sum * h / 3.0;
  return std::max(0.0, integral / kPi);
}

/// Quantile estimate of stable parameters. Deterministic, optimizer-free.
/// Alpha is reported clamped to [0.5, 2.0], beta to [-1, 1].
inline AlphaStableParams fit_alpha_stable(std::span<const double> samples) {
  if (samples.size() < 200)
    throw EstimationError("fit_alpha_stable needs at least 200 samples");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const double q05 = detail::sample_quantile(sorted, 0.05);
  const double q25 = detail::sample_quantile(sorted, 0.25);
  const double q50 = detail::sample_quantile(sorted, 0.50);
  const double q75 = detail::sample_quantile(sorted, 0.75);
  const double q95 = detail::sample_quantile(sorted, 0.95);

  const double iqr = q75 - q25;
  if (!(iqr > 0.0))
    throw EstimationError("degenerate data: zero interquartile range");

  const double nu_alpha = (q95 - q05) / iqr;
  const double nu_beta = (q95 + q05 - 2.0 * q50) / (q95 - q05);
  const double sign_beta = nu_beta < 0.0 ? -1.0 : 1.0;
  const double abs_nu_beta = std::abs(nu_beta);

  // Alternate the two one-dimensional inversions to a joint fixed point.
  double alpha = 1.5, abs_beta = 0.0;
  for (int it = 0; it < 20; ++it) {
    const double a_next = detail::invert_nu_alpha(nu_alpha, abs_beta);
    const double b_next = detail::invert_nu_beta(abs_nu_beta, a_next);
    if (std::abs(a_next - alpha) < 1e-10 && std::abs(b_next - abs_beta) < 1e-10) {
      alpha = a_next;
      abs_beta = b_next;
      break;
    }
    alpha = a_next;
    abs_beta = b_next;
  }
  // Skewness is unidentifiable from quantile spreads at the Gaussian boundary.
  if (alpha >= stable_tables::kAlphaGrid[stable_tables::kAlphaCount - 1])
    abs_beta = 0.0;

  AlphaStableParams out;
  out.alpha = std::clamp(alpha, 0.5, 2.0);
  out.beta = std::clamp(sign_beta * abs_beta, -1.0, 1.0);
  out.gamma = iqr / detail::table_value(stable_tables::kNuC, out.alpha, abs_beta);
  out.delta = q50 + out.gamma * sign_beta *
                        detail::table_value(stable_tables::kNuZeta, out.alpha,
                                            abs_beta);
  return out;
}

}  // namespace gazewalk
