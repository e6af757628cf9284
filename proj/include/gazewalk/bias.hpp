#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gazewalk/core.hpp"
#include "gazewalk/rng.hpp"
#include "gazewalk/shift.hpp"
#include "gazewalk/stable.hpp"

namespace gazewalk {

namespace detail {

/// exp(-x) * I0(x), stable for arbitrarily large x.
inline double bessel_i0_scaled(double x) {
  x = std::abs(x);
  if (x < 3.75) {
    const double t = (x / 3.75) * (x / 3.75);
    const double i0 =
        1.0 + t * (3.5156229 +
                   t * (3.0899424 +
                        t * (1.2067492 +
                             t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
    return i0 * std::exp(-x);
  }
  const double t = 3.75 / x;
  const double poly =
      0.39894228 +
      t * (0.01328592 +
           t * (0.00225319 +
                t * (-0.00157565 +
                     t * (0.00916281 +
                          t * (-0.02057706 +
                               t * (0.02635537 +
                                    t * (-0.01647633 + t * 0.00392377)))))));
  return poly / std::sqrt(x);
}

/// von Mises density, evaluated in the scaled domain so huge concentrations
/// neither overflow nor lose the normalization.
inline double von_mises_pdf(double theta, double mean, double concentration) {
  if (concentration <= 0.0) return 1.0 / kTwoPi;
  const double c = std::cos(theta - mean) - 1.0;
  return std::exp(concentration * c) /
         (kTwoPi * bessel_i0_scaled(concentration));
}

/// Best-Fisher rejection sampler for the von Mises distribution.
inline double sample_von_mises(double mean, double concentration, Rng& rng) {
  if (concentration < 1e-8) return wrap_angle(rng.uniform(-kPi, kPi));
  const double a = 1.0 + std::sqrt(1.0 + 4.0 * concentration * concentration);
  const double b = (a - std::sqrt(2.0 * a)) / (2.0 * concentration);
  const double r = (1.0 + b * b) / (2.0 * b);
  for (;;) {
    const double u1 = rng.uniform01();
    const double z = std::cos(kPi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = concentration * (r - f);
    const double u2 = rng.uniform01();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
      return wrap_angle(mean + sign * std::acos(std::clamp(f, -1.0, 1.0)));
    }
  }
}

inline double wrapped_cauchy_pdf(double theta, double mean, double rho) {
  if (rho <= 0.0) return 1.0 / kTwoPi;
  const double d = std::cos(theta - mean);
  return (1.0 - rho * rho) /
         (kTwoPi * (1.0 + rho * rho - 2.0 * rho * d));
}

/// Inverse-CDF draw from the wrapped Cauchy law.
inline double sample_wrapped_cauchy(double mean, double rho, Rng& rng) {
  if (rho <= 0.0) return wrap_angle(rng.uniform(-kPi, kPi));
  const double scale = (1.0 - rho) / (1.0 + rho);
  const double t = std::tan(kPi * (rng.uniform01() - 0.5));
  return wrap_angle(mean + 2.0 * std::atan(scale * t));
}

/// Maximum-likelihood von Mises concentration from a resultant length
/// (Banerjee approximation), capped for numerically degenerate data.
inline double concentration_from_resultant(double r) {
  if (r < 0.0) r = 0.0;
  if (r >= 1.0 - 1e-12) return 1e10;
  const double k = r * (2.0 - r * r) / (1.0 - r * r);
  return std::min(k, 1e10);
}

inline double gaussian_kernel(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(kTwoPi);
}

/// Silverman's rule of thumb.
inline double silverman_bandwidth(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  std::sort(values.begin(), values.end());
  const double iqr = sample_quantile(values, 0.75) - sample_quantile(values, 0.25);
  double spread = std::sqrt(var);
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

}  // namespace detail

enum class BiasMode { kIndependent, kAmplitudeGivenDirection, kJointKde };
enum class AmplitudeLaw { kAlphaStable, kKde };
enum class DirectionLaw { kHistogram, kKde };

struct BiasFitOptions {
  BiasMode mode = BiasMode::kIndependent;
  AmplitudeLaw amplitude_law = AmplitudeLaw::kAlphaStable;
  DirectionLaw direction_law = DirectionLaw::kKde;
  int direction_bins = 16;
  double bandwidth_scale = 1.0;  // multiplier on the rule-of-thumb bandwidths
};

/// Gaze-shift prior over (amplitude, direction), fitted from observed shifts
/// or specified analytically. Immutable once fitted; share freely across
/// threads, one Rng per sampling stream.
struct BiasModel {
  BiasMode mode = BiasMode::kIndependent;
  AmplitudeLaw amplitude_law = AmplitudeLaw::kKde;
  DirectionLaw direction_law = DirectionLaw::kHistogram;
  bool fitted = false;

  // Amplitude component: stable parameters, or kernel centers + bandwidth.
  AlphaStableParams amplitude_stable;
  std::vector<double> amplitude_points;
  double amplitude_bandwidth = 0.0;

  // Direction component: bin frequencies, or kernel centers + concentration.
  std::vector<double> direction_freq;
  std::vector<double> direction_points;
  double direction_concentration = 0.0;

  // First-order persistence: mixing weight kappa (also the wrapped-Cauchy
  // rho) and the circular mean of successive direction differences.
  double persistence = 0.0;
  double persistence_shift = 0.0;

  /// Uniform-direction, stable-amplitude prior.
  static BiasModel independent_stable(const AlphaStableParams& amp,
                                      int direction_bins = 16) {
    amp.validate();
    BiasModel m;
    m.mode = BiasMode::kIndependent;
    m.amplitude_law = AmplitudeLaw::kAlphaStable;
    m.amplitude_stable = amp;
    m.direction_law = DirectionLaw::kHistogram;
    m.direction_freq.assign(direction_bins,
                            1.0 / static_cast<double>(direction_bins));
    m.fitted = true;
    return m;
  }

  /// Uniform-direction prior with a fixed amplitude (degenerate kernel).
  static BiasModel independent_point_amplitude(double amplitude,
                                               int direction_bins = 16) {
    BiasModel m;
    m.mode = BiasMode::kIndependent;
    m.amplitude_law = AmplitudeLaw::kKde;
    m.amplitude_points = {amplitude};
    m.amplitude_bandwidth = 0.0;
    m.direction_law = DirectionLaw::kHistogram;
    m.direction_freq.assign(direction_bins,
                            1.0 / static_cast<double>(direction_bins));
    m.fitted = true;
    return m;
  }

  double amplitude_density(double l) const {
    require_fitted();
    if (l < 0.0) return 0.0;
    if (amplitude_law == AmplitudeLaw::kAlphaStable)
      return stable_pdf(l, amplitude_stable) +
             stable_pdf(-l, amplitude_stable);  // folded onto [0, inf)
    return kde_amplitude_density(l, amplitude_points);
  }

  double direction_density(double theta) const {
    require_fitted();
    theta = wrap_angle(theta);
    if (direction_law == DirectionLaw::kHistogram) {
      const int bins = static_cast<int>(direction_freq.size());
      const double width = kTwoPi / bins;
      int idx = static_cast<int>((theta + kPi) / width);
      idx = std::clamp(idx, 0, bins - 1);
      return direction_freq[idx] / width;
    }
    double s = 0.0;
    for (double p : direction_points)
      s += detail::von_mises_pdf(theta, p, direction_concentration);
    return s / static_cast<double>(direction_points.size());
  }

  /// Conditional amplitude density given a direction (kernel-weighted).
  double conditional_amplitude_density(double l, double theta) const {
    require_fitted();
    if (l < 0.0) return 0.0;
    double wsum = 0.0, dsum = 0.0;
    for (std::size_t i = 0; i < amplitude_points.size(); ++i) {
      const double w = std::exp(direction_concentration *
                                (std::cos(theta - direction_points[i]) - 1.0));
      wsum += w;
      dsum += w * reflected_kernel(l, amplitude_points[i]);
    }
    return wsum > 0.0 ? dsum / wsum : 0.0;
  }

  /// Quadrature grid covering effectively all amplitude mass.
  std::vector<double> amplitude_grid() const {
    require_fitted();
    std::vector<double> grid;
    if (amplitude_law == AmplitudeLaw::kAlphaStable) {
      const double g = amplitude_stable.gamma;
      const double l1 = std::abs(amplitude_stable.delta) + 8.0 * g;
      const double decades = 8.0 / amplitude_stable.alpha;
      const double l_max = l1 * std::pow(10.0, decades);
      for (int i = 0; i <= 256; ++i) grid.push_back(l1 * i / 256.0);
      const double ratio = std::log(l_max / l1) / 2048.0;
      for (int i = 1; i <= 2048; ++i)
        grid.push_back(l1 * std::exp(ratio * i));
      return grid;
    }
    double hi = 0.0;
    for (double p : amplitude_points) hi = std::max(hi, p);
    hi += 8.0 * std::max(amplitude_bandwidth, 1e-12);
    for (int i = 0; i <= 1024; ++i) grid.push_back(hi * i / 1024.0);
    return grid;
  }

  std::vector<double> direction_grid() const {
    std::vector<double> grid;
    for (int i = 0; i <= 720; ++i)
      grid.push_back(-kPi + kTwoPi * i / 720.0);
    return grid;
  }

  void require_fitted() const {
    if (!fitted) throw StateError("bias model has not been fitted");
  }

  double reflected_kernel(double l, double center) const {
    const double h = amplitude_bandwidth;
    if (h <= 0.0) return l == center ? std::numeric_limits<double>::infinity() : 0.0;
    return (detail::gaussian_kernel((l - center) / h) +
            detail::gaussian_kernel((l + center) / h)) /
           h;
  }

 private:
  double kde_amplitude_density(double l, const std::vector<double>& pts) const {
    double s = 0.0;
    for (double p : pts) s += reflected_kernel(l, p);
    return s / static_cast<double>(pts.size());
  }
};

/// Learn the shift prior from observed gaze shifts.
inline BiasModel fit_bias_model(std::span<const GazeShift> shifts,
                                const BiasFitOptions& opt = {}) {
  if (shifts.size() < 100)
    throw EstimationError("fit_bias_model needs at least 100 shifts");

  std::vector<double> amplitudes, directions;
  amplitudes.reserve(shifts.size());
  directions.reserve(shifts.size());
  for (const GazeShift& s : shifts) {
    amplitudes.push_back(s.amplitude);
    directions.push_back(wrap_angle(s.direction));
  }

  BiasModel m;
  m.mode = opt.mode;
  m.fitted = true;

  // Persistence from successive direction differences.
  double cs = 0.0, ss = 0.0;
  for (std::size_t i = 1; i < directions.size(); ++i) {
    const double d = wrap_angle(directions[i] - directions[i - 1]);
    cs += std::cos(d);
    ss += std::sin(d);
  }
  const double n_diff = static_cast<double>(directions.size() - 1);
  const double resultant = std::hypot(cs, ss) / n_diff;
  m.persistence = std::min(resultant, 1.0 - 1e-9);
  m.persistence_shift = resultant > 1e-6 ? std::atan2(ss, cs) : 0.0;

  // Direction component.
  double dc = 0.0, ds = 0.0;
  for (double t : directions) {
    dc += std::cos(t);
    ds += std::sin(t);
  }
  const double dir_resultant =
      std::hypot(dc, ds) / static_cast<double>(directions.size());

  const bool conditional = opt.mode != BiasMode::kIndependent;
  const DirectionLaw dlaw = opt.mode == BiasMode::kJointKde
                                ? DirectionLaw::kKde
                                : opt.direction_law;
  if (dlaw == DirectionLaw::kHistogram) {
    m.direction_law = DirectionLaw::kHistogram;
    if (opt.direction_bins < 4)
      throw ParameterError("direction histogram needs >= 4 bins");
    m.direction_freq.assign(opt.direction_bins, 0.0);
    const double width = kTwoPi / opt.direction_bins;
    for (double t : directions) {
      int idx = static_cast<int>((t + kPi) / width);
      idx = std::clamp(idx, 0, opt.direction_bins - 1);
      m.direction_freq[idx] += 1.0;
    }
    for (double& f : m.direction_freq)
      f /= static_cast<double>(directions.size());
  } else {
    m.direction_law = DirectionLaw::kKde;
    m.direction_points = directions;
  }
  const double base_conc = detail::concentration_from_resultant(dir_resultant);
  m.direction_concentration =
      std::min(1e10, base_conc *
                         std::pow(static_cast<double>(directions.size()), 0.4) /
                         opt.bandwidth_scale);

  // Amplitude component.
  if (!conditional && opt.amplitude_law == AmplitudeLaw::kAlphaStable) {
    m.amplitude_law = AmplitudeLaw::kAlphaStable;
    m.amplitude_stable = fit_alpha_stable(amplitudes);
  } else {
    m.amplitude_law = AmplitudeLaw::kKde;
    m.amplitude_points = amplitudes;
    m.amplitude_bandwidth =
        opt.bandwidth_scale * detail::silverman_bandwidth(amplitudes);
  }
  if (conditional && m.direction_points.empty())
    m.direction_points = directions;  // kernel centers for conditioning

  return m;
}

namespace detail {

inline double sample_base_direction(const BiasModel& m, Rng& rng) {
  if (m.direction_law == DirectionLaw::kHistogram) {
    const int bins = static_cast<int>(m.direction_freq.size());
    const double width = kTwoPi / bins;
    double u = rng.uniform01();
    int idx = bins - 1;
    for (int k = 0; k < bins; ++k) {
      if (u < m.direction_freq[k]) {
        idx = k;
        break;
      }
      u -= m.direction_freq[k];
    }
    return wrap_angle(-kPi + (idx + rng.uniform01()) * width);
  }
  const std::size_t i = rng.uniform_index(m.direction_points.size());
  return sample_von_mises(m.direction_points[i], m.direction_concentration,
                          rng);
}

inline double sample_amplitude_kde(const BiasModel& m, std::size_t idx,
                                   Rng& rng) {
  const double l =
      m.amplitude_points[idx] + m.amplitude_bandwidth * rng.normal();
  return std::abs(l);
}

/// Kernel-weighted index draw for the conditional modes.
inline std::size_t sample_conditional_index(const BiasModel& m, double theta,
                                            Rng& rng) {
  std::vector<double> w(m.direction_points.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(m.direction_concentration *
                    (std::cos(theta - m.direction_points[i]) - 1.0));
    total += w[i];
  }
  if (total <= 0.0) return rng.uniform_index(w.size());
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (u < w[i]) return i;
    u -= w[i];
  }
  return w.size() - 1;
}

}  // namespace detail

/// Draw one gaze shift. With persistence and a previous direction, the
/// direction comes from the kappa-weighted blend of the base density and a
/// wrapped Cauchy around the previous direction.
inline GazeShift sample_shift(const BiasModel& model,
                              std::optional<double> prev_theta, Rng& rng) {
  model.require_fitted();

  double theta;
  if (prev_theta && model.persistence > 0.0 &&
      rng.bernoulli(model.persistence)) {
    theta = detail::sample_wrapped_cauchy(
        *prev_theta + model.persistence_shift, model.persistence, rng);
  } else {
    theta = detail::sample_base_direction(model, rng);
  }

  double l;
  switch (model.mode) {
    case BiasMode::kIndependent:
      if (model.amplitude_law == AmplitudeLaw::kAlphaStable)
        l = std::abs(sample_alpha_stable(model.amplitude_stable, rng));
      else
        l = detail::sample_amplitude_kde(
            model, rng.uniform_index(model.amplitude_points.size()), rng);
      break;
    case BiasMode::kAmplitudeGivenDirection:
    case BiasMode::kJointKde: {
      const std::size_t i = detail::sample_conditional_index(model, theta, rng);
      l = detail::sample_amplitude_kde(model, i, rng);
      break;
    }
    default:
      throw StateError("unknown bias mode");
  }
  return make_shift_polar(l, theta);
}

/// Stationary joint density of the prior (persistence excluded).
inline double eval_bias_density(const BiasModel& model, double l,
                                double theta) {
  model.require_fitted();
  if (l < 0.0) throw ParameterError("amplitude must be >= 0");
  theta = wrap_angle(theta);
  switch (model.mode) {
    case BiasMode::kIndependent:
      return model.amplitude_density(l) * model.direction_density(theta);
    case BiasMode::kAmplitudeGivenDirection:
      return model.conditional_amplitude_density(l, theta) *
             model.direction_density(theta);
    case BiasMode::kJointKde: {
      double s = 0.0;
      for (std::size_t i = 0; i < model.amplitude_points.size(); ++i)
        s += model.reflected_kernel(l, model.amplitude_points[i]) *
             detail::von_mises_pdf(theta, model.direction_points[i],
                                   model.direction_concentration);
      return s / static_cast<double>(model.amplitude_points.size());
    }
  }
  throw StateError("unknown bias mode");
}

}  // namespace gazewalk
