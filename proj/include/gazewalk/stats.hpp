#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazewalk/core.hpp"
#include "gazewalk/saliency.hpp"
#include "gazewalk/shift.hpp"

namespace gazewalk {

// ---------------------------------------------------------------------------
// Raw gaze traces and event segmentation
// ---------------------------------------------------------------------------

/// Uniformly sampled eye-tracker trace.
struct GazeSamples {
  std::vector<double> t_ms;
  std::vector<double> x;
  std::vector<double> y;
  double rate_hz = 0.0;

  std::size_t size() const { return t_ms.size(); }

  void validate() const {
    if (x.size() != t_ms.size() || y.size() != t_ms.size())
      throw DimensionError("gaze sample columns must have equal length");
    if (!(rate_hz > 0.0)) throw ParameterError("sampling rate must be > 0");
    const double period = 1000.0 / rate_hz;
    for (std::size_t i = 1; i < t_ms.size(); ++i) {
      const double dt = t_ms[i] - t_ms[i - 1];
      if (dt <= 0.0) throw DataError("timestamps must be strictly increasing");
      if (std::abs(dt - period) > period)
        throw DataError("sampling is non-uniform beyond one sample period");
    }
  }
};

struct GazeEvent {
  enum class Type { kFixation, kSaccade };
  Type type = Type::kFixation;
  double t_start_ms = 0.0;
  double t_end_ms = 0.0;
  // Fixations: centroid. Saccades: landing point.
  double x = 0.0;
  double y = 0.0;
  double amplitude_px = 0.0;   // saccades only
  double direction_rad = 0.0;  // saccades only
  std::size_t first_sample = 0;
  std::size_t last_sample = 0;
};

/// Velocity-threshold (I-VT) segmentation. Sample-to-sample intervals are
/// classified against the threshold; sub-threshold runs shorter than the
/// minimum fixation duration are folded into the surrounding saccade.
inline std::vector<GazeEvent> segment_events(const GazeSamples& samples,
                                             double velocity_threshold_px_s,
                                             double min_fixation_ms = 80.0) {
  if (samples.size() < 3)
    throw DataError("segmentation needs at least 3 samples");
  if (!(velocity_threshold_px_s > 0.0))
    throw ParameterError("velocity threshold must be > 0");
  samples.validate();

  const std::size_t n_intervals = samples.size() - 1;
  std::vector<bool> is_slow(n_intervals);
  for (std::size_t i = 0; i < n_intervals; ++i) {
    const double dt_s = (samples.t_ms[i + 1] - samples.t_ms[i]) / 1000.0;
    const double d = std::hypot(samples.x[i + 1] - samples.x[i],
                                samples.y[i + 1] - samples.y[i]);
    is_slow[i] = d / dt_s < velocity_threshold_px_s;
  }

  // Runs of equal classification over intervals [begin, end).
  struct Run {
    std::size_t begin, end;
    bool slow;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < n_intervals;) {
    std::size_t j = i;
    while (j < n_intervals && is_slow[j] == is_slow[i]) ++j;
    runs.push_back({i, j, is_slow[i]});
    i = j;
  }

  // Too-short fixation candidates become saccade material.
  for (Run& r : runs) {
    if (!r.slow) continue;
    const double dur = samples.t_ms[r.end] - samples.t_ms[r.begin];
    if (dur < min_fixation_ms) r.slow = false;
  }
  std::vector<Run> merged;
  for (const Run& r : runs) {
    if (!merged.empty() && merged.back().slow == r.slow)
      merged.back().end = r.end;
    else
      merged.push_back(r);
  }

  std::vector<GazeEvent> events;
  for (const Run& r : merged) {
    GazeEvent e;
    e.first_sample = r.begin;
    e.last_sample = r.end;  // events share boundary samples
    e.t_start_ms = samples.t_ms[r.begin];
    e.t_end_ms = samples.t_ms[r.end];
    if (r.slow) {
      e.type = GazeEvent::Type::kFixation;
      double sx = 0.0, sy = 0.0;
      for (std::size_t i = r.begin; i <= r.end; ++i) {
        sx += samples.x[i];
        sy += samples.y[i];
      }
      const double count = static_cast<double>(r.end - r.begin + 1);
      e.x = sx / count;
      e.y = sy / count;
    } else {
      e.type = GazeEvent::Type::kSaccade;
      const double dx = samples.x[r.end] - samples.x[r.begin];
      const double dy = samples.y[r.end] - samples.y[r.begin];
      e.x = samples.x[r.end];
      e.y = samples.y[r.end];
      e.amplitude_px = std::hypot(dx, dy);
      e.direction_rad = e.amplitude_px > 0.0 ? std::atan2(dy, dx) : 0.0;
    }
    events.push_back(e);
  }
  return events;
}

// ---------------------------------------------------------------------------
// CCDF and tail analysis
// ---------------------------------------------------------------------------

/// Empirical complementary CDF, P(X > x) with strict inequality, evaluated
/// at the sorted unique sample values.
struct CcdfCurve {
  std::vector<double> x;
  std::vector<double> tail;

  void validate() const {
    if (x.size() != tail.size())
      throw DimensionError("curve columns must have equal length");
    for (std::size_t i = 0; i < tail.size(); ++i) {
      if (tail[i] < 0.0 || tail[i] > 1.0)
        throw DataError("ccdf values must lie in [0,1]");
      if (i > 0 && (tail[i] > tail[i - 1] || x[i] <= x[i - 1]))
        throw DataError("ccdf must be nonincreasing over increasing support");
    }
  }
};

inline CcdfCurve ccdf(std::span<const double> values) {
  if (values.empty()) throw DataError("ccdf needs at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  CcdfCurve curve;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    curve.x.push_back(sorted[i]);
    curve.tail.push_back(static_cast<double>(sorted.size() - j) / n);
    i = j;
  }
  return curve;
}

struct TailFit {
  double exponent = 0.0;       // negated log-log slope
  std::size_t points_used = 0;
};

namespace detail {

/// Log-log least squares above an explicit support cutoff. Points with zero
/// tail mass or nonpositive support are excluded.
inline TailFit fit_tail_above(const CcdfCurve& curve, double x_cut) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (curve.x[i] < x_cut || curve.x[i] <= 0.0 || curve.tail[i] <= 0.0)
      continue;
    lx.push_back(std::log(curve.x[i]));
    ly.push_back(std::log(curve.tail[i]));
  }
  if (lx.size() < 20)
    throw EstimationError("insufficient tail points above cutoff");

  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12)
    throw EstimationError("degenerate support for tail fit");
  TailFit fit;
  fit.exponent = -(n * sxy - sx * sy) / denom;
  fit.points_used = lx.size();
  return fit;
}

/// Support point a given fraction of the way along the curve's log range.
inline double support_mark(const CcdfCurve& curve, double fraction) {
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (curve.x[i] <= 0.0 || curve.tail[i] <= 0.0) continue;
    if (!found) {
      lo = curve.x[i];
      found = true;
    }
    hi = curve.x[i];
  }
  if (!found || hi <= lo) return lo;
  return lo * std::pow(hi / lo, fraction);
}

}  // namespace detail

/// Least-squares slope of log tail vs log support above the given sample
/// quantile.
inline TailFit tail_exponent(const CcdfCurve& curve, double cutoff_quantile) {
  curve.validate();
  if (cutoff_quantile < 0.0 || cutoff_quantile >= 1.0)
    throw ParameterError("cutoff quantile must lie in [0, 1)");

  // The cutoff is the smallest support point whose CDF reaches the quantile.
  double x_cut = curve.x.empty() ? 0.0 : curve.x.front();
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (1.0 - curve.tail[i] >= cutoff_quantile) {
      x_cut = curve.x[i];
      break;
    }
  }
  return detail::fit_tail_above(curve, x_cut);
}

/// Sub-curve restricted to the statistically resolved region: points whose
/// tail mass is at least `min_tail` (the deep tail of an empirical CCDF is
/// a handful of extreme order statistics and carries no slope information).
inline CcdfCurve resolved_region(const CcdfCurve& curve,
                                 double min_tail = 0.05) {
  CcdfCurve out;
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (curve.tail[i] < min_tail) break;
    out.x.push_back(curve.x[i]);
    out.tail.push_back(curve.tail[i]);
  }
  return out;
}

struct TailStability {
  double exponent_low = 0.0;   // fitted above the lower cutoff
  double exponent_high = 0.0;  // fitted above the higher cutoff
  double decades = 0.0;        // log10 span of the fitted support
  bool power_law = false;
  std::string reason;
};

/// Two-cutoff stability check: a genuine power law fits the same slope above
/// both cutoffs; drifting slopes or an empty tail flag "non-power-law". The
/// cutoffs sit at the 10% and 25% marks of the curve's log support, so slope
/// drift is probed geometrically rather than by sample mass.
inline TailStability tail_stability(const CcdfCurve& curve,
                                    double cutoff_low = 0.10,
                                    double cutoff_high = 0.25,
                                    double max_relative_drift = 0.25,
                                    double min_decades = 0.8) {
  curve.validate();
  TailStability out;
  const double lo = detail::support_mark(curve, 0.0);
  const double hi = detail::support_mark(curve, 1.0);
  out.decades = (lo > 0.0 && hi > lo) ? std::log10(hi / lo) : 0.0;
  try {
    out.exponent_low =
        detail::fit_tail_above(curve, detail::support_mark(curve, cutoff_low))
            .exponent;
    out.exponent_high =
        detail::fit_tail_above(curve, detail::support_mark(curve, cutoff_high))
            .exponent;
  } catch (const EstimationError& e) {
    out.power_law = false;
    out.reason = e.what();
    return out;
  }
  if (out.decades < min_decades) {
    out.power_law = false;
    out.reason = "support spans too little dynamic range";
    return out;
  }
  const double base = std::max(std::abs(out.exponent_low), 1e-12);
  if (std::abs(out.exponent_high - out.exponent_low) > max_relative_drift * base) {
    out.power_law = false;
    out.reason = "slope drifts across cutoffs";
  } else {
    out.power_law = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Two-sample comparison
// ---------------------------------------------------------------------------

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

namespace detail {

/// Asymptotic Kolmogorov survival function Q(lambda).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace detail

/// Two-sample Kolmogorov-Smirnov: sup-distance between empirical CDFs and
/// the asymptotic p-value.
inline KsResult ks_two_sample(std::span<const double> a,
                              std::span<const double> b) {
  if (a.empty() || b.empty())
    throw DataError("ks_two_sample needs non-empty samples");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  double d = 0.0;
  std::size_t i = 0, j = 0;
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }

  const double ne = na * nb / (na + nb);
  const double sqrt_ne = std::sqrt(ne);
  KsResult r;
  r.statistic = d;
  r.p_value = detail::kolmogorov_q((sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d);
  return r;
}

// ---------------------------------------------------------------------------
// Fixation prediction metrics
// ---------------------------------------------------------------------------

struct FixationPoint {
  double x = 0.0;
  double y = 0.0;
};

struct FixationMetrics {
  std::optional<double> nss;  // unset when the map has zero variance
  double auc = 0.5;
};

/// NSS (mean z-scored map value at fixations) and exact ROC AUC with every
/// pixel as a negative.
inline FixationMetrics fixation_metrics(const SaliencyMap& map,
                                        std::span<const FixationPoint> fixations) {
  const int w = map.width(), h = map.height();
  std::vector<double> at_fix;
  for (const FixationPoint& f : fixations) {
    const int px = static_cast<int>(std::lround(f.x));
    const int py = static_cast<int>(std::lround(f.y));
    if (px < 0 || py < 0 || px >= w || py >= h) continue;
    at_fix.push_back(map.values(px, py));
  }
  if (at_fix.empty())
    throw DataError("no fixations inside the map bounds");

  const std::vector<double>& pix = map.values.values();
  const double n = static_cast<double>(pix.size());
  double mean = 0.0;
  for (double v : pix) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : pix) var += (v - mean) * (v - mean);
  var /= n;

  FixationMetrics out;
  if (var > 0.0) {
    const double sd = std::sqrt(var);
    double s = 0.0;
    for (double v : at_fix) s += (v - mean) / sd;
    out.nss = s / static_cast<double>(at_fix.size());
  } else {
    out.auc = 0.5;
    return out;
  }

  std::vector<double> sorted = pix;
  std::sort(sorted.begin(), sorted.end());
  double rank_sum = 0.0;
  for (double v : at_fix) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
    const auto hi = std::upper_bound(lo, sorted.end(), v);
    const double below = static_cast<double>(lo - sorted.begin());
    const double ties = static_cast<double>(hi - lo);
    rank_sum += (below + 0.5 * ties) / n;
  }
  out.auc = rank_sum / static_cast<double>(at_fix.size());
  return out;
}

// ---------------------------------------------------------------------------
// Direction statistics
// ---------------------------------------------------------------------------

struct DirectionHistogram {
  std::vector<double> bin_center;  // radians
  std::vector<double> frequency;   // sums to 1
};

/// Circular histogram of shift directions with bins centered on the cardinal
/// directions (bin count must be a positive multiple of 4).
inline DirectionHistogram direction_histogram(std::span<const GazeShift> shifts,
                                              int bins) {
  if (bins < 4 || bins % 4 != 0)
    throw ParameterError("bins must be >= 4 and divisible by 4");
  DirectionHistogram h;
  h.bin_center.resize(bins);
  h.frequency.assign(bins, 0.0);
  const double width = kTwoPi / bins;
  for (int k = 0; k < bins; ++k)
    h.bin_center[k] = wrap_angle(-kPi + (k + 0.5) * width - width / 2.0);

  std::size_t count = 0;
  for (const GazeShift& s : shifts) {
    // Shift by half a bin so cardinal directions sit at bin centers.
    double t = wrap_angle(s.direction) + kPi + width / 2.0;
    int idx = static_cast<int>(t / width) % bins;
    if (idx < 0) idx += bins;
    h.frequency[idx] += 1.0;
    ++count;
  }
  if (count > 0)
    for (double& f : h.frequency) f /= static_cast<double>(count);
  return h;
}

/// Mean resultant length of a set of angles; 0 for uniform, 1 for aligned.
inline double resultant_length(std::span<const double> angles) {
  if (angles.empty()) return 0.0;
  double c = 0.0, s = 0.0;
  for (double a : angles) {
    c += std::cos(a);
    s += std::sin(a);
  }
  const double n = static_cast<double>(angles.size());
  return std::hypot(c, s) / n;
}

}  // namespace gazewalk
