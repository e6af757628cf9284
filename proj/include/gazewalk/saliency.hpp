#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gazewalk/core.hpp"
#include "gazewalk/image.hpp"

namespace gazewalk {

// ---------------------------------------------------------------------------
// Feature extraction
// ---------------------------------------------------------------------------

enum class FeatureChannel {
  kIntensity = 0,
  kRedGreen,
  kBlueYellow,
  kOrient0,
  kOrient45,
  kOrient90,
  kOrient135,
};
inline constexpr int kFeatureChannelCount = 7;

/// Dyadic feature pyramids: intensity, two color-opponency channels and
/// orientation energy at four orientations. Level 0 matches the source frame;
/// each further level is ceil(previous / 2).
struct FeatureStack {
  int base_width = 0;
  int base_height = 0;
  std::array<std::vector<Grid>, kFeatureChannelCount> pyramids;

  int levels() const { return static_cast<int>(pyramids[0].size()); }
  const Grid& level(FeatureChannel ch, int lv) const {
    return pyramids[static_cast<int>(ch)][lv];
  }
};

namespace detail {

inline int reflect_index(int i, int n) {
  // Mirror across the border sample (reflect-101).
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

/// Separable 5-tap binomial blur, reflect padding.
inline Grid binomial_blur(const Grid& src) {
  static constexpr double k[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16,
                                  1.0 / 16};
  const int w = src.width(), h = src.height();
  Grid tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int t = -2; t <= 2; ++t)
        s += k[t + 2] * src(reflect_index(x + t, w), y);
      tmp(x, y) = s;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int t = -2; t <= 2; ++t)
        s += k[t + 2] * tmp(x, reflect_index(y + t, h));
      out(x, y) = s;
    }
  return out;
}

/// Blur then keep even samples; output is ceil(n/2) along each axis.
inline Grid downsample(const Grid& src) {
  const Grid blurred = binomial_blur(src);
  const int w = (src.width() + 1) / 2, h = (src.height() + 1) / 2;
  Grid out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(x, y) = blurred(2 * x, 2 * y);
  return out;
}

/// Bilinear resize with pixel-center alignment.
inline Grid resize_bilinear(const Grid& src, int out_w, int out_h) {
  Grid out(out_w, out_h);
  const double sx = static_cast<double>(src.width()) / out_w;
  const double sy = static_cast<double>(src.height()) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0,
                                 static_cast<double>(src.height() - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0,
                                   static_cast<double>(src.width() - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width() - 1);
      const double tx = fx - x0;
      const double top = src(x0, y0) + tx * (src(x1, y0) - src(x0, y0));
      const double bot = src(x0, y1) + tx * (src(x1, y1) - src(x0, y1));
      out(x, y) = top + ty * (bot - top);
    }
  }
  return out;
}

/// Sobel gradient pair, reflect padding.
inline void sobel(const Grid& src, Grid& gx, Grid& gy) {
  const int w = src.width(), h = src.height();
  gx = Grid(w, h);
  gy = Grid(w, h);
  auto px = [&](int x, int y) {
    return src(reflect_index(x, w), reflect_index(y, h));
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      gx(x, y) = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1) -
                  px(x - 1, y - 1) - 2.0 * px(x - 1, y) - px(x - 1, y + 1)) /
                 8.0;
      gy(x, y) = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1) -
                  px(x - 1, y - 1) - 2.0 * px(x, y - 1) - px(x + 1, y - 1)) /
                 8.0;
    }
}

inline std::vector<Grid> build_pyramid(Grid level0, int levels) {
  std::vector<Grid> pyr;
  pyr.reserve(levels);
  pyr.push_back(std::move(level0));
  for (int l = 1; l < levels; ++l) pyr.push_back(downsample(pyr.back()));
  return pyr;
}

}  // namespace detail

/// Decomposes a frame into the seven feature pyramids. Grayscale frames get
/// all-zero opponency channels. Orientation energy is the directional
/// derivative magnitude of the intensity channel, computed per level.
inline FeatureStack build_feature_stack(const ImageFrame& frame, int levels) {
  if (levels < 1) throw ParameterError("levels must be >= 1");
  frame.validate();
  const int min_dim = std::min(frame.width, frame.height);
  if (min_dim / (1 << (levels - 1)) < 8)
    throw DimensionError("frame too small for requested pyramid levels");

  Grid intensity = frame.luminance();
  Grid rg(frame.width, frame.height), by(frame.width, frame.height);
  if (frame.channels == 3) {
    for (int y = 0; y < frame.height; ++y)
      for (int x = 0; x < frame.width; ++x) {
        const double r = frame.at(x, y, 0), g = frame.at(x, y, 1),
                     b = frame.at(x, y, 2);
        const double rr = std::max(0.0, r - (g + b) / 2.0);
        const double gg = std::max(0.0, g - (r + b) / 2.0);
        const double bb = std::max(0.0, b - (r + g) / 2.0);
        const double yy =
            std::max(0.0, (r + g) / 2.0 - std::abs(r - g) / 2.0 - b);
        rg(x, y) = rr - gg;
        by(x, y) = bb - yy;
      }
  }

  FeatureStack stack;
  stack.base_width = frame.width;
  stack.base_height = frame.height;
  auto& pyr = stack.pyramids;
  pyr[static_cast<int>(FeatureChannel::kIntensity)] =
      detail::build_pyramid(intensity, levels);
  pyr[static_cast<int>(FeatureChannel::kRedGreen)] =
      detail::build_pyramid(std::move(rg), levels);
  pyr[static_cast<int>(FeatureChannel::kBlueYellow)] =
      detail::build_pyramid(std::move(by), levels);

  static constexpr double kAngles[4] = {0.0, kPi / 4, kPi / 2, 3 * kPi / 4};
  for (int a = 0; a < 4; ++a)
    pyr[static_cast<int>(FeatureChannel::kOrient0) + a].resize(levels);
  const auto& ipyr = pyr[static_cast<int>(FeatureChannel::kIntensity)];
  for (int l = 0; l < levels; ++l) {
    Grid gx, gy;
    detail::sobel(ipyr[l], gx, gy);
    for (int a = 0; a < 4; ++a) {
      const double c = std::cos(kAngles[a]), s = std::sin(kAngles[a]);
      Grid e(gx.width(), gx.height());
      for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = std::abs(c * gx[i] + s * gy[i]);
      pyr[static_cast<int>(FeatureChannel::kOrient0) + a][l] = std::move(e);
    }
  }
  return stack;
}

/// Per-channel center-surround contrast, accumulated over (center, center +
/// delta) level pairs and returned at level-0 resolution.
inline std::vector<Grid> center_surround_conspicuity(
    const FeatureStack& stack, const std::vector<int>& center_levels,
    const std::vector<int>& delta_levels) {
  if (center_levels.empty() || delta_levels.empty())
    throw ParameterError("center/delta level sets must be non-empty");
  for (int c : center_levels)
    for (int d : delta_levels)
      if (c < 0 || d < 1 || c + d >= stack.levels())
        throw DimensionError("center or surround level outside the stack");

  std::vector<Grid> out;
  out.reserve(kFeatureChannelCount);
  for (int ch = 0; ch < kFeatureChannelCount; ++ch) {
    Grid acc(stack.base_width, stack.base_height);
    for (int c : center_levels)
      for (int d : delta_levels) {
        const Grid up_c = detail::resize_bilinear(
            stack.pyramids[ch][c], stack.base_width, stack.base_height);
        const Grid up_s = detail::resize_bilinear(
            stack.pyramids[ch][c + d], stack.base_width, stack.base_height);
        for (std::size_t i = 0; i < acc.size(); ++i)
          acc[i] += std::abs(up_c[i] - up_s[i]);
      }
    out.push_back(std::move(acc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Saliency maps
// ---------------------------------------------------------------------------

enum class MapNormalization { kNone, kSumToOne, kMaxToOne };

/// Nonnegative scalar field over the image grid.
struct SaliencyMap {
  Grid values;
  MapNormalization normalization = MapNormalization::kNone;
  bool degenerate = false;  // input carried no usable contrast

  int width() const { return values.width(); }
  int height() const { return values.height(); }

  void validate() const {
    for (double v : values.values())
      if (!std::isfinite(v) || v < 0.0)
        throw DataError("saliency values must be finite and nonnegative");
    if (normalization == MapNormalization::kSumToOne &&
        std::abs(values.sum() - 1.0) > 1e-9)
      throw DataError("sum-normalized map must sum to 1");
  }
};

inline SaliencyMap uniform_saliency(int width, int height) {
  SaliencyMap m;
  m.values = Grid(width, height,
                  1.0 / (static_cast<double>(width) * height));
  m.normalization = MapNormalization::kSumToOne;
  m.degenerate = true;
  return m;
}

namespace detail {

/// Max-promotion operator: rescale to [0,1], then weight the whole map by
/// (1 - mean of the non-global local maxima)^2, so maps with one dominant
/// peak are promoted over maps with many comparable peaks.
inline Grid promote_unique_peaks(const Grid& map) {
  Grid out = map;
  const double m = out.max();
  if (m <= 0.0) return out;
  for (double& v : out.values()) v /= m;

  double local_sum = 0.0;
  std::size_t local_n = 0;
  const int w = out.width(), h = out.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = out(x, y);
      if (v >= 1.0) continue;  // global maximum is not counted
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (out(nx, ny) >= v) {
            is_max = false;
            break;
          }
        }
      if (is_max) {
        local_sum += v;
        ++local_n;
      }
    }
  const double mean_local = local_n ? local_sum / local_n : 0.0;
  const double factor = (1.0 - mean_local) * (1.0 - mean_local);
  for (double& v : out.values()) v *= factor;
  return out;
}

}  // namespace detail

/// Weighted combination of conspicuity maps into a probability map.
/// All-zero input resolves to the uniform map, flagged degenerate.
inline SaliencyMap normalize_and_combine(const std::vector<Grid>& maps,
                                         const std::vector<double>& weights) {
  if (maps.empty()) throw ParameterError("no maps to combine");
  if (maps.size() != weights.size())
    throw ParameterError("one weight per map required");
  for (const Grid& m : maps)
    if (!m.same_shape(maps.front()))
      throw DimensionError("maps must share dimensions");
  bool any_positive = false;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw ParameterError("weights must be nonnegative");
    if (w > 0.0) any_positive = true;
  }
  if (!any_positive) throw ParameterError("at least one weight must be > 0");

  Grid combined(maps.front().width(), maps.front().height());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (weights[i] == 0.0) continue;  // zero-weight maps are skipped outright
    const Grid promoted = detail::promote_unique_peaks(maps[i]);
    for (std::size_t j = 0; j < combined.size(); ++j)
      combined[j] += weights[i] * promoted[j];
  }

  const double total = combined.sum();
  if (total <= 0.0)
    return uniform_saliency(combined.width(), combined.height());

  SaliencyMap out;
  for (double& v : combined.values()) v /= total;
  out.values = std::move(combined);
  out.normalization = MapNormalization::kSumToOne;
  return out;
}

// ---------------------------------------------------------------------------
// Self-information saliency
// ---------------------------------------------------------------------------

/// Joint quantization of (intensity, red-green, blue-yellow) at level 0.
/// Fixed per-channel ranges keep the bin assignment deterministic.
class FeatureQuantizer {
 public:
  explicit FeatureQuantizer(int bins_per_channel)
      : bins_(bins_per_channel) {
    if (bins_ < 2) throw ParameterError("bins must be >= 2");
    if (joint_bins() > 4096)
      throw ParameterError("product binning capped at 4096 cells");
  }

  int bins_per_channel() const { return bins_; }
  int joint_bins() const { return bins_ * bins_ * bins_; }

  std::vector<int> quantize(const FeatureStack& stack) const {
    const Grid& in = stack.level(FeatureChannel::kIntensity, 0);
    const Grid& rg = stack.level(FeatureChannel::kRedGreen, 0);
    const Grid& by = stack.level(FeatureChannel::kBlueYellow, 0);
    std::vector<int> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
      const int bi = bin_of(in[i], 0.0, 1.0);
      const int brg = bin_of(rg[i], -1.0, 1.0);
      const int bby = bin_of(by[i], -1.0, 1.0);
      out[i] = (bi * bins_ + brg) * bins_ + bby;
    }
    return out;
  }

 private:
  int bin_of(double v, double lo, double hi) const {
    const double t = (v - lo) / (hi - lo);
    int b = static_cast<int>(t * bins_);
    return std::clamp(b, 0, bins_ - 1);
  }

  int bins_;
};

/// Scores each pixel by -log of the empirical frequency of its quantized
/// feature vector across the frame; rare features score high.
inline SaliencyMap self_information_map(const FeatureStack& stack, int bins) {
  const FeatureQuantizer quant(bins);
  const std::vector<int> cells = quant.quantize(stack);

  std::vector<double> counts(quant.joint_bins(), 0.0);
  for (int c : cells) counts[c] += 1.0;
  const double n = static_cast<double>(cells.size());

  Grid score(stack.base_width, stack.base_height);
  for (std::size_t i = 0; i < cells.size(); ++i)
    score[i] = -std::log(counts[cells[i]] / n);

  const double total = score.sum();
  if (total <= 0.0)
    return uniform_saliency(stack.base_width, stack.base_height);

  SaliencyMap out;
  for (double& v : score.values()) v /= total;
  out.values = std::move(score);
  out.normalization = MapNormalization::kSumToOne;
  return out;
}

// ---------------------------------------------------------------------------
// Divergence and surprise
// ---------------------------------------------------------------------------

/// Discrete Kullback-Leibler divergence, sum of p*log(p/q) with 0*log(0/q)=0.
inline double kl_divergence(std::span<const double> p,
                            std::span<const double> q) {
  if (p.size() != q.size())
    throw DimensionError("distributions must share support size");
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0)
      throw DataError("probabilities must be nonnegative");
    sp += p[i];
    sq += q[i];
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
    throw DataError("distributions must sum to 1");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0)
      throw DataError("support error: q is zero where p has mass");
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl < 0.0 ? 0.0 : kl;  // clip float residue on p == q
}

namespace detail {

/// Digamma via upward recurrence and the asymptotic series.
inline double digamma(double x) {
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 / 252));
  return result;
}

}  // namespace detail

using SurpriseMap = Grid;

/// Per-pixel Dirichlet belief over quantized feature bins. The conjugate
/// update keeps the posterior in closed form, so surprise (the KL divergence
/// from prior to posterior) is exact.
class LocationBeliefModel {
 public:
  LocationBeliefModel(int width, int height, int bins,
                      double prior_count = 1.0)
      : width_(width), height_(height), bins_(bins),
        counts_(static_cast<std::size_t>(width) * height * bins, prior_count),
        totals_(static_cast<std::size_t>(width) * height,
                prior_count * bins) {
    if (width <= 0 || height <= 0)
      throw DimensionError("model dimensions must be positive");
    if (bins < 2) throw ParameterError("bins must be >= 2");
    if (!(prior_count > 0.0))
      throw ParameterError("prior counts must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int bins() const { return bins_; }

  double count(std::size_t pixel, int bin) const {
    return counts_[pixel * bins_ + bin];
  }
  double total(std::size_t pixel) const { return totals_[pixel]; }

  /// Surprise of observing one bin per pixel, then the conjugate count
  /// update. For a single observation the Dirichlet KL collapses to
  ///   log(A/a_b) + psi(a_b + 1) - psi(A + 1).
  SurpriseMap observe(const std::vector<int>& pixel_bins) {
    if (pixel_bins.size() != totals_.size())
      throw DimensionError("model and frame dimensions do not match");
    SurpriseMap surprise(width_, height_);
    for (std::size_t p = 0; p < pixel_bins.size(); ++p) {
      const int b = pixel_bins[p];
      if (b < 0 || b >= bins_)
        throw DataError("bin index out of range");
      const double ab = counts_[p * bins_ + b];
      const double total = totals_[p];
      double s = std::log(total / ab) + detail::digamma(ab + 1.0) -
                 detail::digamma(total + 1.0);
      surprise[p] = s < 0.0 ? 0.0 : s;
      counts_[p * bins_ + b] = ab + 1.0;
      totals_[p] = total + 1.0;
    }
    return surprise;
  }

 private:
  int width_, height_, bins_;
  std::vector<double> counts_;
  std::vector<double> totals_;
};

inline SurpriseMap bayesian_surprise_step(LocationBeliefModel& model,
                                          const std::vector<int>& pixel_bins) {
  return model.observe(pixel_bins);
}

// ---------------------------------------------------------------------------
// Itti-style pipeline front end
// ---------------------------------------------------------------------------

struct IttiOptions {
  int levels = 4;
  std::vector<int> center_levels = {0, 1};
  std::vector<int> delta_levels = {2, 3};
  // One weight per feature channel, intensity first.
  std::vector<double> weights = {1.0, 1.0, 1.0, 0.25, 0.25, 0.25, 0.25};
};

/// Full contrast pipeline: feature stack, center-surround, combination.
/// Pyramid depth and level pairs shrink to fit small frames.
inline SaliencyMap itti_saliency(const ImageFrame& frame,
                                 const IttiOptions& opt = {}) {
  int levels = opt.levels;
  const int min_dim = std::min(frame.width, frame.height);
  while (levels > 1 && min_dim / (1 << (levels - 1)) < 8) --levels;
  if (levels < 2)
    throw DimensionError("frame too small for center-surround analysis");

  std::vector<int> centers;
  for (int c : opt.center_levels)
    if (c >= 0 && c + 1 < levels) centers.push_back(c);
  if (centers.empty()) centers.push_back(0);
  const int max_center = *std::max_element(centers.begin(), centers.end());

  std::vector<int> deltas;
  for (int d : opt.delta_levels)
    if (d >= 1 && max_center + d < levels) deltas.push_back(d);
  if (deltas.empty()) deltas.push_back(levels - 1 - max_center);

  const FeatureStack stack = build_feature_stack(frame, levels);
  const std::vector<Grid> consp =
      center_surround_conspicuity(stack, centers, deltas);
  return normalize_and_combine(consp, opt.weights);
}

}  // namespace gazewalk
