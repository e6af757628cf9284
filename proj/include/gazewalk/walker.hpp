#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gazewalk/bias.hpp"
#include "gazewalk/core.hpp"
#include "gazewalk/image.hpp"
#include "gazewalk/rng.hpp"
#include "gazewalk/saliency.hpp"
#include "gazewalk/stable.hpp"

namespace gazewalk {

// ---------------------------------------------------------------------------
// Frames and perception
// ---------------------------------------------------------------------------

/// Ordered sequence of equally sized frames.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t size() const = 0;
  virtual const ImageFrame& frame(std::size_t i) const = 0;

  int width() const { return frame(0).width; }
  int height() const { return frame(0).height; }
  bool dynamic() const { return size() > 1; }
};

class MemoryFrameSource final : public FrameSource {
 public:
  explicit MemoryFrameSource(std::vector<ImageFrame> frames)
      : frames_(std::move(frames)) {
    if (frames_.empty()) throw InputError("frame source is empty");
    for (const ImageFrame& f : frames_)
      if (f.width != frames_[0].width || f.height != frames_[0].height)
        throw DataError("all frames must share dimensions");
  }
  std::size_t size() const override { return frames_.size(); }
  const ImageFrame& frame(std::size_t i) const override { return frames_[i]; }

 private:
  std::vector<ImageFrame> frames_;
};

/// Per-frame saliency with single-frame caching. Frames are evaluated on
/// demand; the surprise method carries belief state and therefore requires
/// in-order access.
class Perception {
 public:
  enum class Method { kItti, kSelfInfo, kSurprise };

  Perception(std::shared_ptr<const FrameSource> frames, Method method,
             int selfinfo_bins = 8, int surprise_bins = 4)
      : frames_(std::move(frames)), method_(method),
        selfinfo_bins_(selfinfo_bins), surprise_bins_(surprise_bins) {
    if (!frames_ || frames_->size() == 0)
      throw InputError("perception needs at least one frame");
  }

  /// Perception over precomputed maps (analytic stimuli, tests).
  static Perception from_maps(std::vector<SaliencyMap> maps) {
    if (maps.empty()) throw InputError("perception needs at least one map");
    Perception p;
    p.maps_ = std::move(maps);
    return p;
  }

  std::size_t frame_count() const {
    return frames_ ? frames_->size() : maps_.size();
  }
  bool dynamic() const { return frame_count() > 1; }
  int width() const {
    return frames_ ? frames_->width() : maps_[0].width();
  }
  int height() const {
    return frames_ ? frames_->height() : maps_[0].height();
  }

  const SaliencyMap& map_for_frame(std::size_t idx) {
    if (!frames_) return maps_[idx];
    if (cached_idx_ && *cached_idx_ == idx) return cache_;
    switch (method_) {
      case Method::kItti:
        cache_ = itti_saliency(frames_->frame(idx));
        break;
      case Method::kSelfInfo: {
        const FeatureStack stack = build_feature_stack(frames_->frame(idx), 1);
        cache_ = self_information_map(stack, selfinfo_bins_);
        break;
      }
      case Method::kSurprise: {
        if (cached_idx_ && idx <= *cached_idx_)
          throw StateError("surprise perception must advance frames in order");
        if (!belief_) {
          belief_ = std::make_unique<LocationBeliefModel>(
              frames_->width(), frames_->height(),
              surprise_bins_ * surprise_bins_ * surprise_bins_);
        }
        const FeatureQuantizer quant(surprise_bins_);
        std::size_t from = cached_idx_ ? *cached_idx_ + 1 : 0;
        for (std::size_t i = from; i <= idx; ++i) {
          const FeatureStack stack = build_feature_stack(frames_->frame(i), 1);
          SurpriseMap s = belief_->observe(quant.quantize(stack));
          if (i == idx) cache_ = to_saliency(std::move(s));
        }
        break;
      }
    }
    cached_idx_ = idx;
    return cache_;
  }

 private:
  Perception() = default;

  static SaliencyMap to_saliency(Grid g) {
    const double total = g.sum();
    if (total <= 0.0) return uniform_saliency(g.width(), g.height());
    SaliencyMap m;
    for (double& v : g.values()) v /= total;
    m.values = std::move(g);
    m.normalization = MapNormalization::kSumToOne;
    return m;
  }

  std::shared_ptr<const FrameSource> frames_;
  Method method_ = Method::kItti;
  int selfinfo_bins_ = 8;
  int surprise_bins_ = 4;
  std::vector<SaliencyMap> maps_;
  std::optional<std::size_t> cached_idx_;
  SaliencyMap cache_;
  std::unique_ptr<LocationBeliefModel> belief_;
};

/// Optional task layer: a value field over the grid and the payoff rule
/// (v1 treats payoff as a deterministic value lookup).
struct GoalSpec {
  std::string id;
  std::optional<Grid> value;
  bool deterministic_payoff = true;

  void validate(int w, int h) const {
    if (!value) return;
    if (value->width() != w || value->height() != h)
      throw DimensionError("goal value map dimensions must match the frame");
    for (double v : value->values())
      if (!std::isfinite(v) || v < 0.0)
        throw DataError("goal values must be finite and nonnegative");
  }
};

struct FoveationParams {
  bool enabled = false;
  double radius_px = 50.0;  // Gaussian attenuation scale
};

/// Realized perception at one instant: base saliency, optionally modulated by
/// the goal value field and a foveal attenuation window around the gaze, then
/// renormalized. Returns the cached map untouched when no modulation applies.
inline const SaliencyMap& perceive(Perception& perception,
                                   std::size_t frame_idx, double gaze_x,
                                   double gaze_y, const GoalSpec* goal,
                                   const FoveationParams& fov,
                                   SaliencyMap& scratch) {
  const SaliencyMap& base = perception.map_for_frame(frame_idx);
  const bool has_goal = goal && goal->value.has_value();
  if (!has_goal && !fov.enabled) return base;

  scratch.values = base.values;
  if (has_goal) {
    const Grid& v = *goal->value;
    for (std::size_t i = 0; i < scratch.values.size(); ++i)
      scratch.values[i] *= v[i];
  }
  if (fov.enabled) {
    const double inv2r2 = 1.0 / (2.0 * fov.radius_px * fov.radius_px);
    const int w = scratch.values.width(), h = scratch.values.height();
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double dx = x - gaze_x, dy = y - gaze_y;
        scratch.values(x, y) *= std::exp(-(dx * dx + dy * dy) * inv2r2);
      }
  }
  const double total = scratch.values.sum();
  if (total <= 0.0) {
    scratch = uniform_saliency(base.width(), base.height());
  } else {
    for (double& v : scratch.values.values()) v /= total;
    scratch.normalization = MapNormalization::kSumToOne;
    scratch.degenerate = false;
  }
  return scratch;
}

// ---------------------------------------------------------------------------
// Oculomotor regimes
// ---------------------------------------------------------------------------

/// Discrete motor mode with its Dirichlet-conjugate probability model.
/// Two regimes collapse to the Beta/Bernoulli case.
struct RegimeState {
  int z = 0;
  std::vector<double> pi;
  std::vector<double> dirichlet_counts;

  int regime_count() const { return static_cast<int>(dirichlet_counts.size()); }
  bool two_state() const { return regime_count() == 2; }

  void validate() const {
    if (dirichlet_counts.size() < 2)
      throw ParameterError("at least two regimes required");
    for (double c : dirichlet_counts)
      if (!(c > 0.0)) throw ParameterError("dirichlet counts must be > 0");
    if (z < 0 || z >= regime_count())
      throw StateError("regime index out of range");
    if (!pi.empty()) {
      double s = 0.0;
      for (double p : pi) s += p;
      if (std::abs(s - 1.0) > 1e-9)
        throw StateError("regime probabilities must sum to 1");
    }
  }
};

/// Sample pi from the Dirichlet prior and the regime from Multinoulli(pi).
inline RegimeState choose_regime(const RegimeState& state, Rng& rng) {
  state.validate();
  RegimeState out = state;
  out.pi.resize(state.dirichlet_counts.size());
  double total = 0.0;
  for (std::size_t k = 0; k < out.pi.size(); ++k) {
    out.pi[k] = rng.gamma(state.dirichlet_counts[k]);
    total += out.pi[k];
  }
  for (double& p : out.pi) p /= total;

  double u = rng.uniform01();
  out.z = static_cast<int>(out.pi.size()) - 1;
  for (std::size_t k = 0; k < out.pi.size(); ++k) {
    if (u < out.pi[k]) {
      out.z = static_cast<int>(k);
      break;
    }
    u -= out.pi[k];
  }
  return out;
}

/// Conjugate hyperparameter update: the observed regime's count grows by the
/// dwell mass (ticks times learning weight).
inline RegimeState update_regime_hyperparams(const RegimeState& state,
                                             int observed_regime,
                                             double dwell_ticks,
                                             double learning_weight) {
  if (observed_regime < 0 || observed_regime >= state.regime_count())
    throw ParameterError("observed regime out of range");
  if (dwell_ticks < 0.0 || learning_weight < 0.0)
    throw ParameterError("dwell and learning weight must be >= 0");
  RegimeState out = state;
  out.dirichlet_counts[observed_regime] += dwell_ticks * learning_weight;
  return out;
}

/// Motor parameters xi(z): step-noise law, drift gain and dwell hazard
/// per regime.
struct RegimeMotor {
  AlphaStableParams noise;
  double drift_gain = 0.0;
  double dwell_hazard = 0.2;  // per-tick probability of regime resampling
};

struct RegimeMotorParams {
  std::vector<RegimeMotor> regimes;

  void validate() const {
    if (regimes.size() < 2)
      throw ParameterError("at least two motor regimes required");
    for (const RegimeMotor& r : regimes) {
      r.noise.validate();
      if (r.drift_gain < 0.0)
        throw ParameterError("drift gain must be >= 0");
      if (!(r.dwell_hazard > 0.0) || r.dwell_hazard > 1.0)
        throw ParameterError("dwell hazard must lie in (0, 1]");
    }
  }

  /// Fixational tremor, pursuit/small-saccade, large-saccade defaults.
  static RegimeMotorParams defaults(int regime_count = 3) {
    RegimeMotorParams p;
    if (regime_count == 2) {
      p.regimes = {
          {{2.0, 0.0, 1.0, 0.0}, 0.0, 0.2},
          {{1.0, 0.0, 30.0, 0.0}, 0.0, 0.35},
      };
      return p;
    }
    p.regimes = {
        {{2.0, 0.0, 1.0, 0.0}, 0.0, 0.2},
        {{1.5, 0.0, 8.0, 0.0}, 20.0, 0.3},
        {{1.0, 0.0, 30.0, 0.0}, 0.0, 0.35},
    };
    return p;
  }
};

// ---------------------------------------------------------------------------
// Walker configuration and state
// ---------------------------------------------------------------------------

struct WalkerConfig {
  int n_candidates = 2;
  double temperature = 0.7;
  double tick_ms = 10.0;
  double potential_scale = 1.0;  // tau
  int regime_count = 3;
  std::vector<double> regime_prior_counts;  // empty -> defaults
  double regime_learning_weight = 0.01;
  int boundary_resample_limit = 32;
  double fixation_threshold_px = 5.0;
  double px_per_degree = 25.0;
  bool foveate = false;
  double foveation_radius_deg = 2.0;
  int max_ticks = 1000;
  std::uint64_t seed = 0;

  std::vector<double> prior_counts() const {
    if (!regime_prior_counts.empty()) return regime_prior_counts;
    if (regime_count == 2) return {8.0, 2.0};
    return {6.5, 1.75, 1.75};
  }

  void validate() const {
    if (n_candidates < 1) throw ParameterError("n_candidates must be >= 1");
    if (!(temperature > 0.0)) throw ParameterError("temperature must be > 0");
    if (!(tick_ms > 0.0)) throw ParameterError("tick must be > 0");
    if (!(potential_scale > 0.0)) throw ParameterError("tau must be > 0");
    if (regime_count != 2 && regime_count != 3)
      throw ParameterError("regime count must be 2 or 3");
    if (!regime_prior_counts.empty() &&
        static_cast<int>(regime_prior_counts.size()) != regime_count)
      throw ParameterError("one prior count per regime required");
    for (double c : regime_prior_counts)
      if (!(c > 0.0)) throw ParameterError("prior counts must be > 0");
    if (regime_learning_weight < 0.0)
      throw ParameterError("learning weight must be >= 0");
    if (boundary_resample_limit < 0)
      throw ParameterError("resample limit must be >= 0");
    if (!(fixation_threshold_px >= 0.0))
      throw ParameterError("fixation threshold must be >= 0");
    if (!(px_per_degree > 0.0))
      throw ParameterError("px_per_degree must be > 0");
    if (!(foveation_radius_deg > 0.0))
      throw ParameterError("foveation radius must be > 0");
    if (max_ticks < 1) throw ParameterError("max_ticks must be >= 1");
  }
};

enum class EventLabel { kFixation, kSaccade, kPursuit };

inline const char* to_string(EventLabel e) {
  switch (e) {
    case EventLabel::kFixation: return "fixation";
    case EventLabel::kSaccade: return "saccade";
    case EventLabel::kPursuit: return "pursuit";
  }
  return "fixation";
}

inline std::optional<EventLabel> event_label_from_string(const std::string& s) {
  if (s == "fixation") return EventLabel::kFixation;
  if (s == "saccade") return EventLabel::kSaccade;
  if (s == "pursuit") return EventLabel::kPursuit;
  return std::nullopt;
}

struct ScanPathRecord {
  double t_ms = 0.0;
  double x = 0.0;
  double y = 0.0;
  int regime = 0;
  EventLabel event = EventLabel::kFixation;
  double dwell_ms = 0.0;
};

struct ScanPath {
  std::vector<ScanPathRecord> records;

  void validate(double width = 0.0, double height = 0.0) const {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (i > 0 && records[i].t_ms <= records[i - 1].t_ms)
        throw DataError("scan path timestamps must be strictly increasing");
      if (width > 0.0 &&
          (records[i].x < 0.0 || records[i].x > width - 1.0 ||
           records[i].y < 0.0 || records[i].y > height - 1.0))
        throw DataError("scan path position out of bounds");
    }
  }
};

// ---------------------------------------------------------------------------
// Candidate proposal, scoring, acceptance
// ---------------------------------------------------------------------------

/// Saliency-derived potential: tau times the map rescaled to peak 1.
/// Lookup is nearest-pixel; the gradient is a central difference on the
/// 3x3 neighborhood.
struct PotentialField {
  const SaliencyMap* map = nullptr;
  double tau = 1.0;
  double inv_max = 0.0;

  PotentialField(const SaliencyMap& m, double tau_) : map(&m), tau(tau_) {
    const double mx = m.values.max();
    inv_max = mx > 0.0 ? 1.0 / mx : 0.0;
  }

  /// For callers that already know the map maximum.
  PotentialField(const SaliencyMap& m, double tau_, double known_max)
      : map(&m), tau(tau_), inv_max(known_max > 0.0 ? 1.0 / known_max : 0.0) {}

  double at(double x, double y) const {
    const int px = static_cast<int>(std::lround(x));
    const int py = static_cast<int>(std::lround(y));
    return tau * map->values.at_clamped(px, py) * inv_max;
  }

  void gradient(double x, double y, double& gx, double& gy) const {
    const int px = static_cast<int>(std::lround(x));
    const int py = static_cast<int>(std::lround(y));
    gx = 0.5 * tau * inv_max *
         (map->values.at_clamped(px + 1, py) -
          map->values.at_clamped(px - 1, py));
    gy = 0.5 * tau * inv_max *
         (map->values.at_clamped(px, py + 1) -
          map->values.at_clamped(px, py - 1));
  }
};

struct Candidate {
  double x = 0.0;
  double y = 0.0;
};

/// Langevin-style proposal: deterministic drift up the potential gradient
/// plus an isotropic alpha-stable increment. Direction comes from the bias
/// prior when one is given, otherwise it is uniform. Out-of-bounds draws are
/// resampled a bounded number of times, then clamped to the frame.
inline std::vector<Candidate> propose_candidates(
    double x, double y, const PotentialField& pot, const RegimeMotor& motor,
    int n_candidates, double tick_ms, int width, int height,
    int resample_limit, const BiasModel* bias,
    std::optional<double> prev_theta, Rng& rng) {
  if (n_candidates < 1) throw ParameterError("n_candidates must be >= 1");

  double gx = 0.0, gy = 0.0;
  if (motor.drift_gain > 0.0) pot.gradient(x, y, gx, gy);
  const double drift_x = motor.drift_gain * gx * tick_ms;
  const double drift_y = motor.drift_gain * gy * tick_ms;

  const double max_x = static_cast<double>(width - 1);
  const double max_y = static_cast<double>(height - 1);

  std::vector<Candidate> out;
  out.reserve(n_candidates);
  for (int c = 0; c < n_candidates; ++c) {
    double cx = 0.0, cy = 0.0;
    for (int attempt = 0;; ++attempt) {
      double theta;
      if (bias) {
        theta = sample_shift(*bias, prev_theta, rng).direction;
      } else {
        theta = rng.uniform(-kPi, kPi);
      }
      const double amp = std::abs(sample_alpha_stable(motor.noise, rng));
      cx = x + drift_x + amp * std::cos(theta);
      cy = y + drift_y + amp * std::sin(theta);
      if (cx >= 0.0 && cx <= max_x && cy >= 0.0 && cy <= max_y) break;
      if (attempt >= resample_limit) {
        cx = std::clamp(cx, 0.0, max_x);
        cy = std::clamp(cy, 0.0, max_y);
        break;
      }
    }
    out.push_back({cx, cy});
  }
  return out;
}

/// Expected gain of relocating: saliency difference, or value-weighted
/// saliency difference when a goal field is present.
inline double score_candidate(const Candidate& cand, const SaliencyMap& map,
                              double from_x, double from_y,
                              const GoalSpec* goal) {
  auto value_at = [&](double x, double y) {
    const int px = static_cast<int>(std::lround(x));
    const int py = static_cast<int>(std::lround(y));
    double v = map.values.at_clamped(px, py);
    if (goal && goal->value)
      v *= goal->value->at_clamped(px, py);
    return v;
  };
  return value_at(cand.x, cand.y) - value_at(from_x, from_y);
}

/// Metropolis rule on the potential: uphill moves always pass, downhill
/// moves pass with probability exp((v1 - v0) / T).
inline bool accept_metropolis(double v0, double v1, double temperature,
                              Rng& rng) {
  if (!(temperature > 0.0)) throw ParameterError("temperature must be > 0");
  if (v1 >= v0) return true;
  return rng.uniform01() < std::exp((v1 - v0) / temperature);
}

// ---------------------------------------------------------------------------
// The walker
// ---------------------------------------------------------------------------

struct WalkerState {
  double x = 0.0;
  double y = 0.0;
  std::size_t tick = 0;
  RegimeState regime;
  std::optional<double> prev_theta;
  double dwell_ms = 0.0;
  double regime_dwell_ticks = 0.0;
};

/// Iterates the perceive / choose-motor / relocate cycle and emits one
/// time-stamped record per tick. Deterministic for a fixed seed.
class Walker {
 public:
  Walker(const WalkerConfig& config, const RegimeMotorParams& motor,
         Perception& perception, const BiasModel* bias = nullptr,
         const GoalSpec* goal = nullptr)
      : config_(config), motor_(motor), perception_(&perception), bias_(bias),
        goal_(goal), rng_(config.seed) {
    config_.validate();
    motor_.validate();
    if (static_cast<int>(motor_.regimes.size()) != config_.regime_count)
      throw ParameterError("motor params must match the regime count");
    if (goal_) goal_->validate(perception_->width(), perception_->height());

    state_.x = (perception_->width() - 1) / 2.0;
    state_.y = (perception_->height() - 1) / 2.0;
    state_.regime.dirichlet_counts = config_.prior_counts();
    state_.regime = choose_regime(state_.regime, rng_);

    foveation_.enabled = config_.foveate;
    foveation_.radius_px =
        config_.foveation_radius_deg * config_.px_per_degree;
  }

  const WalkerState& state() const { return state_; }

  /// One action/perception cycle; nullopt when the frame stream ends.
  std::optional<ScanPathRecord> step() {
    const std::size_t frame_idx =
        perception_->dynamic() ? state_.tick : std::size_t{0};
    if (perception_->dynamic() && frame_idx >= perception_->frame_count())
      return std::nullopt;

    // The perceived map only changes with the frame unless foveation makes
    // it gaze-dependent; skip the full-map pass when nothing changed.
    if (foveation_.enabled || !perceived_frame_ ||
        *perceived_frame_ != frame_idx) {
      current_map_ = &perceive(*perception_, frame_idx, state_.x, state_.y,
                               goal_, foveation_, scratch_);
      current_max_ = current_map_->values.max();
      perceived_frame_ = frame_idx;
    }
    const SaliencyMap& w = *current_map_;
    const PotentialField pot(w, config_.potential_scale, current_max_);

    // Sticky regime: resample only when the dwell hazard fires.
    const RegimeMotor* motor = &motor_.regimes[state_.regime.z];
    if (rng_.uniform01() < motor->dwell_hazard) {
      state_.regime = update_regime_hyperparams(
          state_.regime, state_.regime.z, state_.regime_dwell_ticks,
          config_.regime_learning_weight);
      state_.regime = choose_regime(state_.regime, rng_);
      state_.regime_dwell_ticks = 0.0;
      motor = &motor_.regimes[state_.regime.z];
    }
    state_.regime_dwell_ticks += 1.0;

    const std::vector<Candidate> candidates = propose_candidates(
        state_.x, state_.y, pot, *motor, config_.n_candidates, config_.tick_ms,
        perception_->width(), perception_->height(),
        config_.boundary_resample_limit, bias_, state_.prev_theta, rng_);

    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double s =
          score_candidate(candidates[i], w, state_.x, state_.y, goal_);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }

    const Candidate& target = candidates[best];
    const double v0 = pot.at(state_.x, state_.y);
    const double v1 = pot.at(target.x, target.y);
    double moved = 0.0;
    if (accept_metropolis(v0, v1, config_.temperature, rng_)) {
      const double dx = target.x - state_.x, dy = target.y - state_.y;
      moved = std::hypot(dx, dy);
      if (moved > 0.0) state_.prev_theta = std::atan2(dy, dx);
      state_.x = target.x;
      state_.y = target.y;
    }

    if (moved < config_.fixation_threshold_px)
      state_.dwell_ms += config_.tick_ms;
    else
      state_.dwell_ms = 0.0;

    ScanPathRecord rec;
    rec.t_ms = (static_cast<double>(state_.tick) + 1.0) * config_.tick_ms;
    rec.x = state_.x;
    rec.y = state_.y;
    rec.regime = state_.regime.z;
    rec.dwell_ms = state_.dwell_ms;
    if (moved < config_.fixation_threshold_px)
      rec.event = EventLabel::kFixation;
    else if (state_.regime.z == 1 && config_.regime_count == 3 &&
             perception_->dynamic())
      rec.event = EventLabel::kPursuit;
    else
      rec.event = EventLabel::kSaccade;

    ++state_.tick;
    return rec;
  }

  ScanPath run() {
    ScanPath path;
    const std::size_t limit =
        perception_->dynamic()
            ? std::min<std::size_t>(config_.max_ticks,
                                    perception_->frame_count())
            : static_cast<std::size_t>(config_.max_ticks);
    path.records.reserve(limit);
    while (state_.tick < limit) {
      std::optional<ScanPathRecord> rec = step();
      if (!rec) break;
      path.records.push_back(*rec);
    }
    return path;
  }

 private:
  WalkerConfig config_;
  RegimeMotorParams motor_;
  Perception* perception_;
  const BiasModel* bias_;
  const GoalSpec* goal_;
  Rng rng_;
  WalkerState state_;
  SaliencyMap scratch_;
  FoveationParams foveation_;
  const SaliencyMap* current_map_ = nullptr;
  double current_max_ = 0.0;
  std::optional<std::size_t> perceived_frame_;
};

/// Convenience wrapper matching the one-call contract.
inline ScanPath run_scanpath(Perception& perception,
                             const WalkerConfig& config,
                             const RegimeMotorParams& motor,
                             const BiasModel* bias = nullptr,
                             const GoalSpec* goal = nullptr) {
  Walker walker(config, motor, perception, bias, goal);
  return walker.run();
}

}  // namespace gazewalk
