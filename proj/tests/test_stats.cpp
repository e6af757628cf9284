#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gazewalk/rng.hpp"
#include "gazewalk/stats.hpp"

using namespace gazewalk;

namespace {

GazeSamples make_samples(const std::vector<std::pair<double, double>>& pts,
                         double rate_hz = 100.0) {
  GazeSamples s;
  s.rate_hz = rate_hz;
  const double period = 1000.0 / rate_hz;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s.t_ms.push_back(static_cast<double>(i) * period);
    s.x.push_back(pts[i].first);
    s.y.push_back(pts[i].second);
  }
  return s;
}

}  // namespace

TEST_CASE("still samples segment into one fixation") {
  std::vector<std::pair<double, double>> pts(50, {10.0, 20.0});
  const auto events = segment_events(make_samples(pts), 100.0);
  REQUIRE(events.size() == 1);
  CHECK(events[0].type == GazeEvent::Type::kFixation);
  CHECK(events[0].x == Catch::Approx(10.0));
  CHECK(events[0].y == Catch::Approx(20.0));
}

TEST_CASE("a two-sample jump yields two fixations and one saccade") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({0.0, 0.0});
  pts.push_back({50.0, 0.0});
  for (int i = 0; i < 20; ++i) pts.push_back({100.0, 0.0});
  const auto events = segment_events(make_samples(pts), 1000.0);
  REQUIRE(events.size() == 3);
  CHECK(events[0].type == GazeEvent::Type::kFixation);
  CHECK(events[1].type == GazeEvent::Type::kSaccade);
  CHECK(events[2].type == GazeEvent::Type::kFixation);
  CHECK(events[1].amplitude_px == Catch::Approx(100.0).margin(1.0));
}

TEST_CASE("threshold above all velocities gives a single fixation") {
  std::vector<std::pair<double, double>> pts;
  Rng rng(3);
  for (int i = 0; i < 100; ++i)
    pts.push_back({rng.uniform(0, 5), rng.uniform(0, 5)});
  const auto events = segment_events(make_samples(pts), 1e9);
  REQUIRE(events.size() == 1);
  CHECK(events[0].type == GazeEvent::Type::kFixation);
}

TEST_CASE("events partition the trace without gaps or overlaps") {
  std::vector<std::pair<double, double>> pts;
  Rng rng(5);
  double x = 0.0;
  for (int block = 0; block < 8; ++block) {
    for (int i = 0; i < 25; ++i)
      pts.push_back({x + rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)});
    x += 80.0;
    pts.push_back({x - 40.0, 0.0});
  }
  const auto events = segment_events(make_samples(pts), 500.0);
  REQUIRE(!events.empty());
  CHECK(events.front().first_sample == 0);
  CHECK(events.back().last_sample == pts.size() - 1);
  for (std::size_t i = 1; i < events.size(); ++i) {
    REQUIRE(events[i].first_sample == events[i - 1].last_sample);
    REQUIRE(events[i].type != events[i - 1].type);
  }
}

TEST_CASE("segmentation input validation") {
  std::vector<std::pair<double, double>> two(2, {0.0, 0.0});
  CHECK_THROWS_AS(segment_events(make_samples(two), 10.0), DataError);
  std::vector<std::pair<double, double>> pts(10, {0.0, 0.0});
  CHECK_THROWS_AS(segment_events(make_samples(pts), 0.0), ParameterError);

  GazeSamples irregular = make_samples(pts);
  irregular.t_ms[5] += 25.0;  // > one period off
  CHECK_THROWS_AS(segment_events(irregular, 10.0), DataError);
}

TEST_CASE("ccdf of {1,2,3}") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const CcdfCurve c = ccdf(v);
  REQUIRE(c.x == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(c.tail[0] == Catch::Approx(2.0 / 3.0));
  CHECK(c.tail[1] == Catch::Approx(1.0 / 3.0));
  CHECK(c.tail[2] == 0.0);
  c.validate();
}

TEST_CASE("ccdf of constant data is a step") {
  const std::vector<double> v(10, 4.0);
  const CcdfCurve c = ccdf(v);
  REQUIRE(c.x.size() == 1);
  CHECK(c.tail[0] == 0.0);
}

TEST_CASE("ccdf is invariant under duplication") {
  const std::vector<double> v{0.5, 1.5, 1.5, 9.0};
  std::vector<double> doubled = v;
  doubled.insert(doubled.end(), v.begin(), v.end());
  const CcdfCurve a = ccdf(v);
  const CcdfCurve b = ccdf(doubled);
  CHECK(a.x == b.x);
  CHECK(a.tail == b.tail);
}

TEST_CASE("ccdf plus cdf is one at every support point") {
  Rng rng(7);
  std::vector<double> v(500);
  for (double& x : v) x = rng.uniform(0, 10);
  const CcdfCurve c = ccdf(v);
  // recompute the empirical cdf directly
  std::sort(v.begin(), v.end());
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    const auto it = std::upper_bound(v.begin(), v.end(), c.x[i]);
    const double cdf = static_cast<double>(it - v.begin()) / v.size();
    REQUIRE(c.tail[i] == Catch::Approx(1.0 - cdf).margin(1e-12));
  }
}

TEST_CASE("pareto samples recover their exponent") {
  Rng rng(9);
  std::vector<double> v(100000);
  for (double& x : v) x = std::pow(rng.uniform01(), -1.0 / 1.5);
  const TailFit fit = tail_exponent(ccdf(v), 0.10);
  CHECK(fit.exponent > 1.35);
  CHECK(fit.exponent < 1.65);
}

TEST_CASE("exponential samples are flagged non-power-law") {
  Rng rng(11);
  std::vector<double> v(100000);
  for (double& x : v) x = rng.exponential() + 1.0;
  const double e10 = tail_exponent(ccdf(v), 0.10).exponent;
  const double e50 = tail_exponent(ccdf(v), 0.50).exponent;
  CHECK(e50 > e10);  // slope increases with the cutoff

  const TailStability st = tail_stability(resolved_region(ccdf(v)));
  CHECK(!st.power_law);
}

TEST_CASE("exact power-law grid curve fits exactly") {
  CcdfCurve c;
  for (int i = 0; i <= 200; ++i) {
    const double x = std::pow(10.0, i / 100.0);  // 1 .. 100
    c.x.push_back(x);
    c.tail.push_back(std::pow(x, -2.0));
  }
  const TailFit fit = tail_exponent(c, 0.0);
  CHECK(fit.exponent == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("tail exponent is invariant under rescaling") {
  Rng rng(13);
  std::vector<double> v(20000), scaled(20000);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::pow(rng.uniform01(), -1.0 / 1.2);
    scaled[i] = 37.5 * v[i];
  }
  const double a = tail_exponent(ccdf(v), 0.10).exponent;
  const double b = tail_exponent(ccdf(scaled), 0.10).exponent;
  CHECK(a == Catch::Approx(b).margin(1e-9));
}

TEST_CASE("tail exponent needs enough points") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  CHECK_THROWS_AS(tail_exponent(ccdf(v), 0.10), EstimationError);
}

TEST_CASE("identical samples give ks zero") {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  const KsResult r = ks_two_sample(a, a);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("disjointly shifted uniforms give ks near one half") {
  Rng rng(15);
  std::vector<double> a(10000), b(10000);
  for (double& v : a) v = rng.uniform01();
  for (double& v : b) v = rng.uniform01() + 0.5;
  const KsResult r = ks_two_sample(a, b);
  CHECK(r.statistic > 0.45);
  CHECK(r.statistic < 0.55);
  CHECK(r.p_value < 1e-6);
}

TEST_CASE("ks statistic is symmetric") {
  Rng rng(17);
  std::vector<double> a(317), b(511);
  for (double& v : a) v = rng.normal();
  for (double& v : b) v = rng.normal() * 1.3 + 0.2;
  const KsResult ab = ks_two_sample(a, b);
  const KsResult ba = ks_two_sample(b, a);
  CHECK(ab.statistic == ba.statistic);
  CHECK(ab.p_value == ba.p_value);
}

TEST_CASE("ks null calibration: false positives are rare") {
  Rng rng(19);
  int rejections = 0;
  for (int repeat = 0; repeat < 100; ++repeat) {
    std::vector<double> a(10000), b(10000);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal();
    if (ks_two_sample(a, b).p_value < 0.05) ++rejections;
  }
  CHECK(rejections <= 10);
}

TEST_CASE("fixations at the peak score above chance") {
  SaliencyMap map;
  map.values = Grid(64, 64);
  Rng rng(21);
  for (double& v : map.values.values()) v = rng.uniform01();
  map.values(40, 12) = 5.0;
  const std::vector<FixationPoint> fix{{40.0, 12.0}};
  const FixationMetrics m = fixation_metrics(map, fix);
  REQUIRE(m.nss.has_value());
  CHECK(*m.nss > 0.0);
  CHECK(m.auc > 0.5);
}

TEST_CASE("random fixations score at chance") {
  SaliencyMap map;
  map.values = Grid(64, 64);
  Rng rng(23);
  for (double& v : map.values.values()) v = rng.uniform01();
  std::vector<FixationPoint> fix;
  for (int i = 0; i < 1000; ++i)
    fix.push_back({rng.uniform(0, 63), rng.uniform(0, 63)});
  const FixationMetrics m = fixation_metrics(map, fix);
  CHECK(m.auc > 0.45);
  CHECK(m.auc < 0.55);
}

TEST_CASE("uniform map gives auc exactly one half and undefined nss") {
  SaliencyMap map = uniform_saliency(32, 32);
  const std::vector<FixationPoint> fix{{5.0, 5.0}, {20.0, 11.0}};
  const FixationMetrics m = fixation_metrics(map, fix);
  CHECK(!m.nss.has_value());
  CHECK(m.auc == 0.5);
}

TEST_CASE("nss is invariant under affine map rescaling") {
  SaliencyMap map;
  map.values = Grid(32, 32);
  Rng rng(25);
  for (double& v : map.values.values()) v = rng.uniform01();
  const std::vector<FixationPoint> fix{{3.0, 4.0}, {10.0, 20.0}, {30.0, 7.0}};
  const FixationMetrics base = fixation_metrics(map, fix);

  SaliencyMap scaled = map;
  for (double& v : scaled.values.values()) v = 4.0 * v + 2.0;
  const FixationMetrics after = fixation_metrics(scaled, fix);
  REQUIRE(base.nss.has_value());
  CHECK(*after.nss == Catch::Approx(*base.nss).epsilon(1e-9));
  // auc is invariant under any strictly monotone transform
  SaliencyMap cubed = map;
  for (double& v : cubed.values.values()) v = v * v * v;
  CHECK(fixation_metrics(cubed, fix).auc == Catch::Approx(base.auc).epsilon(1e-12));
}

TEST_CASE("out-of-bounds fixations are an error") {
  SaliencyMap map = uniform_saliency(16, 16);
  const std::vector<FixationPoint> fix{{100.0, 100.0}};
  CHECK_THROWS_AS(fixation_metrics(map, fix), DataError);
}

TEST_CASE("direction histogram puts aligned shifts in one bin") {
  std::vector<GazeShift> shifts(100, make_shift_polar(5.0, 0.0));
  const DirectionHistogram h = direction_histogram(shifts, 16);
  int nonzero = 0;
  for (double f : h.frequency)
    if (f > 0.0) ++nonzero;
  CHECK(nonzero == 1);
}

TEST_CASE("uniform directions fill bins evenly") {
  Rng rng(27);
  std::vector<GazeShift> shifts;
  for (int i = 0; i < 100000; ++i)
    shifts.push_back(make_shift_polar(1.0, rng.uniform(-kPi, kPi)));
  const DirectionHistogram h = direction_histogram(shifts, 16);
  double lo = 1.0, hi = 0.0;
  for (double f : h.frequency) {
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  CHECK(hi / lo < 1.2);
}

TEST_CASE("paired opposite directions give a pi-symmetric histogram") {
  Rng rng(29);
  std::vector<GazeShift> shifts;
  for (int i = 0; i < 5000; ++i) {
    const double t = rng.uniform(-kPi, kPi);
    shifts.push_back(make_shift_polar(1.0, t));
    shifts.push_back(make_shift_polar(1.0, t + kPi));
  }
  const DirectionHistogram h = direction_histogram(shifts, 16);
  for (int k = 0; k < 8; ++k)
    REQUIRE(h.frequency[k] == Catch::Approx(h.frequency[k + 8]).margin(1e-12));
}

TEST_CASE("direction histogram bin validation") {
  const std::vector<GazeShift> shifts{make_shift_polar(1.0, 0.0)};
  CHECK_THROWS_AS(direction_histogram(shifts, 3), ParameterError);
  CHECK_THROWS_AS(direction_histogram(shifts, 10), ParameterError);
}
