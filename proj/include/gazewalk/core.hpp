#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gazewalk {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : Error {
  using Error::Error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};
struct InputError : Error {
  using Error::Error;
};
struct EstimationError : Error {
  using Error::Error;
};
struct StateError : Error {
  using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double theta) {
  theta = std::fmod(theta, kTwoPi);
  if (theta <= -kPi) theta += kTwoPi;
  if (theta > kPi) theta -= kTwoPi;
  return theta;
}

/// Dense row-major scalar field over a pixel grid.
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, double fill = 0.0)
      : width_(width), height_(height),
        values_(static_cast<std::size_t>(width) * height, fill) {
    if (width <= 0 || height <= 0)
      throw DimensionError("Grid dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(int x, int y) {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  double operator()(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Clamped lookup; coordinates outside the grid read the nearest border cell.
  double at_clamped(int x, int y) const {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return (*this)(x, y);
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }
  double max() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_)
      if (v > m) m = v;
    return m;
  }
  double min() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_)
      if (v < m) m = v;
    return m;
  }
  std::size_t argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values_.size(); ++i)
      if (values_[i] > values_[best]) best = i;
    return best;
  }

  bool same_shape(const Grid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

}  // namespace gazewalk
