#pragma once

#include <cmath>
#include <vector>

#include "gazewalk/core.hpp"

namespace gazewalk {

/// One raster frame: grayscale (1 channel) or RGB (3 channels), row-major,
/// intensities in [0, 1].
struct ImageFrame {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> data;
  double timestamp_ms = 0.0;

  ImageFrame() = default;
  ImageFrame(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {
    validate_shape();
  }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
  double at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }

  void validate_shape() const {
    if (width <= 0 || height <= 0)
      throw DimensionError("frame dimensions must be positive");
    if (channels != 1 && channels != 3)
      throw ParameterError("frame must have 1 or 3 channels");
    if (data.size() != static_cast<std::size_t>(width) * height * channels)
      throw DimensionError("frame data length does not match width*height*channels");
  }

  void validate() const {
    validate_shape();
    for (double v : data)
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw DataError("frame values must be finite and in [0,1]");
  }

  /// Luminance view; for grayscale this copies the single channel.
  Grid luminance() const {
    Grid g(width, height);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        g(x, y) = channels == 1
                      ? at(x, y, 0)
                      : (at(x, y, 0) + at(x, y, 1) + at(x, y, 2)) / 3.0;
    return g;
  }
};

}  // namespace gazewalk
