#pragma once

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gazewalk/bias.hpp"
#include "gazewalk/core.hpp"
#include "gazewalk/image.hpp"
#include "gazewalk/saliency.hpp"
#include "gazewalk/walker.hpp"

namespace gazewalk {

// ---------------------------------------------------------------------------
// Raster images: PNG and PNM
// ---------------------------------------------------------------------------

namespace detail {

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWriteCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngWriteCloser() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

inline ImageFrame read_png(const std::string& path) {
  PngReadCloser ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw InputError("cannot open image: " + path);
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) throw Error("libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw Error("libpng info init failed");
  if (setjmp(png_jmpbuf(ctx.png)))
    throw FormatError("malformed PNG: " + path);

  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);

  png_set_strip_16(ctx.png);
  png_set_packing(ctx.png);
  if (png_get_color_type(ctx.png, ctx.info) == PNG_COLOR_TYPE_PALETTE)
    png_set_palette_to_rgb(ctx.png);
  if (png_get_color_type(ctx.png, ctx.info) == PNG_COLOR_TYPE_GRAY &&
      png_get_bit_depth(ctx.png, ctx.info) < 8)
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
  const png_byte color = png_get_color_type(ctx.png, ctx.info);
  const int channels = color == PNG_COLOR_TYPE_GRAY ? 1 : 3;

  std::vector<png_byte> row(png_get_rowbytes(ctx.png, ctx.info));
  ImageFrame frame(static_cast<int>(w), static_cast<int>(h), channels);
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(ctx.png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c)
        frame.at(static_cast<int>(x), static_cast<int>(y), c) =
            row[x * channels + c] / 255.0;
  }
  png_read_end(ctx.png, nullptr);
  return frame;
}

inline void skip_pnm_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
}

inline int read_pnm_int(std::istream& in) {
  skip_pnm_space(in);
  int v = 0;
  if (!(in >> v)) throw FormatError("truncated PNM header");
  return v;
}

inline ImageFrame read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open image: " + path);
  char p = 0, kind = 0;
  in.get(p).get(kind);
  if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6'))
    throw FormatError("unsupported PNM type in " + path);
  const bool color = kind == '3' || kind == '6';
  const bool binary = kind == '5' || kind == '6';
  const int w = read_pnm_int(in);
  const int h = read_pnm_int(in);
  const int maxval = read_pnm_int(in);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
    throw FormatError("bad PNM header in " + path);

  ImageFrame frame(w, h, color ? 3 : 1);
  const std::size_t n = frame.data.size();
  if (binary) {
    in.get();  // single whitespace after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(n * bytes);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
      throw FormatError("truncated PNM data in " + path);
    for (std::size_t i = 0; i < n; ++i) {
      const int v = bytes == 2 ? (buf[2 * i] << 8) | buf[2 * i + 1] : buf[i];
      frame.data[i] = static_cast<double>(v) / maxval;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      frame.data[i] = static_cast<double>(read_pnm_int(in)) / maxval;
  }
  return frame;
}

}  // namespace detail

/// Load an 8-bit grayscale or RGB raster (PNG or PNM, sniffed by magic).
inline ImageFrame read_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw InputError("cannot open image: " + path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  probe.close();
  if (magic[0] == '\x89' && magic[1] == 'P') return detail::read_png(path);
  if (magic[0] == 'P') return detail::read_pnm(path);
  throw FormatError("unrecognized image format: " + path);
}

/// 16-bit grayscale PNG of a scalar field, rescaled so the peak maps to
/// 65535. Used for map previews.
inline void write_png16(const std::string& path, const Grid& grid) {
  detail::PngWriteCloser ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw InputError("cannot write image: " + path);
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) throw Error("libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw Error("libpng info init failed");
  if (setjmp(png_jmpbuf(ctx.png)))
    throw Error("PNG write failed: " + path);

  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, grid.width(), grid.height(), 16,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  const double peak = grid.max();
  const double scale = peak > 0.0 ? 65535.0 / peak : 0.0;
  std::vector<png_byte> row(static_cast<std::size_t>(grid.width()) * 2);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const auto v = static_cast<std::uint16_t>(
          std::lround(std::clamp(grid(x, y) * scale, 0.0, 65535.0)));
      row[2 * x] = static_cast<png_byte>(v >> 8);  // network byte order
      row[2 * x + 1] = static_cast<png_byte>(v & 0xff);
    }
    png_write_row(ctx.png, row.data());
  }
  png_write_end(ctx.png, nullptr);
}

// ---------------------------------------------------------------------------
// SALMAP portable float grid
// ---------------------------------------------------------------------------

inline const char* to_string(MapNormalization n) {
  switch (n) {
    case MapNormalization::kSumToOne: return "sum";
    case MapNormalization::kMaxToOne: return "max";
    case MapNormalization::kNone: return "none";
  }
  return "none";
}

inline void write_salmap(const std::string& path, const SaliencyMap& map) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write map: " + path);
  out << "SALMAP v1 " << map.width() << ' ' << map.height() << ' '
      << to_string(map.normalization) << '\n';
  char buf[32];
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      std::snprintf(buf, sizeof buf, "%.17g", map.values(x, y));
      out << buf << (x + 1 == map.width() ? '\n' : ' ');
    }
  }
}

inline SaliencyMap read_salmap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open map: " + path);
  std::string tag, version, norm;
  int w = 0, h = 0;
  in >> tag >> version >> w >> h >> norm;
  if (tag != "SALMAP" || version != "v1")
    throw FormatError("not a SALMAP v1 file: " + path);
  if (w <= 0 || h <= 0) throw FormatError("bad SALMAP dimensions in " + path);

  SaliencyMap map;
  map.values = Grid(w, h);
  if (norm == "sum")
    map.normalization = MapNormalization::kSumToOne;
  else if (norm == "max")
    map.normalization = MapNormalization::kMaxToOne;
  else if (norm == "none")
    map.normalization = MapNormalization::kNone;
  else
    throw FormatError("unknown SALMAP normalization: " + norm);
  for (std::size_t i = 0; i < map.values.size(); ++i)
    if (!(in >> map.values[i]))
      throw FormatError("truncated SALMAP data in " + path);
  return map;
}

// ---------------------------------------------------------------------------
// Frame directories
// ---------------------------------------------------------------------------

namespace detail {

/// Shell-style match supporting '*' and '?'.
inline bool glob_match(const std::string& pattern, const std::string& name) {
  std::size_t p = 0, n = 0, star = std::string::npos, mark = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = n;
    } else if (star != std::string::npos) {
      p = star + 1;
      n = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

}  // namespace detail

/// Load every matching image in a directory, sorted by name; a single image
/// file loads as a one-frame source. Frame timestamps are index * tick.
inline std::shared_ptr<MemoryFrameSource> load_frames(
    const std::string& path, const std::string& pattern = "*",
    double tick_ms = 10.0) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      const std::string name = entry.path().filename().string();
      const std::string ext = entry.path().extension().string();
      if (ext != ".png" && ext != ".ppm" && ext != ".pgm" && ext != ".pnm")
        continue;
      if (!detail::glob_match(pattern, name)) continue;
      files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw InputError("no such path: " + path);
  }
  if (files.empty())
    throw InputError("no frames matching '" + pattern + "' in " + path);

  std::vector<ImageFrame> frames;
  frames.reserve(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    ImageFrame f = read_image(files[i]);
    if (!frames.empty() &&
        (f.width != frames[0].width || f.height != frames[0].height))
      throw DataError("frame dimensions differ: " + files[i]);
    f.timestamp_ms = static_cast<double>(i) * tick_ms;
    frames.push_back(std::move(f));
  }
  return std::make_shared<MemoryFrameSource>(std::move(frames));
}

// ---------------------------------------------------------------------------
// Human fixation CSV
// ---------------------------------------------------------------------------

struct FixationRecord {
  std::string observer;
  std::string stimulus;
  double t_ms = 0.0;
  double x = 0.0;
  double y = 0.0;
  double duration_ms = 0.0;
};

struct FixationData {
  std::vector<FixationRecord> records;
  std::size_t dropped = 0;  // rows outside the stimulus bounds
};

inline constexpr const char* kFixationCsvHeader =
    "observer,stimulus,t_ms,x,y,duration_ms";

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_double_field(const std::string& s, int line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw FormatError("unparsable numeric field '" + s + "' at line " +
                      std::to_string(line_no));
  return v;
}

}  // namespace detail

/// Parse the fixation CSV. Rows whose coordinates fall outside [0, width) x
/// [0, height) (or are negative, when bounds are unknown) are dropped and
/// tallied rather than treated as errors.
inline FixationData load_fixations_csv(const std::string& path, int width = 0,
                                       int height = 0) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open csv: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("missing header in " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kFixationCsvHeader)
    throw FormatError("expected header '" + std::string(kFixationCsvHeader) +
                      "' in " + path);

  FixationData data;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const std::vector<std::string> f = detail::split_csv_line(line);
    if (f.size() != 6)
      throw FormatError("expected 6 fields at line " + std::to_string(line_no));
    FixationRecord r;
    r.observer = f[0];
    r.stimulus = f[1];
    r.t_ms = detail::parse_double_field(f[2], line_no);
    r.x = detail::parse_double_field(f[3], line_no);
    r.y = detail::parse_double_field(f[4], line_no);
    r.duration_ms = detail::parse_double_field(f[5], line_no);
    const bool oob = r.x < 0.0 || r.y < 0.0 || r.duration_ms < 0.0 ||
                     (width > 0 && r.x > width - 1.0) ||
                     (height > 0 && r.y > height - 1.0);
    if (oob) {
      ++data.dropped;
      continue;
    }
    data.records.push_back(std::move(r));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Scan path JSONL
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const ScanPathRecord& r) {
  return nlohmann::json{{"t_ms", r.t_ms},       {"x", r.x},
                        {"y", r.y},             {"regime", r.regime},
                        {"event", to_string(r.event)},
                        {"dwell_ms", r.dwell_ms}};
}

inline void write_scanpath_jsonl(const std::string& path,
                                 const ScanPath& scanpath) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write scan path: " + path);
  for (const ScanPathRecord& r : scanpath.records)
    out << to_json(r).dump() << '\n';
}

/// Lossless inverse of write_scanpath_jsonl. Unknown keys are ignored for
/// forward compatibility; malformed lines report their line number.
inline ScanPath read_scanpath_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open scan path: " + path);
  ScanPath sp;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("malformed JSONL at line " + std::to_string(line_no) +
                        ": " + e.what());
    }
    try {
      ScanPathRecord r;
      r.t_ms = j.at("t_ms").get<double>();
      r.x = j.at("x").get<double>();
      r.y = j.at("y").get<double>();
      r.regime = j.at("regime").get<int>();
      r.dwell_ms = j.at("dwell_ms").get<double>();
      const auto label =
          event_label_from_string(j.at("event").get<std::string>());
      if (!label)
        throw FormatError("unknown event label at line " +
                          std::to_string(line_no));
      r.event = *label;
      sp.records.push_back(r);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad record at line " + std::to_string(line_no) +
                        ": " + e.what());
    }
  }
  return sp;
}

// ---------------------------------------------------------------------------
// Bias model JSON
// ---------------------------------------------------------------------------

inline nlohmann::json bias_model_to_json(const BiasModel& m) {
  m.require_fitted();
  nlohmann::json j;
  j["biasmodel_v"] = 1;
  switch (m.mode) {
    case BiasMode::kIndependent: j["mode"] = "independent"; break;
    case BiasMode::kAmplitudeGivenDirection:
      j["mode"] = "amplitude_given_direction";
      break;
    case BiasMode::kJointKde: j["mode"] = "joint_kde"; break;
  }
  j["amplitude_law"] =
      m.amplitude_law == AmplitudeLaw::kAlphaStable ? "stable" : "kde";
  j["direction_law"] =
      m.direction_law == DirectionLaw::kHistogram ? "histogram" : "kde";
  j["amplitude_stable"] = {{"alpha", m.amplitude_stable.alpha},
                           {"beta", m.amplitude_stable.beta},
                           {"gamma", m.amplitude_stable.gamma},
                           {"delta", m.amplitude_stable.delta}};
  j["amplitude_points"] = m.amplitude_points;
  j["amplitude_bandwidth"] = m.amplitude_bandwidth;
  j["direction_freq"] = m.direction_freq;
  j["direction_points"] = m.direction_points;
  j["direction_concentration"] = m.direction_concentration;
  j["persistence"] = m.persistence;
  j["persistence_shift"] = m.persistence_shift;
  return j;
}

inline BiasModel bias_model_from_json(const nlohmann::json& j) {
  if (!j.contains("biasmodel_v") || j.at("biasmodel_v").get<int>() != 1)
    throw FormatError("unsupported bias model version");
  BiasModel m;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "independent")
    m.mode = BiasMode::kIndependent;
  else if (mode == "amplitude_given_direction")
    m.mode = BiasMode::kAmplitudeGivenDirection;
  else if (mode == "joint_kde")
    m.mode = BiasMode::kJointKde;
  else
    throw FormatError("unknown bias mode: " + mode);
  m.amplitude_law = j.at("amplitude_law").get<std::string>() == "stable"
                        ? AmplitudeLaw::kAlphaStable
                        : AmplitudeLaw::kKde;
  m.direction_law = j.at("direction_law").get<std::string>() == "histogram"
                        ? DirectionLaw::kHistogram
                        : DirectionLaw::kKde;
  const nlohmann::json& st = j.at("amplitude_stable");
  m.amplitude_stable = {st.at("alpha").get<double>(),
                        st.at("beta").get<double>(),
                        st.at("gamma").get<double>(),
                        st.at("delta").get<double>()};
  m.amplitude_points = j.at("amplitude_points").get<std::vector<double>>();
  m.amplitude_bandwidth = j.at("amplitude_bandwidth").get<double>();
  m.direction_freq = j.at("direction_freq").get<std::vector<double>>();
  m.direction_points = j.at("direction_points").get<std::vector<double>>();
  m.direction_concentration = j.at("direction_concentration").get<double>();
  m.persistence = j.at("persistence").get<double>();
  m.persistence_shift = j.at("persistence_shift").get<double>();
  m.fitted = true;
  return m;
}

inline void save_bias_model(const std::string& path, const BiasModel& m) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write bias model: " + path);
  out << bias_model_to_json(m).dump(2) << '\n';
}

inline BiasModel load_bias_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open bias model: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed bias model JSON: " + std::string(e.what()));
  }
  return bias_model_from_json(j);
}

/// CSV export of sampled shifts, one `dx,dy,l,theta,duration` row per shift.
inline void write_shifts_csv(const std::string& path,
                             std::span<const GazeShift> shifts) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write shifts: " + path);
  out << "dx,dy,l,theta,duration\n";
  char buf[160];
  for (const GazeShift& s : shifts) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.dx,
                  s.dy, s.amplitude, s.direction, s.duration_ms);
    out << buf;
  }
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct SimulationSetup {
  WalkerConfig config;
  RegimeMotorParams motor;
  bool seed_set = false;
  Perception::Method saliency = Perception::Method::kItti;
  int selfinfo_bins = 8;
  int surprise_bins = 4;
  // Amplitude mode boundaries for CCDF reports, in degrees of visual angle.
  double mode_boundary_small_deg = 2.0;
  double mode_boundary_large_deg = 8.0;
};

namespace detail {

inline void reject(const std::string& key, const std::string& bound) {
  throw ParameterError("config key '" + key + "' violates \"" + bound + "\"");
}

inline double config_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(),
                                         value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ParameterError("config key '" + key + "' has non-numeric value '" +
                         value + "'");
  return v;
}

inline long long config_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(),
                                         value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ParameterError("config key '" + key + "' has non-integer value '" +
                         value + "'");
  return v;
}

inline bool config_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw ParameterError("config key '" + key + "' has non-boolean value '" +
                       value + "'");
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace detail

/// Parse the flat key=value run configuration. Unknown and duplicate keys are
/// rejected by name; every constraint violation cites the key and its bound.
inline SimulationSetup parse_config(const std::map<std::string, std::string>& kv) {
  SimulationSetup setup;
  WalkerConfig& c = setup.config;

  // Regime count first: per-regime keys depend on it.
  int regimes = 3;
  if (auto it = kv.find("regimes"); it != kv.end()) {
    regimes = static_cast<int>(detail::config_int("regimes", it->second));
    if (regimes != 2 && regimes != 3)
      detail::reject("regimes", "regimes in {2, 3}");
  }
  c.regime_count = regimes;
  setup.motor = RegimeMotorParams::defaults(regimes);
  std::vector<double> prior_counts = c.prior_counts();

  for (const auto& [key, value] : kv) {
    if (key == "regimes") continue;
    if (key == "seed") {
      const long long s = detail::config_int(key, value);
      if (s < 0) detail::reject(key, "seed >= 0");
      c.seed = static_cast<std::uint64_t>(s);
      setup.seed_set = true;
    } else if (key == "n_candidates") {
      const long long v = detail::config_int(key, value);
      if (v < 1) detail::reject(key, "n_candidates >= 1");
      c.n_candidates = static_cast<int>(v);
    } else if (key == "temperature") {
      const double v = detail::config_double(key, value);
      if (!(v > 0.0)) detail::reject(key, "temperature > 0");
      c.temperature = v;
    } else if (key == "tick") {
      const double v = detail::config_double(key, value);
      if (!(v > 0.0)) detail::reject(key, "tick > 0");
      c.tick_ms = v;
    } else if (key == "tau") {
      const double v = detail::config_double(key, value);
      if (!(v > 0.0)) detail::reject(key, "tau > 0");
      c.potential_scale = v;
    } else if (key == "max_ticks") {
      const long long v = detail::config_int(key, value);
      if (v < 1) detail::reject(key, "max_ticks >= 1");
      c.max_ticks = static_cast<int>(v);
    } else if (key == "learning_weight") {
      const double v = detail::config_double(key, value);
      if (v < 0.0) detail::reject(key, "learning_weight >= 0");
      c.regime_learning_weight = v;
    } else if (key == "boundary_resample_limit") {
      const long long v = detail::config_int(key, value);
      if (v < 0) detail::reject(key, "boundary_resample_limit >= 0");
      c.boundary_resample_limit = static_cast<int>(v);
    } else if (key == "fixation_threshold_px") {
      const double v = detail::config_double(key, value);
      if (v < 0.0) detail::reject(key, "fixation_threshold_px >= 0");
      c.fixation_threshold_px = v;
    } else if (key == "px_per_degree") {
      const double v = detail::config_double(key, value);
      if (!(v > 0.0)) detail::reject(key, "px_per_degree > 0");
      c.px_per_degree = v;
    } else if (key == "foveate") {
      c.foveate = detail::config_bool(key, value);
    } else if (key == "foveation_radius_deg") {
      const double v = detail::config_double(key, value);
      if (!(v > 0.0)) detail::reject(key, "foveation_radius_deg > 0");
      c.foveation_radius_deg = v;
    } else if (key == "saliency") {
      if (value == "itti")
        setup.saliency = Perception::Method::kItti;
      else if (value == "selfinfo")
        setup.saliency = Perception::Method::kSelfInfo;
      else if (value == "surprise")
        setup.saliency = Perception::Method::kSurprise;
      else
        detail::reject(key, "saliency in {itti, selfinfo, surprise}");
    } else if (key == "selfinfo_bins") {
      const long long v = detail::config_int(key, value);
      if (v < 2 || v > 16) detail::reject(key, "selfinfo_bins in [2, 16]");
      setup.selfinfo_bins = static_cast<int>(v);
    } else if (key == "surprise_bins") {
      const long long v = detail::config_int(key, value);
      if (v < 2 || v > 16) detail::reject(key, "surprise_bins in [2, 16]");
      setup.surprise_bins = static_cast<int>(v);
    } else if (key == "mode_boundary_small_deg") {
      const double v = detail::config_double(key, value);
      if (!(v > 0.0)) detail::reject(key, "mode_boundary_small_deg > 0");
      setup.mode_boundary_small_deg = v;
    } else if (key == "mode_boundary_large_deg") {
      const double v = detail::config_double(key, value);
      if (!(v > 0.0)) detail::reject(key, "mode_boundary_large_deg > 0");
      setup.mode_boundary_large_deg = v;
    } else {
      // Per-regime keys: regime<i>_{alpha,beta,gamma,delta,drift,hazard,count}.
      bool handled = false;
      for (int r = 0; r < regimes && !handled; ++r) {
        const std::string prefix = "regime" + std::to_string(r) + "_";
        if (key.rfind(prefix, 0) != 0) continue;
        const std::string field = key.substr(prefix.size());
        RegimeMotor& m = setup.motor.regimes[r];
        if (field == "alpha") {
          const double v = detail::config_double(key, value);
          if (!(v > 0.0) || v > 2.0) detail::reject(key, "alpha in (0, 2]");
          m.noise.alpha = v;
        } else if (field == "beta") {
          const double v = detail::config_double(key, value);
          if (v < -1.0 || v > 1.0) detail::reject(key, "beta in [-1, 1]");
          m.noise.beta = v;
        } else if (field == "gamma") {
          const double v = detail::config_double(key, value);
          if (!(v > 0.0)) detail::reject(key, "gamma > 0");
          m.noise.gamma = v;
        } else if (field == "delta") {
          m.noise.delta = detail::config_double(key, value);
        } else if (field == "drift") {
          const double v = detail::config_double(key, value);
          if (v < 0.0) detail::reject(key, "drift >= 0");
          m.drift_gain = v;
        } else if (field == "hazard") {
          const double v = detail::config_double(key, value);
          if (!(v > 0.0) || v > 1.0) detail::reject(key, "hazard in (0, 1]");
          m.dwell_hazard = v;
        } else if (field == "count") {
          const double v = detail::config_double(key, value);
          if (!(v > 0.0)) detail::reject(key, "count > 0");
          prior_counts[r] = v;
        } else {
          break;
        }
        handled = true;
      }
      if (!handled)
        throw ParameterError("unknown config key '" + key + "'");
    }
  }
  c.regime_prior_counts = prior_counts;
  c.validate();
  setup.motor.validate();
  return setup;
}

inline SimulationSetup load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("expected key=value at line " +
                        std::to_string(line_no));
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw FormatError("empty key at line " + std::to_string(line_no));
    if (kv.count(key))
      throw ParameterError("duplicate config key '" + key + "'");
    kv[key] = value;
  }
  return parse_config(kv);
}

/// Canonical serialization of the effective run parameters; its hash pins a
/// run in the manifest.
inline std::string canonical_config(const SimulationSetup& s) {
  std::ostringstream out;
  char buf[64];
  auto emit = [&](const std::string& key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << '=' << buf << '\n';
  };
  const WalkerConfig& c = s.config;
  emit("boundary_resample_limit", c.boundary_resample_limit);
  emit("fixation_threshold_px", c.fixation_threshold_px);
  emit("foveate", c.foveate ? 1 : 0);
  emit("foveation_radius_deg", c.foveation_radius_deg);
  emit("learning_weight", c.regime_learning_weight);
  emit("max_ticks", c.max_ticks);
  emit("mode_boundary_large_deg", s.mode_boundary_large_deg);
  emit("mode_boundary_small_deg", s.mode_boundary_small_deg);
  emit("n_candidates", c.n_candidates);
  emit("px_per_degree", c.px_per_degree);
  const std::vector<double> counts = c.prior_counts();
  for (int r = 0; r < c.regime_count; ++r) {
    const std::string p = "regime" + std::to_string(r) + "_";
    emit(p + "alpha", s.motor.regimes[r].noise.alpha);
    emit(p + "beta", s.motor.regimes[r].noise.beta);
    emit(p + "count", counts[r]);
    emit(p + "delta", s.motor.regimes[r].noise.delta);
    emit(p + "drift", s.motor.regimes[r].drift_gain);
    emit(p + "gamma", s.motor.regimes[r].noise.gamma);
    emit(p + "hazard", s.motor.regimes[r].dwell_hazard);
  }
  emit("regimes", c.regime_count);
  switch (s.saliency) {
    case Perception::Method::kItti: out << "saliency=itti\n"; break;
    case Perception::Method::kSelfInfo: out << "saliency=selfinfo\n"; break;
    case Perception::Method::kSurprise: out << "saliency=surprise\n"; break;
  }
  emit("seed", static_cast<double>(c.seed));
  emit("selfinfo_bins", s.selfinfo_bins);
  emit("surprise_bins", s.surprise_bins);
  emit("tau", c.potential_scale);
  emit("temperature", c.temperature);
  emit("tick", c.tick_ms);
  return out.str();
}

inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace gazewalk
