#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "gazewalk/io.hpp"
#include "test_support.hpp"

using namespace gazewalk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gazewalk_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

ScanPath synthetic_path(int n, std::uint64_t seed) {
  Rng rng(seed);
  ScanPath sp;
  for (int i = 0; i < n; ++i) {
    ScanPathRecord r;
    r.t_ms = (i + 1) * 10.0;
    r.x = rng.uniform(0, 127);
    r.y = rng.uniform(0, 95);
    r.regime = static_cast<int>(rng.uniform_index(3));
    r.event = static_cast<EventLabel>(rng.uniform_index(3));
    r.dwell_ms = rng.uniform(0, 400);
    sp.records.push_back(r);
  }
  return sp;
}

}  // namespace

TEST_CASE("salmap round-trips losslessly") {
  TempDir dir;
  SaliencyMap map;
  map.values = Grid(7, 5);
  Rng rng(3);
  for (double& v : map.values.values()) v = rng.uniform01() * 1e-3;
  map.normalization = MapNormalization::kNone;
  write_salmap(dir.file("m.txt"), map);
  const SaliencyMap back = read_salmap(dir.file("m.txt"));
  CHECK(back.values.width() == 7);
  CHECK(back.values.height() == 5);
  CHECK(back.normalization == MapNormalization::kNone);
  CHECK(back.values.values() == map.values.values());
}

TEST_CASE("salmap header is validated") {
  TempDir dir;
  std::ofstream(dir.file("bad.txt")) << "SALMAP v2 4 4 sum\n";
  CHECK_THROWS_AS(read_salmap(dir.file("bad.txt")), FormatError);
  std::ofstream(dir.file("trunc.txt")) << "SALMAP v1 4 4 sum\n1 2 3\n";
  CHECK_THROWS_AS(read_salmap(dir.file("trunc.txt")), FormatError);
}

TEST_CASE("png 16-bit preview and ppm round-trip through read_image") {
  TempDir dir;
  // PPM path
  ImageFrame f = testsupport::textured_scene(32, 24, 5);
  testsupport::write_ppm(dir.file("img.ppm"), f);
  const ImageFrame back = read_image(dir.file("img.ppm"));
  CHECK(back.width == 32);
  CHECK(back.height == 24);
  CHECK(back.channels == 3);
  for (std::size_t i = 0; i < f.data.size(); ++i)
    REQUIRE(back.data[i] == Catch::Approx(f.data[i]).margin(1.0 / 255.0));

  // PNG preview of a grid
  Grid g(16, 8);
  Rng rng(7);
  for (double& v : g.values()) v = rng.uniform01();
  write_png16(dir.file("map.png"), g);
  const ImageFrame png = read_image(dir.file("map.png"));
  CHECK(png.width == 16);
  CHECK(png.height == 8);
  CHECK(png.channels == 1);
  // 16-bit is read back stripped to 8, so tolerance is a half step of 1/255
  CHECK(png.at(0, 0) ==
        Catch::Approx(g(0, 0) / g.max()).margin(1.0 / 255.0 + 1e-9));
}

TEST_CASE("ascii pgm is accepted") {
  TempDir dir;
  std::ofstream(dir.file("a.pgm")) << "P2\n# comment\n3 2\n255\n"
                                   << "0 128 255\n64 32 16\n";
  const ImageFrame f = read_image(dir.file("a.pgm"));
  CHECK(f.channels == 1);
  CHECK(f.at(1, 0) == Catch::Approx(128.0 / 255.0));
  CHECK(f.at(2, 1) == Catch::Approx(16.0 / 255.0));
}

TEST_CASE("load_frames sorts by name and validates dimensions") {
  TempDir dir;
  const ImageFrame a = testsupport::textured_scene(16, 16, 1);
  testsupport::write_ppm(dir.file("frame_002.ppm"), a);
  testsupport::write_ppm(dir.file("frame_000.ppm"), a);
  testsupport::write_ppm(dir.file("frame_001.ppm"), a);
  const auto frames = load_frames(dir.path.string(), "*.ppm", 10.0);
  REQUIRE(frames->size() == 3);
  CHECK(frames->frame(0).timestamp_ms == 0.0);
  CHECK(frames->frame(2).timestamp_ms == 20.0);

  testsupport::write_ppm(dir.file("frame_003.ppm"),
                         testsupport::textured_scene(8, 8, 2));
  try {
    load_frames(dir.path.string(), "*.ppm");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("frame_003") != std::string::npos);
  }
}

TEST_CASE("load_frames error paths") {
  TempDir dir;
  CHECK_THROWS_AS(load_frames((dir.path / "missing").string()), InputError);
  CHECK_THROWS_AS(load_frames(dir.path.string(), "*.png"), InputError);
}

TEST_CASE("single still image loads as a one-frame source") {
  TempDir dir;
  testsupport::write_ppm(dir.file("still.ppm"),
                         testsupport::textured_scene(16, 16, 3));
  const auto frames = load_frames(dir.file("still.ppm"));
  CHECK(frames->size() == 1);
  CHECK(!frames->dynamic());
}

TEST_CASE("fixation csv basics") {
  TempDir dir;
  SECTION("valid header with empty body") {
    std::ofstream(dir.file("f.csv")) << kFixationCsvHeader << "\n";
    const FixationData d = load_fixations_csv(dir.file("f.csv"));
    CHECK(d.records.empty());
    CHECK(d.dropped == 0);
  }
  SECTION("one valid row round-trips") {
    std::ofstream(dir.file("f.csv"))
        << kFixationCsvHeader << "\n"
        << "obs1,stim7,120.5,33.25,47.75,180\n";
    const FixationData d = load_fixations_csv(dir.file("f.csv"));
    REQUIRE(d.records.size() == 1);
    CHECK(d.records[0].observer == "obs1");
    CHECK(d.records[0].stimulus == "stim7");
    CHECK(d.records[0].t_ms == 120.5);
    CHECK(d.records[0].x == 33.25);
    CHECK(d.records[0].y == 47.75);
    CHECK(d.records[0].duration_ms == 180.0);
  }
  SECTION("negative coordinates are dropped and tallied") {
    std::ofstream(dir.file("f.csv"))
        << kFixationCsvHeader << "\n"
        << "o,s,0,-5,10,100\n"
        << "o,s,200,5,10,100\n";
    const FixationData d = load_fixations_csv(dir.file("f.csv"));
    CHECK(d.records.size() == 1);
    CHECK(d.dropped == 1);
  }
  SECTION("bounds are enforced when given") {
    std::ofstream(dir.file("f.csv"))
        << kFixationCsvHeader << "\n"
        << "o,s,0,100,10,100\n";
    const FixationData d = load_fixations_csv(dir.file("f.csv"), 64, 64);
    CHECK(d.records.empty());
    CHECK(d.dropped == 1);
  }
  SECTION("missing header is a format error") {
    std::ofstream(dir.file("f.csv")) << "x,y\n1,2\n";
    CHECK_THROWS_AS(load_fixations_csv(dir.file("f.csv")), FormatError);
  }
  SECTION("unparsable rows report their line number") {
    std::ofstream(dir.file("f.csv"))
        << kFixationCsvHeader << "\n"
        << "o,s,0,5,10,100\n"
        << "o,s,abc,5,10,100\n";
    try {
      load_fixations_csv(dir.file("f.csv"));
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
}

TEST_CASE("scan path jsonl round-trips bit-exactly") {
  TempDir dir;
  const ScanPath sp = synthetic_path(1000, 11);
  write_scanpath_jsonl(dir.file("p.jsonl"), sp);
  const ScanPath back = read_scanpath_jsonl(dir.file("p.jsonl"));
  REQUIRE(back.records.size() == sp.records.size());
  for (std::size_t i = 0; i < sp.records.size(); ++i) {
    REQUIRE(back.records[i].t_ms == sp.records[i].t_ms);
    REQUIRE(back.records[i].x == sp.records[i].x);
    REQUIRE(back.records[i].y == sp.records[i].y);
    REQUIRE(back.records[i].regime == sp.records[i].regime);
    REQUIRE(back.records[i].event == sp.records[i].event);
    REQUIRE(back.records[i].dwell_ms == sp.records[i].dwell_ms);
  }
}

TEST_CASE("empty jsonl is an empty scan path") {
  TempDir dir;
  std::ofstream(dir.file("e.jsonl"));
  CHECK(read_scanpath_jsonl(dir.file("e.jsonl")).records.empty());
}

TEST_CASE("unknown jsonl keys are ignored for forward compatibility") {
  TempDir dir;
  std::ofstream(dir.file("x.jsonl"))
      << R"({"t_ms":10.0,"x":1.0,"y":2.0,"regime":0,"event":"fixation",)"
      << R"("dwell_ms":10.0,"future_field":[1,2,3]})" << "\n";
  const ScanPath sp = read_scanpath_jsonl(dir.file("x.jsonl"));
  REQUIRE(sp.records.size() == 1);
  CHECK(sp.records[0].x == 1.0);
}

TEST_CASE("malformed jsonl reports the line number") {
  TempDir dir;
  std::ofstream(dir.file("bad.jsonl"))
      << R"({"t_ms":10.0,"x":1.0,"y":2.0,"regime":0,"event":"fixation","dwell_ms":10.0})"
      << "\n"
      << "not json at all\n";
  try {
    read_scanpath_jsonl(dir.file("bad.jsonl"));
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("bias model json round-trips") {
  Rng rng(13);
  std::vector<GazeShift> shifts;
  for (int i = 0; i < 150; ++i)
    shifts.push_back(make_shift_polar(std::abs(rng.normal()) * 5.0 + 0.5,
                                      rng.uniform(-kPi, kPi)));
  BiasFitOptions opt;
  opt.amplitude_law = AmplitudeLaw::kKde;
  const BiasModel m = fit_bias_model(shifts, opt);

  TempDir dir;
  save_bias_model(dir.file("bias.json"), m);
  const BiasModel back = load_bias_model(dir.file("bias.json"));
  CHECK(back.mode == m.mode);
  CHECK(back.amplitude_law == m.amplitude_law);
  CHECK(back.direction_law == m.direction_law);
  CHECK(back.amplitude_points == m.amplitude_points);
  CHECK(back.amplitude_bandwidth == m.amplitude_bandwidth);
  CHECK(back.direction_concentration == m.direction_concentration);
  CHECK(back.persistence == m.persistence);
  // versioned document
  std::ifstream in(dir.file("bias.json"));
  nlohmann::json j;
  in >> j;
  CHECK(j.at("biasmodel_v") == 1);
}

TEST_CASE("shift csv export has the documented header") {
  TempDir dir;
  const std::vector<GazeShift> shifts{make_shift(3.0, 4.0, 50.0)};
  write_shifts_csv(dir.file("s.csv"), shifts);
  std::ifstream in(dir.file("s.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "dx,dy,l,theta,duration");
  CHECK(row.find("5,") != std::string::npos);  // amplitude column
}

TEST_CASE("minimal config yields the full default parameter set") {
  TempDir dir;
  std::ofstream(dir.file("c.cfg")) << "seed=42\n";
  const SimulationSetup s = load_config(dir.file("c.cfg"));
  CHECK(s.seed_set);
  CHECK(s.config.seed == 42);
  const WalkerConfig defaults;
  CHECK(s.config.n_candidates == defaults.n_candidates);
  CHECK(s.config.temperature == defaults.temperature);
  CHECK(s.config.tick_ms == defaults.tick_ms);
  CHECK(s.config.regime_count == defaults.regime_count);
  CHECK(s.motor.regimes.size() == 3);
  CHECK(s.motor.regimes[2].noise.alpha == 1.0);
}

TEST_CASE("config rejects violations citing the bound") {
  TempDir dir;
  std::ofstream(dir.file("c.cfg")) << "seed=1\ntemperature=0\n";
  try {
    load_config(dir.file("c.cfg"));
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("temperature > 0") != std::string::npos);
  }
}

TEST_CASE("config rejects unknown keys by name") {
  TempDir dir;
  std::ofstream(dir.file("c.cfg")) << "seed=1\ntemprature=0.4\n";
  try {
    load_config(dir.file("c.cfg"));
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("temprature") != std::string::npos);
  }
}

TEST_CASE("config rejects duplicate keys") {
  TempDir dir;
  std::ofstream(dir.file("c.cfg")) << "seed=1\nseed=2\n";
  CHECK_THROWS_AS(load_config(dir.file("c.cfg")), ParameterError);
}

TEST_CASE("per-regime config keys reach the motor parameters") {
  TempDir dir;
  std::ofstream(dir.file("c.cfg"))
      << "seed=9\nregimes=2\n"
      << "regime0_gamma=2.5\nregime1_alpha=1.2\nregime1_hazard=0.4\n"
      << "regime0_count=3\n";
  const SimulationSetup s = load_config(dir.file("c.cfg"));
  CHECK(s.config.regime_count == 2);
  CHECK(s.motor.regimes[0].noise.gamma == 2.5);
  CHECK(s.motor.regimes[1].noise.alpha == 1.2);
  CHECK(s.motor.regimes[1].dwell_hazard == 0.4);
  CHECK(s.config.prior_counts()[0] == 3.0);
}

TEST_CASE("config comments and blank lines are tolerated") {
  TempDir dir;
  std::ofstream(dir.file("c.cfg"))
      << "# run configuration\n\nseed=5  # inline comment\n\n";
  const SimulationSetup s = load_config(dir.file("c.cfg"));
  CHECK(s.config.seed == 5);
}

TEST_CASE("config hash is stable and reflects the effective run") {
  TempDir dir;
  std::ofstream(dir.file("a.cfg")) << "seed=5\ntemperature=0.9\n";
  std::ofstream(dir.file("b.cfg")) << "temperature=0.9\nseed=5\n";
  const auto ha = fnv1a64(canonical_config(load_config(dir.file("a.cfg"))));
  const auto hb = fnv1a64(canonical_config(load_config(dir.file("b.cfg"))));
  CHECK(ha == hb);
  std::ofstream(dir.file("c.cfg")) << "seed=6\ntemperature=0.9\n";
  CHECK(fnv1a64(canonical_config(load_config(dir.file("c.cfg")))) != ha);
}

TEST_CASE("loaders are deterministic across repeated loads") {
  TempDir dir;
  const ScanPath sp = synthetic_path(50, 17);
  write_scanpath_jsonl(dir.file("p.jsonl"), sp);
  const ScanPath a = read_scanpath_jsonl(dir.file("p.jsonl"));
  const ScanPath b = read_scanpath_jsonl(dir.file("p.jsonl"));
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i)
    REQUIRE(a.records[i].x == b.records[i].x);
}
