// gazewalk command-line driver: saliency | simulate | analyze.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gazewalk/gazewalk.hpp"

namespace fs = std::filesystem;
using namespace gazewalk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

int thread_budget() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GAZEWALK_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return static_cast<int>(n);
}

struct Manifest {
  std::string command;
  SimulationSetup setup;
  std::vector<std::string> inputs;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();

  void write(const fs::path& dir) const {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(canonical_config(setup))));
    nlohmann::json j;
    j["command"] = command;
    j["config_hash"] = hash;
    j["seed"] = setup.config.seed;
    j["inputs"] = inputs;
    j["tool_version"] = GAZEWALK_VERSION;
    j["wall_time_ms"] = elapsed.count();
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << '\n';
  }
};

SimulationSetup setup_from_options(const std::string& config_path,
                                   bool seed_given, std::uint64_t seed_flag) {
  SimulationSetup setup;
  if (!config_path.empty()) setup = load_config(config_path);
  if (seed_given) {
    setup.config.seed = seed_flag;
    setup.seed_set = true;
  }
  return setup;
}

// ---------------------------------------------------------------------------
// saliency
// ---------------------------------------------------------------------------

int cmd_saliency(const std::string& input, const std::string& method,
                 const std::string& out_dir, const SimulationSetup& setup,
                 bool png_preview, Manifest manifest) {
  fs::create_directories(out_dir);
  const auto frames = load_frames(input, "*", setup.config.tick_ms);

  std::optional<LocationBeliefModel> belief;
  const FeatureQuantizer surprise_quant(setup.surprise_bins);

  for (std::size_t i = 0; i < frames->size(); ++i) {
    const ImageFrame& frame = frames->frame(i);
    SaliencyMap map;
    if (method == "itti") {
      map = itti_saliency(frame);
    } else if (method == "selfinfo") {
      map = self_information_map(build_feature_stack(frame, 1),
                                 setup.selfinfo_bins);
    } else {
      if (!belief)
        belief.emplace(frame.width, frame.height,
                       setup.surprise_bins * setup.surprise_bins *
                           setup.surprise_bins);
      SurpriseMap s =
          belief->observe(surprise_quant.quantize(build_feature_stack(frame, 1)));
      const double total = s.sum();
      if (total <= 0.0) {
        map = uniform_saliency(frame.width, frame.height);
      } else {
        for (double& v : s.values()) v /= total;
        map.values = std::move(s);
        map.normalization = MapNormalization::kSumToOne;
      }
    }

    char name[64];
    std::snprintf(name, sizeof name, "salmap_%04zu.txt", i);
    write_salmap((fs::path(out_dir) / name).string(), map);
    if (png_preview) {
      std::snprintf(name, sizeof name, "salmap_%04zu.png", i);
      write_png16((fs::path(out_dir) / name).string(), map.values);
    }
  }
  manifest.write(out_dir);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& frames_path, int observers,
                 const std::string& out_dir, const SimulationSetup& setup,
                 const std::string& bias_path, const std::string& value_path,
                 Manifest manifest) {
  if (!setup.seed_set)
    throw ParameterError("config key 'seed' is required for simulate");
  fs::create_directories(out_dir);

  const auto frames = load_frames(frames_path, "*", setup.config.tick_ms);

  std::optional<BiasModel> bias;
  if (!bias_path.empty()) bias = load_bias_model(bias_path);

  std::optional<GoalSpec> goal;
  if (!value_path.empty()) {
    GoalSpec g;
    g.id = value_path;
    g.value = read_salmap(value_path).values;
    goal = std::move(g);
  }

  // For a static scene every observer shares one precomputed map.
  std::optional<SaliencyMap> static_map;
  if (frames->size() == 1) {
    Perception p(frames, setup.saliency, setup.selfinfo_bins,
                 setup.surprise_bins);
    static_map = p.map_for_frame(0);
  }

  std::vector<ScanPath> paths(observers);
  std::vector<std::string> errors(observers);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= observers) return;
      try {
        WalkerConfig cfg = setup.config;
        cfg.seed = setup.config.seed + static_cast<std::uint64_t>(i);
        std::optional<Perception> percep;
        if (static_map)
          percep.emplace(Perception::from_maps({*static_map}));
        else
          percep.emplace(frames, setup.saliency, setup.selfinfo_bins,
                         setup.surprise_bins);
        Walker walker(cfg, setup.motor, *percep,
                      bias ? &*bias : nullptr, goal ? &*goal : nullptr);
        paths[i] = walker.run();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n_threads = std::min(thread_budget(), observers);
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (int i = 0; i < observers; ++i)
    if (!errors[i].empty()) throw Error(errors[i]);

  for (int i = 0; i < observers; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "observer_%03d.jsonl", i);
    write_scanpath_jsonl((fs::path(out_dir) / name).string(), paths[i]);
  }
  manifest.write(out_dir);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

void write_curve_csv(const fs::path& path, const CcdfCurve& curve) {
  std::ofstream out(path);
  out << "x,ccdf\n";
  char buf[80];
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", curve.x[i], curve.tail[i]);
    out << buf;
  }
}

nlohmann::json tail_report(const std::vector<double>& values) {
  nlohmann::json j;
  j["count"] = values.size();
  if (values.size() < 25) {
    j["power_law"] = false;
    j["reason"] = "insufficient samples";
    return j;
  }
  const CcdfCurve curve = resolved_region(ccdf(values));
  const TailStability st = tail_stability(curve);
  j["power_law"] = st.power_law;
  if (!st.reason.empty()) j["reason"] = st.reason;
  j["support_decades"] = st.decades;
  j["exponent_low_cutoff"] = st.exponent_low;
  j["exponent_high_cutoff"] = st.exponent_high;
  try {
    j["exponent"] = tail_exponent(curve, 0.10).exponent;
  } catch (const EstimationError&) {
  }
  return j;
}

int cmd_analyze(const std::vector<std::string>& scanpath_files,
                const std::string& human_csv, const std::string& map_path,
                const std::string& out_dir, const SimulationSetup& setup,
                Manifest manifest) {
  fs::create_directories(out_dir);

  std::vector<double> amplitudes;
  std::size_t total_records = 0;
  for (const std::string& file : scanpath_files) {
    const ScanPath sp = read_scanpath_jsonl(file);
    total_records += sp.records.size();
    for (std::size_t i = 1; i < sp.records.size(); ++i) {
      const double a = std::hypot(sp.records[i].x - sp.records[i - 1].x,
                                  sp.records[i].y - sp.records[i - 1].y);
      if (a > 0.0) amplitudes.push_back(a);
    }
  }
  if (total_records == 0) throw DataError("no scan path records to analyze");

  const double ppd = setup.config.px_per_degree;
  const double small_px = setup.mode_boundary_small_deg * ppd;
  const double large_px = setup.mode_boundary_large_deg * ppd;

  std::vector<double> pursuit, small_sacc, large_sacc, saccades;
  for (double a : amplitudes) {
    if (a < small_px)
      pursuit.push_back(a);
    else if (a < large_px)
      small_sacc.push_back(a);
    else
      large_sacc.push_back(a);
    if (a >= small_px) saccades.push_back(a);
  }

  nlohmann::json report;
  report["records"] = total_records;
  report["shifts"] = amplitudes.size();
  report["mode_boundaries_px"] = {{"small", small_px}, {"large", large_px}};

  auto emit_mode = [&](const char* name, const std::vector<double>& v) {
    if (!v.empty())
      write_curve_csv(fs::path(out_dir) / (std::string("ccdf_") + name + ".csv"),
                      ccdf(v));
    report["modes"][name]["count"] = v.size();
  };
  emit_mode("pursuit", pursuit);
  emit_mode("small_saccade", small_sacc);
  emit_mode("large_saccade", large_sacc);
  emit_mode("saccade", saccades);

  report["saccade_tail"] = tail_report(saccades);
  if (large_sacc.size() >= 25)
    report["large_saccade_tail"] = tail_report(large_sacc);

  if (!human_csv.empty()) {
    const FixationData human = load_fixations_csv(human_csv);
    if (human.records.empty())
      throw DataError("human fixation file has no usable rows");
    std::vector<double> human_amp;
    for (std::size_t i = 1; i < human.records.size(); ++i) {
      const FixationRecord& a = human.records[i - 1];
      const FixationRecord& b = human.records[i];
      if (a.observer != b.observer || a.stimulus != b.stimulus) continue;
      human_amp.push_back(std::hypot(b.x - a.x, b.y - a.y));
    }
    report["human"]["fixations"] = human.records.size();
    report["human"]["dropped_rows"] = human.dropped;
    if (!human_amp.empty() && !amplitudes.empty()) {
      const KsResult ks = ks_two_sample(saccades.empty() ? amplitudes : saccades,
                                        human_amp);
      report["human"]["ks_statistic"] = ks.statistic;
      report["human"]["ks_p_value"] = ks.p_value;
    }

    if (!map_path.empty()) {
      const SaliencyMap map = read_salmap(map_path);
      std::vector<FixationPoint> pts;
      for (const FixationRecord& r : human.records)
        pts.push_back({r.x, r.y});
      const FixationMetrics fm = fixation_metrics(map, pts);
      if (fm.nss) report["fixation_metrics"]["nss"] = *fm.nss;
      report["fixation_metrics"]["auc"] = fm.auc;
    }
  }

  std::ofstream out(fs::path(out_dir) / "report.json");
  out << report.dump(2) << '\n';
  manifest.write(out_dir);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic gaze scan-path simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::uint64_t seed_flag = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_flag, "seed override")
        ->each([&](const std::string&) { seed_given = true; });
  };

  // saliency
  auto* sal = app.add_subcommand("saliency", "compute saliency maps");
  std::string sal_input, sal_method = "itti";
  bool sal_png = false;
  sal->add_option("input", sal_input, "image file or frame directory")
      ->required();
  sal->add_option("--method", sal_method, "itti | selfinfo | surprise")
      ->check(CLI::IsMember({"itti", "selfinfo", "surprise"}));
  sal->add_flag("--png-preview", sal_png, "also write 16-bit PNG previews");
  add_common(sal);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run simulated observers");
  std::string sim_frames, sim_bias, sim_value;
  int sim_observers = 1;
  sim->add_option("frames", sim_frames, "image file or frame directory")
      ->required();
  sim->add_option("--observers", sim_observers, "number of simulated observers")
      ->check(CLI::PositiveNumber);
  sim->add_option("--bias", sim_bias, "bias model JSON");
  sim->add_option("--value-map", sim_value, "goal value map (SALMAP)");
  add_common(sim);

  // analyze
  auto* ana = app.add_subcommand("analyze", "oculomotor statistics reports");
  std::vector<std::string> ana_paths;
  std::string ana_human, ana_map;
  ana->add_option("scanpaths", ana_paths, "scan path JSONL files")
      ->required();
  ana->add_option("--human", ana_human, "human fixation CSV");
  ana->add_option("--map", ana_map, "saliency map for NSS/AUC");
  add_common(ana);

  CLI11_PARSE(app, argc, argv);

  try {
    SimulationSetup setup = setup_from_options(config_path, seed_given, seed_flag);
    Manifest manifest;
    manifest.setup = setup;
    manifest.inputs = {};

    if (sal->parsed()) {
      manifest.command = "saliency";
      manifest.inputs = {sal_input};
      return cmd_saliency(sal_input, sal_method, out_dir, setup, sal_png,
                          std::move(manifest));
    }
    if (sim->parsed()) {
      manifest.command = "simulate";
      manifest.inputs = {sim_frames};
      if (!sim_bias.empty()) manifest.inputs.push_back(sim_bias);
      if (!sim_value.empty()) manifest.inputs.push_back(sim_value);
      return cmd_simulate(sim_frames, sim_observers, out_dir, setup, sim_bias,
                          sim_value, std::move(manifest));
    }
    if (ana->parsed()) {
      manifest.command = "analyze";
      manifest.inputs = ana_paths;
      if (!ana_human.empty()) manifest.inputs.push_back(ana_human);
      if (!ana_map.empty()) manifest.inputs.push_back(ana_map);
      return cmd_analyze(ana_paths, ana_human, ana_map, out_dir, setup,
                         std::move(manifest));
    }
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
