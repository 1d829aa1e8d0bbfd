#include "dexhand/cli.hpp"

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "dexhand/benchmark.hpp"
#include "dexhand/choreography.hpp"
#include "dexhand/gestures.hpp"
#include "dexhand/json_io.hpp"
#include "dexhand/service.hpp"

namespace dexhand::cli {

namespace fs = std::filesystem;
using json_io::Json;

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("DEXHAND_DATA_DIR"); env && *env) return env;
#ifdef DEXHAND_DEFAULT_DATA_DIR
  return DEXHAND_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

namespace {

struct Options {
  std::string spec_path = "default";
  std::string gestures_path = "default";
  std::string output_path;  // empty = stdout
  std::string format = "text";
  bool lenient = false;
};

/// Raised for I/O and usage problems; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path resolve(const std::string& p, const char* default_name) {
  return p.empty() || p == "default" ? default_data_dir() / default_name : fs::path(p);
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw UsageError("cannot read " + p.string() + ": no such file");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Context {
  const Options& opt;
  std::ostream& out;
  std::ostream& err;

  std::string spec_text;
  std::optional<HandSpec> spec;
  std::optional<CouplingConfig> coupling;

  void load_spec() {
    const fs::path p = resolve(opt.spec_path, "hand_spec.json");
    require_file(p);
    spec_text = json_io::read_text(p);
    spec = load_hand_spec(spec_text);
    coupling = CouplingConfig::defaults(*spec);
  }

  GestureLoadResult load_gestures(LoadMode mode) const {
    const fs::path p = resolve(opt.gestures_path, "gestures.json");
    require_file(p);
    return load_gesture_set_file(p, *spec, mode);
  }

  void emit(const std::string& text) const {
    if (opt.output_path.empty() || opt.output_path == "-") {
      out << text;
      return;
    }
    std::ofstream f(opt.output_path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + opt.output_path);
    f << text;
  }
};

// ---------------------------------------------------------------------------

int cmd_validate(Context& ctx, const std::string& script_path) {
  ctx.load_spec();
  auto loaded = ctx.load_gestures(LoadMode::Lenient);
  const GestureSet& set = loaded.set;

  int status = kOk;
  std::string report;
  std::size_t bad_records = 0;
  for (const auto& r : set.records()) {
    const Executability ex = assess_pose(r.pose, *ctx.spec, *ctx.coupling);
    if (ex.ok()) continue;
    ++bad_records;
    for (const auto& v : ex.violations) report += r.id + ": " + describe(v) + "\n";
    if (ex.residual > kExecutableResidualDeg)
      report += r.id + ": coupling residual " + fmt("%.3g", ex.residual) + " deg\n";
  }
  if (bad_records == 0) {
    report += std::to_string(set.size()) + " gestures OK\n";
  } else {
    report += std::to_string(bad_records) + " of " + std::to_string(set.size()) + " gestures violate constraints\n";
    status = kValidationFailure;
  }

  if (!script_path.empty()) {
    require_file(script_path);
    const ManipulationScript script = load_script_file(script_path);
    try {
      const Trajectory traj = compile_script(script, set);
      const TrajectoryReport rep = validate_trajectory(traj, *ctx.spec, *ctx.coupling,
                                                       script.max_step_deg.value_or(kDefaultMaxStepDeg));
      for (const auto& fv : rep.rom_violations)
        for (const auto& v : fv.violations) report += "frame " + std::to_string(fv.frame) + ": " + describe(v) + "\n";
      for (const auto& f : rep.step_flags)
        report += "segment " + std::to_string(f.segment) + ": " + joint_name(f.joint) + " steps " +
                  fmt("%.4g", f.step_deg) + " deg/frame (limit " + fmt("%g", rep.max_step_limit) +
                  "), suggested interval >= " + std::to_string(f.suggested_interval) + "\n";
      if (rep.max_residual() > kExecutableResidualDeg)
        report += "coupling residual " + fmt("%.3g", rep.max_residual()) + " deg exceeds bound\n";
      if (rep.clean()) {
        report += "script " + script.name + " OK (" + std::to_string(traj.frames.size()) + " frames)\n";
      } else {
        report += "script " + script.name + " has violations\n";
        status = kValidationFailure;
      }
    } catch (const CompileError& e) {
      report += std::string("script: ") + e.what() + "\n";
      status = kValidationFailure;
    }
  }
  ctx.emit(report);
  return status;
}

// ---------------------------------------------------------------------------

int analyze_coverage(Context& ctx) {
  struct Row {
    Envelope reference;
    CoverageAggregation agg;
    AbsentPolicy absent;
    CoverageResult result;
  };
  std::vector<Row> rows;
  for (Envelope ref : {Envelope::Human, Envelope::Grasping})
    for (auto agg : {CoverageAggregation::PerJointMean, CoverageAggregation::LengthWeighted})
      for (auto absent : {AbsentPolicy::Exclude, AbsentPolicy::IncludeAsZero})
        rows.push_back({ref, agg, absent, rom_coverage(*ctx.spec, Envelope::Ours, ref, agg, absent)});

  auto agg_name = [](CoverageAggregation a) {
    return a == CoverageAggregation::PerJointMean ? "per-joint-mean" : "length-weighted";
  };
  auto absent_name = [](AbsentPolicy p) { return p == AbsentPolicy::Exclude ? "exclude-absent" : "include-absent-as-zero"; };

  if (ctx.opt.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j = Json::object();
      j["target"] = "ours";
      j["reference"] = std::string(to_string(r.reference));
      j["aggregation"] = agg_name(r.agg);
      j["absent"] = absent_name(r.absent);
      j["fraction"] = r.result.fraction;
      j["joints_used"] = r.result.joints_used;
      arr.push_back(std::move(j));
    }
    Json doc = Json::object();
    doc["coverage"] = std::move(arr);
    ctx.emit(json_io::dump(doc));
    return kOk;
  }
  if (ctx.opt.format == "csv") {
    std::string s = "target,reference,aggregation,absent,fraction,joints_used\n";
    for (const auto& r : rows)
      s += std::string("ours,") + std::string(to_string(r.reference)) + "," + agg_name(r.agg) + "," +
           absent_name(r.absent) + "," + fmt("%.6f", r.result.fraction) + "," + std::to_string(r.result.joints_used) + "\n";
    ctx.emit(s);
    return kOk;
  }
  std::string s = "ROM coverage of the actuated envelope (ours)\n";
  for (const auto& r : rows) {
    char line[160];
    std::snprintf(line, sizeof line, "  vs %-8s %-15s %-22s %6.2f%%  (%zu joints)%s\n",
                  std::string(to_string(r.reference)).c_str(), agg_name(r.agg), absent_name(r.absent),
                  100.0 * r.result.fraction, r.result.joints_used,
                  r.agg == CoverageAggregation::PerJointMean && r.absent == AbsentPolicy::Exclude ? "  [default]" : "");
    s += line;
  }
  ctx.emit(s);
  return kOk;
}

int analyze_trajectory(Context& ctx, const std::string& digit_name, std::size_t samples) {
  std::vector<DigitId> digits;
  if (digit_name == "all") {
    digits.assign(kAllDigits.begin(), kAllDigits.end());
  } else {
    std::string cap = digit_name;
    if (!cap.empty()) cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
    auto d = parse_digit(cap);
    if (!d) throw UsageError("unknown digit \"" + digit_name + "\"");
    digits.push_back(*d);
  }

  Json jdoc = Json::object();
  std::string csv = "digit,sample,x_mm,y_mm,z_mm\n";
  std::string fits;
  for (DigitId d : digits) {
    const auto tips = fingertip_trajectory(*ctx.spec, d, *ctx.coupling, samples);
    const auto plane = flexion_plane(tips);
    const SpiralFit fit = log_spiral_fit(plane);
    const std::string name(to_string(d));
    Json pts = Json::array();
    for (std::size_t i = 0; i < tips.size(); ++i) {
      csv += name + "," + std::to_string(i) + "," + format_g6(tips[i].x) + "," + format_g6(tips[i].y) + "," +
             format_g6(tips[i].z) + "\n";
      pts.push_back(Json::array({tips[i].x, tips[i].y, tips[i].z}));
    }
    fits += "# " + name + " log-spiral fit: a=" + fmt("%.6g", fit.a) + " mm, b=" + fmt("%.6g", fit.b) +
            " /rad, r_squared=" + fmt("%.6g", fit.r_squared) + "\n";
    Json j = Json::object();
    j["polyline_mm"] = std::move(pts);
    Json jf = Json::object();
    jf["a"] = fit.a;
    jf["b"] = fit.b;
    jf["r_squared"] = fit.r_squared;
    j["log_spiral_fit"] = std::move(jf);
    jdoc[name] = std::move(j);
  }
  ctx.emit(ctx.opt.format == "json" ? json_io::dump(jdoc) : csv + fits);
  return kOk;
}

/// CSV with columns excursion_mm and angle_deg, plus an optional joint column.
int analyze_tendon(Context& ctx, const std::string& data_path) {
  if (data_path.empty()) throw UsageError("analyze tendon needs --data");
  require_file(data_path);
  std::istringstream in(json_io::read_text(data_path));
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty data file " + data_path);

  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };
  const auto header = split(line);
  int col_e = -1, col_a = -1, col_j = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "excursion_mm") col_e = static_cast<int>(i);
    if (header[i] == "angle_deg") col_a = static_cast<int>(i);
    if (header[i] == "joint") col_j = static_cast<int>(i);
  }
  if (col_e < 0 || col_a < 0) throw UsageError("data file needs excursion_mm and angle_deg columns");

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::vector<std::string> order;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    const auto need = static_cast<std::size_t>(std::max({col_e, col_a, col_j}) + 1);
    if (cells.size() < need) throw UsageError("malformed data row " + std::to_string(row));
    double e = 0, a = 0;
    try {
      std::size_t pe = 0, pa = 0;
      e = std::stod(cells[col_e], &pe);
      a = std::stod(cells[col_a], &pa);
      if (pe != cells[col_e].size() || pa != cells[col_a].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("malformed number in data row " + std::to_string(row));
    }
    const std::string key = col_j >= 0 ? cells[col_j] : "all";
    if (!groups.contains(key)) order.push_back(key);
    groups[key].first.push_back(e);
    groups[key].second.push_back(a);
  }

  Json jdoc = Json::object();
  std::string text = "joint,n,slope_deg_per_mm,intercept_deg,r_squared\n";
  for (const auto& key : order) {
    const auto& [es, as] = groups[key];
    const LinearFit fit = fit_linear(es, as);
    text += key + "," + std::to_string(es.size()) + "," + fmt("%.6g", fit.slope) + "," + fmt("%.6g", fit.intercept) +
            "," + fmt("%.6g", fit.r_squared) + "\n";
    Json j = Json::object();
    j["n"] = es.size();
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    jdoc[key] = std::move(j);
  }
  ctx.emit(ctx.opt.format == "json" ? json_io::dump(jdoc) : text);
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_compile(Context& ctx, const std::string& script_path, const std::string& actuators_out, bool actuators_only) {
  ctx.load_spec();
  const GestureSet set = ctx.load_gestures(LoadMode::Strict).set;
  const fs::path sp = fs::exists(script_path) ? fs::path(script_path) : default_data_dir() / script_path;
  require_file(sp);
  const ManipulationScript script = load_script_file(sp);
  Trajectory traj;
  try {
    traj = compile_script(script, set, kernels::Execution::Parallel);
  } catch (const CompileError& e) {
    ctx.err << "compile error: " << e.what() << "\n";
    return kValidationFailure;
  }

  if (actuators_only) {
    ctx.emit(export_actuator_csv(traj, *ctx.coupling));
  } else {
    ctx.emit(export_trajectory_csv(traj));
    if (!actuators_out.empty()) {
      std::ofstream f(actuators_out, std::ios::binary);
      if (!f) throw UsageError("cannot write " + actuators_out);
      f << export_actuator_csv(traj, *ctx.coupling);
    }
  }

  const TrajectoryReport rep = validate_trajectory(traj, *ctx.spec, *ctx.coupling,
                                                   script.max_step_deg.value_or(kDefaultMaxStepDeg),
                                                   kernels::Execution::Parallel);
  const TrajectoryMetrics m = trajectory_metrics(traj);
  ctx.err << script.name << ": " << m.frame_count << " frames, " << m.gesture_count << " key frames, "
          << fmt("%g", m.duration_s) << " s at " << fmt("%g", traj.frame_rate) << " fps; "
          << (rep.clean() ? "valid" : "INVALID") << "\n";
  return rep.clean() ? kOk : kValidationFailure;
}

int cmd_bench(Context& ctx, const std::string& suite_arg, int level) {
  ctx.load_spec();
  const GestureSet set = ctx.load_gestures(LoadMode::Lenient).set;
  const fs::path suite_path = suite_arg.empty() || suite_arg == "all" ? default_data_dir() / "suite.json" : fs::path(suite_arg);
  require_file(suite_path);
  std::vector<TaskDef> tasks = load_suite_file(suite_path);
  if (level != 0)
    std::erase_if(tasks, [&](const TaskDef& t) { return static_cast<int>(t.level) != level; });

  const SuiteReport report = run_suite(tasks, set, *ctx.spec, *ctx.coupling, kernels::Execution::Parallel);
  ctx.emit(ctx.opt.format == "json" ? json_io::dump(report_to_json(report)) : render_report_text(report));
  return report.all_passed() ? kOk : kValidationFailure;
}

Service* g_service = nullptr;

int cmd_serve(Context& ctx, const std::string& host, int port) {
  ctx.load_spec();
  GestureSet set = ctx.load_gestures(LoadMode::Strict).set;
  Service service(*ctx.spec, ctx.spec_text, std::move(set), *ctx.coupling);
  const int bound = service.bind(host, port);
  if (bound < 0) throw UsageError("cannot listen on " + host + ":" + std::to_string(port));
  ctx.err << "serving on http://" << host << ":" << bound << "\n";
  g_service = &service;
  std::signal(SIGINT, [](int) {
    if (g_service) g_service->stop();
  });
  service.run();
  g_service = nullptr;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Kinematic simulator and choreography engine for a 13-actuator anthropomorphic hand", "dexhand"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--spec", opt.spec_path, "Hand-spec JSON document (\"default\" = shipped dataset)");
  app.add_option("--gestures", opt.gestures_path, "Gesture-set JSON document (\"default\" = shipped dataset)");
  app.add_option("-o,--output", opt.output_path, "Write the primary output to this file instead of stdout");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_flag("--lenient", opt.lenient, "Load gesture sets in lenient mode");

  std::string script_path;
  auto* validate = app.add_subcommand("validate", "Validate the gesture set (and optionally a script)");
  validate->add_option("--script", script_path, "Manipulation script to compile and validate");

  std::string analysis;
  std::string digit = "index";
  std::size_t samples = 50;
  std::string data_path;
  auto* analyze = app.add_subcommand("analyze", "Coverage, fingertip-trajectory or tendon-regression analysis");
  analyze->add_option("analysis", analysis, "coverage | trajectory | tendon")
      ->required()
      ->check(CLI::IsMember({"coverage", "trajectory", "tendon"}));
  analyze->add_option("--digit", digit, "Digit for trajectory analysis (thumb..little, or all)");
  analyze->add_option("--samples", samples, "Samples along the sweep")->check(CLI::Range(2, 100000));
  analyze->add_option("--data", data_path, "CSV of excursion_mm, angle_deg[, joint] for tendon analysis");

  std::string actuators_out;
  auto* compile = app.add_subcommand("compile", "Compile a script into a trajectory CSV");
  compile->add_option("script", script_path, "Script JSON (path, or relative to the data directory)")->required();
  compile->add_option("--actuators-out", actuators_out, "Also write the actuator CSV here");

  auto* export_cmd = app.add_subcommand("export", "Compile a script and write the 13-actuator command CSV");
  export_cmd->add_option("script", script_path, "Script JSON")->required();

  std::string suite = "all";
  int level = 0;
  auto* bench = app.add_subcommand("bench", "Run the three-level benchmark");
  bench->add_option("--suite", suite, "Suite JSON, or \"all\" for the shipped suite");
  bench->add_option("--level", level, "Run only this level (1, 2 or 3)")->check(CLI::Range(1, 3));

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP/JSON API");
  serve->add_option("--port", port, "Listen port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Listen address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageOrIo;
  }

  Context ctx{opt, out, err, {}, {}, {}};
  try {
    if (*validate) return cmd_validate(ctx, script_path);
    if (*analyze) {
      ctx.load_spec();
      if (analysis == "coverage") return analyze_coverage(ctx);
      if (analysis == "trajectory") return analyze_trajectory(ctx, digit, samples);
      return analyze_tendon(ctx, data_path);
    }
    if (*compile) return cmd_compile(ctx, script_path, actuators_out, false);
    if (*export_cmd) return cmd_compile(ctx, script_path, {}, true);
    if (*bench) return cmd_bench(ctx, suite, level);
    if (*serve) return cmd_serve(ctx, host, port);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrIo;
  } catch (const FitError& e) {
    err << "fit error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrIo;
  }
  return kUsageOrIo;
}

}  // namespace dexhand::cli
