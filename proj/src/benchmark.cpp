#include "dexhand/benchmark.hpp"

#include <cmath>
#include <cstdio>
#include <cstdint>

namespace dexhand {

using json_io::Json;

namespace {

constexpr std::size_t kLevel1GestureCount = 62;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

TaskResult assess_gesture(const std::string& task_id, const HandPose& pose, const HandSpec& spec,
                          const CouplingConfig& coupling) {
  TaskResult r;
  r.task_id = task_id;
  r.level = BenchmarkLevel::L1_Single;
  r.gesture_count = 1;
  r.frame_count = 1;
  const Executability ex = assess_pose(pose, spec, coupling);
  for (const auto& v : ex.violations) r.diagnostics.push_back("rom: " + describe(v));
  if (ex.residual > kExecutableResidualDeg)
    r.diagnostics.push_back("coupling residual " + fmt("%.3g", ex.residual) + " deg exceeds " +
                            fmt("%g", kExecutableResidualDeg) + " deg");
  r.passed = r.diagnostics.empty();
  return r;
}

}  // namespace

std::string_view to_string(BenchmarkLevel l) {
  switch (l) {
    case BenchmarkLevel::L1_Single: return "L1_Single";
    case BenchmarkLevel::L2_Complex: return "L2_Complex";
    case BenchmarkLevel::L3_CCM: return "L3_CCM";
  }
  return "?";
}

std::optional<BenchmarkLevel> parse_level(std::string_view s) {
  if (s == "L1_Single" || s == "1") return BenchmarkLevel::L1_Single;
  if (s == "L2_Complex" || s == "2") return BenchmarkLevel::L2_Complex;
  if (s == "L3_CCM" || s == "3") return BenchmarkLevel::L3_CCM;
  return std::nullopt;
}

void TaskDef::check() const {
  const bool is_gesture = std::holds_alternative<std::string>(payload);
  if (level == BenchmarkLevel::L1_Single && !is_gesture)
    throw ConfigError("task " + id + ": level-1 tasks take a gesture id");
  if (level != BenchmarkLevel::L1_Single && is_gesture)
    throw ConfigError("task " + id + ": level-2/3 tasks take a script");
  if (level == BenchmarkLevel::L3_CCM && !budget) throw ConfigError("task " + id + ": level-3 tasks need a budget");
  if (level != BenchmarkLevel::L3_CCM && budget)
    throw ConfigError("task " + id + ": only level-3 tasks carry a budget");
}

std::vector<TaskResult> run_level1(const GestureSet& set, const HandSpec& spec, const CouplingConfig& coupling) {
  if (set.size() != kLevel1GestureCount)
    throw ConfigError("level 1 needs " + std::to_string(kLevel1GestureCount) + " gestures, got " +
                      std::to_string(set.size()));
  std::vector<TaskResult> out;
  out.reserve(set.size());
  for (const auto& g : set.records()) out.push_back(assess_gesture(g.id, g.pose, spec, coupling));
  return out;
}

TaskResult run_task(const TaskDef& task, const GestureSet& set, const HandSpec& spec, const CouplingConfig& coupling) {
  try {
    task.check();
  } catch (const ConfigError& e) {
    TaskResult r;
    r.task_id = task.id;
    r.level = task.level;
    r.diagnostics.push_back(std::string("config: ") + e.what());
    return r;
  }

  if (const auto* gesture = std::get_if<std::string>(&task.payload)) {
    if (const GestureRecord* g = set.try_find(*gesture)) return assess_gesture(task.id, g->pose, spec, coupling);
    TaskResult r;
    r.task_id = task.id;
    r.diagnostics.push_back("unknown gesture \"" + *gesture + "\"");
    return r;
  }

  const ManipulationScript& script = std::get<ManipulationScript>(task.payload);
  TaskResult r;
  r.task_id = task.id;
  r.level = task.level;

  Trajectory traj;
  try {
    traj = compile_script(script, set);
  } catch (const Error& e) {
    r.diagnostics.push_back(std::string("compile: ") + e.what());
    return r;
  }

  const TrajectoryMetrics m = trajectory_metrics(traj);
  r.duration_s = m.duration_s;
  r.gesture_count = m.gesture_count;
  r.frame_count = m.frame_count;

  const TrajectoryReport rep =
      validate_trajectory(traj, spec, coupling, script.max_step_deg.value_or(kDefaultMaxStepDeg));
  for (const auto& fv : rep.rom_violations)
    for (const auto& v : fv.violations) r.diagnostics.push_back("frame " + std::to_string(fv.frame) + " rom: " + describe(v));
  if (rep.max_residual() > kExecutableResidualDeg)
    r.diagnostics.push_back("coupling residual " + fmt("%.3g", rep.max_residual()) + " deg exceeds " +
                            fmt("%g", kExecutableResidualDeg) + " deg");
  for (const auto& f : rep.step_flags)
    r.diagnostics.push_back("segment " + std::to_string(f.segment) + ": " + joint_name(f.joint) + " moves " +
                            fmt("%.4g", f.step_deg) + " deg/frame; use interval >= " +
                            std::to_string(f.suggested_interval));

  if (task.level == BenchmarkLevel::L3_CCM && task.budget) {
    const Budget& b = *task.budget;
    if (b.max_seconds && m.duration_s > *b.max_seconds) {
      r.seconds_excess = m.duration_s - *b.max_seconds;
      r.diagnostics.push_back("budget: duration " + fmt("%g", m.duration_s) + " s exceeds " +
                              fmt("%g", *b.max_seconds) + " s");
    }
    if (b.max_gestures && static_cast<long long>(m.gesture_count) > *b.max_gestures) {
      r.gesture_excess = static_cast<int>(m.gesture_count) - *b.max_gestures;
      r.diagnostics.push_back("budget: " + std::to_string(m.gesture_count) + " gestures exceed " +
                              std::to_string(*b.max_gestures));
    }
  }
  r.passed = r.diagnostics.empty();
  return r;
}

SuiteReport run_suite(std::span<const TaskDef> tasks, const GestureSet& set, const HandSpec& spec,
                      const CouplingConfig& coupling, kernels::Execution exec) {
  SuiteReport report;
  report.results.resize(tasks.size());
  const auto n = static_cast<std::int64_t>(tasks.size());
  if (exec == kernels::Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) report.results[i] = run_task(tasks[i], set, spec, coupling);
  } else {
    for (std::int64_t i = 0; i < n; ++i) report.results[i] = run_task(tasks[i], set, spec, coupling);
  }

  for (BenchmarkLevel l : {BenchmarkLevel::L1_Single, BenchmarkLevel::L2_Complex, BenchmarkLevel::L3_CCM})
    report.levels.push_back({l, 0, 0, std::nullopt});
  for (const auto& r : report.results) {
    LevelSummary& s = report.levels[static_cast<std::size_t>(r.level) - 1];
    ++s.total;
    ++report.total;
    if (r.passed) {
      ++s.passed;
      ++report.passed;
    }
  }
  for (auto& s : report.levels)
    if (s.total) s.pass_rate = static_cast<double>(s.passed) / static_cast<double>(s.total);
  if (report.total) report.pass_rate = static_cast<double>(report.passed) / static_cast<double>(report.total);
  return report;
}

// ---------------------------------------------------------------------------
// Suite documents

std::vector<TaskDef> parse_suite(std::string_view json_text, const std::filesystem::path& base_dir) {
  Json doc = json_io::parse(json_text, "suite document");
  if (!doc.is_array()) throw SchemaError("", "suite document must be an array of tasks");
  std::vector<TaskDef> tasks;
  tasks.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "[" + std::to_string(i) + "]";
    const Json& t = doc[i];
    TaskDef def;
    def.id = json_io::require_string(json_io::require_field(t, "id", path), path + ".id");
    const std::string& lv = json_io::require_string(json_io::require_field(t, "level", path), path + ".level");
    auto level = parse_level(lv);
    if (!level) throw SchemaError(path + ".level", "unknown level \"" + lv + "\"");
    def.level = *level;

    const int kinds = int(t.contains("gesture")) + int(t.contains("script")) + int(t.contains("script_file"));
    if (kinds != 1) throw SchemaError(path, "exactly one of gesture, script or script_file is required");
    if (t.contains("gesture"))
      def.payload = json_io::require_string(t["gesture"], path + ".gesture");
    else if (t.contains("script"))
      def.payload = parse_script_json(t["script"], path + ".script");
    else {
      const auto file = base_dir / json_io::require_string(t["script_file"], path + ".script_file");
      def.payload = load_script_file(file);
    }

    if (auto it = t.find("budget"); it != t.end()) {
      if (!it->is_object()) throw SchemaError(path + ".budget", "expected an object");
      Budget b;
      if (auto s = it->find("max_seconds"); s != it->end())
        b.max_seconds = json_io::require_number(*s, path + ".budget.max_seconds");
      if (auto g = it->find("max_gestures"); g != it->end()) {
        if (!g->is_number_integer()) throw SchemaError(path + ".budget.max_gestures", "expected an integer");
        b.max_gestures = g->get<int>();
      }
      def.budget = b;
    }
    try {
      def.check();
    } catch (const ConfigError& e) {
      throw SchemaError(path, e.what());
    }
    tasks.push_back(std::move(def));
  }
  return tasks;
}

std::vector<TaskDef> load_suite_file(const std::filesystem::path& path) {
  return parse_suite(json_io::read_text(path), path.parent_path());
}

Json report_to_json(const SuiteReport& report) {
  auto rate = [](const std::optional<double>& r) { return r ? Json(*r) : Json("n/a"); };
  Json doc = Json::object();
  Json summary = Json::object();
  summary["total"] = report.total;
  summary["passed"] = report.passed;
  summary["pass_rate"] = rate(report.pass_rate);
  doc["summary"] = std::move(summary);

  Json levels = Json::array();
  for (const auto& s : report.levels) {
    Json l = Json::object();
    l["level"] = std::string(to_string(s.level));
    l["total"] = s.total;
    l["passed"] = s.passed;
    l["pass_rate"] = rate(s.pass_rate);
    levels.push_back(std::move(l));
  }
  doc["levels"] = std::move(levels);

  Json results = Json::array();
  for (const auto& r : report.results) {
    Json j = Json::object();
    j["task_id"] = r.task_id;
    j["level"] = std::string(to_string(r.level));
    j["passed"] = r.passed;
    j["duration_s"] = json_io::number(r.duration_s);
    j["gesture_count"] = r.gesture_count;
    j["frame_count"] = r.frame_count;
    if (r.seconds_excess) j["seconds_excess"] = json_io::number(*r.seconds_excess);
    if (r.gesture_excess) j["gesture_excess"] = *r.gesture_excess;
    j["diagnostics"] = r.diagnostics;
    results.push_back(std::move(j));
  }
  doc["results"] = std::move(results);
  return doc;
}

std::string render_report_text(const SuiteReport& report) {
  auto rate = [](const std::optional<double>& r) { return r ? fmt("%.1f%%", 100.0 * *r) : std::string("n/a"); };
  std::string out;
  for (const auto& s : report.levels) {
    out += "== " + std::string(to_string(s.level)) + ": " + std::to_string(s.passed) + "/" + std::to_string(s.total) +
           " passed (" + rate(s.pass_rate) + ")\n";
    for (const auto& r : report.results) {
      if (r.level != s.level) continue;
      char line[160];
      std::snprintf(line, sizeof line, "  %-4s %-32s %8.2f s %3zu gestures %5zu frames\n", r.passed ? "PASS" : "FAIL",
                    r.task_id.c_str(), r.duration_s, r.gesture_count, r.frame_count);
      out += line;
      for (const auto& d : r.diagnostics) out += "       - " + d + "\n";
    }
  }
  out += "TOTAL: " + std::to_string(report.passed) + "/" + std::to_string(report.total) + " passed (" +
         rate(report.pass_rate) + ")\n";
  return out;
}

}  // namespace dexhand
