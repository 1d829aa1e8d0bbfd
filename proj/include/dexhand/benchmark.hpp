#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dexhand/choreography.hpp"
#include "dexhand/gestures.hpp"
#include "dexhand/json_io.hpp"
#include "dexhand/kernels.hpp"

namespace dexhand {

enum class BenchmarkLevel { L1_Single = 1, L2_Complex = 2, L3_CCM = 3 };

std::string_view to_string(BenchmarkLevel l);
std::optional<BenchmarkLevel> parse_level(std::string_view s);

/// Limits for a level-3 task. An empty budget places no limit.
struct Budget {
  std::optional<double> max_seconds;
  std::optional<int> max_gestures;
};

struct TaskDef {
  std::string id;
  BenchmarkLevel level = BenchmarkLevel::L1_Single;
  std::variant<std::string, ManipulationScript> payload;  // gesture id for L1, script otherwise
  std::optional<Budget> budget;                           // required for L3, forbidden otherwise

  /// Throws ConfigError when the payload kind or budget does not match the level.
  void check() const;
};

struct TaskResult {
  std::string task_id;
  BenchmarkLevel level = BenchmarkLevel::L1_Single;
  bool passed = false;
  std::vector<std::string> diagnostics;
  double duration_s = 0.0;
  std::size_t gesture_count = 0;
  std::size_t frame_count = 0;
  std::optional<double> seconds_excess;
  std::optional<int> gesture_excess;

  friend bool operator==(const TaskResult&, const TaskResult&) = default;
};

/// One result per gesture, in set order. The set must hold exactly the 62 benchmark gestures.
std::vector<TaskResult> run_level1(const GestureSet& set, const HandSpec& spec, const CouplingConfig& coupling);

/// Never throws for task-content problems; they become failed results with diagnostics.
TaskResult run_task(const TaskDef& task, const GestureSet& set, const HandSpec& spec, const CouplingConfig& coupling);

struct LevelSummary {
  BenchmarkLevel level;
  std::size_t total = 0;
  std::size_t passed = 0;
  std::optional<double> pass_rate;  // undefined for an empty level
};

struct SuiteReport {
  std::vector<TaskResult> results;  // in task-list order
  std::vector<LevelSummary> levels;  // always L1, L2, L3
  std::size_t total = 0;
  std::size_t passed = 0;
  std::optional<double> pass_rate;

  bool all_passed() const { return passed == total; }
};

/// Runs tasks independently (in parallel when requested) and merges results in list order.
SuiteReport run_suite(std::span<const TaskDef> tasks, const GestureSet& set, const HandSpec& spec,
                      const CouplingConfig& coupling, kernels::Execution exec = kernels::Execution::Parallel);

/// Suite document: JSON array of task objects. `script_file` entries resolve against base_dir.
std::vector<TaskDef> parse_suite(std::string_view json_text, const std::filesystem::path& base_dir);
std::vector<TaskDef> load_suite_file(const std::filesystem::path& path);

json_io::Json report_to_json(const SuiteReport& report);
std::string render_report_text(const SuiteReport& report);

}  // namespace dexhand
