#include "doctest.h"
#include "support.hpp"

#include "dexhand/benchmark.hpp"

using namespace dexhand;
using json_io::Json;

namespace {

std::vector<TaskDef> shipped_suite() { return load_suite_file(testing::data_dir() / "suite.json"); }

ManipulationScript pen_rotation() { return load_script_file(testing::data_dir() / "scripts" / "pen_rotation.json"); }

TaskResult run(const TaskDef& t) {
  return run_task(t, testing::default_gestures(), testing::default_spec(), testing::default_coupling());
}

}  // namespace

TEST_SUITE("benchmark") {
  TEST_CASE("level parsing") {
    CHECK(parse_level("L2_Complex") == BenchmarkLevel::L2_Complex);
    CHECK(parse_level("3") == BenchmarkLevel::L3_CCM);
    CHECK_FALSE(parse_level("L4").has_value());
    CHECK(to_string(BenchmarkLevel::L1_Single) == "L1_Single");
  }

  TEST_CASE("level 1 passes all 62 gestures") {
    const auto results = run_level1(testing::default_gestures(), testing::default_spec(), testing::default_coupling());
    REQUIRE(results.size() == 62);
    std::size_t passed = 0;
    for (const auto& r : results) {
      passed += r.passed;
      CHECK_MESSAGE(r.diagnostics.empty(), r.task_id);
    }
    CHECK(passed == 62);
    CHECK(results.front().task_id == testing::default_gestures().records().front().id);
  }

  TEST_CASE("level 1 refuses a set of the wrong size") {
    std::vector<GestureRecord> records = testing::default_gestures().records();
    records.pop_back();
    CHECK_THROWS_AS(
        run_level1(GestureSet("x", records), testing::default_spec(), testing::default_coupling()), ConfigError);
  }

  TEST_CASE("task definitions are checked against their level") {
    TaskDef t{"a", BenchmarkLevel::L1_Single, pen_rotation(), std::nullopt};
    CHECK_THROWS_AS(t.check(), ConfigError);
    TaskDef u{"b", BenchmarkLevel::L2_Complex, std::string("tripod"), std::nullopt};
    CHECK_THROWS_AS(u.check(), ConfigError);
    TaskDef v{"c", BenchmarkLevel::L3_CCM, pen_rotation(), std::nullopt};
    CHECK_THROWS_AS(v.check(), ConfigError);
    TaskDef w{"d", BenchmarkLevel::L2_Complex, pen_rotation(), Budget{}};
    CHECK_THROWS_AS(w.check(), ConfigError);
  }

  TEST_CASE("run_task turns content problems into failed results") {
    const TaskResult unknown = run({"u", BenchmarkLevel::L1_Single, std::string("not_a_gesture"), std::nullopt});
    CHECK_FALSE(unknown.passed);
    REQUIRE(unknown.diagnostics.size() == 1);
    CHECK(unknown.diagnostics[0].find("not_a_gesture") != std::string::npos);

    ManipulationScript bad = pen_rotation();
    bad.key_frames[2].target = std::string("trpod");
    const TaskResult compile = run({"c", BenchmarkLevel::L2_Complex, bad, std::nullopt});
    CHECK_FALSE(compile.passed);
    CHECK(compile.diagnostics.at(0).rfind("compile:", 0) == 0);

    const TaskResult mismatch = run({"m", BenchmarkLevel::L3_CCM, pen_rotation(), std::nullopt});
    CHECK_FALSE(mismatch.passed);
  }

  TEST_CASE("level 2 fails on step-limit breaches") {
    ManipulationScript s = pen_rotation();
    s.key_frames[1].interval = 1;
    const TaskResult r = run({"fast", BenchmarkLevel::L2_Complex, s, std::nullopt});
    CHECK_FALSE(r.passed);
    CHECK(r.frame_count == 32);
  }

  TEST_CASE("level 3 budgets") {
    const ManipulationScript s = pen_rotation();
    SUBCASE("within budget") {
      const TaskResult r = run({"ok", BenchmarkLevel::L3_CCM, s, Budget{25.0, 5}});
      CHECK(r.passed);
      CHECK(r.duration_s == 20.0);
      CHECK(r.gesture_count == 5);
      CHECK(r.frame_count == 41);
      CHECK(r.seconds_excess.value_or(0) <= 0);
    }
    SUBCASE("exactly at the budget") { CHECK(run({"edge", BenchmarkLevel::L3_CCM, s, Budget{20.0, 5}}).passed); }
    SUBCASE("too slow") {
      const TaskResult r = run({"slow", BenchmarkLevel::L3_CCM, s, Budget{15.0, std::nullopt}});
      CHECK_FALSE(r.passed);
      REQUIRE(r.seconds_excess.has_value());
      CHECK(*r.seconds_excess == doctest::Approx(5.0));
    }
    SUBCASE("too many gestures") {
      const TaskResult r = run({"many", BenchmarkLevel::L3_CCM, s, Budget{std::nullopt, 3}});
      CHECK_FALSE(r.passed);
      CHECK(r.gesture_excess == 2);
    }
    SUBCASE("empty budget places no limit") { CHECK(run({"free", BenchmarkLevel::L3_CCM, s, Budget{}}).passed); }
  }

  TEST_CASE("shipped suite passes end to end") {
    const auto tasks = shipped_suite();
    CHECK(tasks.size() == 76);
    const SuiteReport rep = run_suite(tasks, testing::default_gestures(), testing::default_spec(),
                                      testing::default_coupling());
    CHECK(rep.total == 76);
    CHECK(rep.all_passed());
    REQUIRE(rep.levels.size() == 3);
    CHECK(rep.levels[0].total == 62);
    CHECK(rep.levels[1].total == 7);
    CHECK(rep.levels[2].total == 7);
    CHECK(rep.pass_rate == 1.0);
    for (std::size_t i = 0; i < tasks.size(); ++i) CHECK(rep.results[i].task_id == tasks[i].id);
  }

  TEST_CASE("parallel and serial suite runs produce identical reports") {
    auto tasks = shipped_suite();
    ManipulationScript slow = pen_rotation();
    tasks.push_back({"slow", BenchmarkLevel::L3_CCM, slow, Budget{10.0, 2}});
    tasks.push_back({"ghost", BenchmarkLevel::L1_Single, std::string("ghost"), std::nullopt});
    const auto a = run_suite(tasks, testing::default_gestures(), testing::default_spec(), testing::default_coupling(),
                             kernels::Execution::Serial);
    const auto b = run_suite(tasks, testing::default_gestures(), testing::default_spec(), testing::default_coupling(),
                             kernels::Execution::Parallel);
    CHECK(a.results == b.results);
    CHECK(a.passed == 76);
    CHECK(a.total == 78);
    CHECK(report_to_json(a) == report_to_json(b));
  }

  TEST_CASE("empty levels report n/a") {
    std::vector<TaskDef> only_l2{{"p", BenchmarkLevel::L2_Complex, pen_rotation(), std::nullopt}};
    const SuiteReport rep =
        run_suite(only_l2, testing::default_gestures(), testing::default_spec(), testing::default_coupling());
    CHECK_FALSE(rep.levels[0].pass_rate.has_value());
    CHECK(rep.levels[1].pass_rate == 1.0);
    const Json j = report_to_json(rep);
    CHECK(j["levels"][0]["pass_rate"] == "n/a");
    CHECK(j["levels"][2]["pass_rate"] == "n/a");
    CHECK(render_report_text(rep).find("n/a") != std::string::npos);

    const SuiteReport none = run_suite({}, testing::default_gestures(), testing::default_spec(), testing::default_coupling());
    CHECK(none.total == 0);
    CHECK_FALSE(none.pass_rate.has_value());
  }

  TEST_CASE("suite document errors") {
    const auto dir = testing::data_dir();
    CHECK_THROWS_AS(parse_suite("{}", dir), SchemaError);
    CHECK_THROWS_AS(parse_suite(R"([{"id":"a","level":"L9","gesture":"tripod"}])", dir), SchemaError);
    CHECK_THROWS_AS(parse_suite(R"([{"id":"a","level":"L1_Single"}])", dir), SchemaError);
    CHECK_THROWS_AS(parse_suite(R"([{"id":"a","level":"L1_Single","gesture":"tripod","budget":{}}])", dir),
                    SchemaError);
    CHECK_THROWS_AS(parse_suite(R"([{"id":"a","level":"L3_CCM","script_file":"scripts/pen_rotation.json"}])", dir),
                    SchemaError);
    CHECK_THROWS_AS(parse_suite(R"([{"id":"a","level":"L2_Complex","script_file":"scripts/missing.json"}])", dir),
                    ConfigError);
    const auto ok = parse_suite(
        R"([{"id":"a","level":"3","script_file":"scripts/pen_rotation.json","budget":{"max_seconds":30}}])", dir);
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].budget->max_seconds == 30.0);
    CHECK_FALSE(ok[0].budget->max_gestures.has_value());
  }
}
