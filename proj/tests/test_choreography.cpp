#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "dexhand/choreography.hpp"

using namespace dexhand;
using json_io::Json;

namespace {

ManipulationScript pen_rotation() { return load_script_file(testing::data_dir() / "scripts" / "pen_rotation.json"); }

// Frame t of the segment with frame 0 = from.
HandPose frame_at(const std::vector<HandPose>& seg, const HandPose& from, int t) { return t == 0 ? from : seg[t - 1]; }

}  // namespace

TEST_SUITE("choreography") {
  TEST_CASE("interpolation worked example") {
    HandPose a, b;
    a.at(DigitId::Index, JointRole::J3_Base) = 10;
    b.at(DigitId::Index, JointRole::J3_Base) = 40;
    const auto seg = interpolate_segment(a, b, 3);
    REQUIRE(seg.size() == 3);
    CHECK(seg[0].at(DigitId::Index, JointRole::J3_Base) == 20);
    CHECK(seg[1].at(DigitId::Index, JointRole::J3_Base) == 30);
    CHECK(seg[2] == b);
    CHECK(interpolate_segment(a, b, 1) == std::vector<HandPose>{b});
    CHECK_THROWS_AS(interpolate_segment(a, b, 0), ArgumentError);
    CHECK_THROWS_AS(interpolate_segment(a, b, -4), ArgumentError);
  }

  TEST_CASE("interpolation properties over random pose pairs") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> interval(1, 100);
    for (int n = 0; n < 1000; ++n) {
      const HandPose a = testing::random_pose(rng), b = testing::random_pose(rng);
      const int T = interval(rng);
      const auto seg = interpolate_segment(a, b, T);
      const auto back = interpolate_segment(b, a, T);
      REQUIRE(seg.size() == static_cast<std::size_t>(T));
      CHECK(seg.back() == b);

      for (std::size_t j = 0; j < kJointCount; ++j) {
        const double lo = std::min(a.angles()[j], b.angles()[j]);
        const double hi = std::max(a.angles()[j], b.angles()[j]);
        const double step = (b.angles()[j] - a.angles()[j]) / T;
        for (int t = 1; t <= T; ++t) {
          const double v = frame_at(seg, a, t).angles()[j];
          CHECK(v >= lo - 1e-9);
          CHECK(v <= hi + 1e-9);
          CHECK(std::abs(v - frame_at(seg, a, t - 1).angles()[j] - step) < 1e-9);
          CHECK(std::abs(v - frame_at(back, b, T - t).angles()[j]) < 1e-9);
        }
      }
    }
  }

  TEST_CASE("parallel interpolation equals the serial path") {
    std::mt19937_64 rng(3);
    const HandPose a = testing::random_pose(rng), b = testing::random_pose(rng);
    CHECK(interpolate_segment(a, b, 5000, kernels::Execution::Parallel) ==
          interpolate_segment(a, b, 5000, kernels::Execution::Serial));
  }

  TEST_CASE("pen rotation compiles to 41 clean frames") {
    const ManipulationScript s = pen_rotation();
    CHECK(s.key_frames.size() == 5);
    const Trajectory t = compile_script(s, testing::default_gestures());
    CHECK(t.frames.size() == 41);
    CHECK(t.key_frame_indices == std::vector<std::size_t>{0, 10, 20, 30, 40});
    const auto keys = resolve_key_frames(s, testing::default_gestures());
    for (std::size_t i = 0; i < keys.size(); ++i) CHECK(t.frames[t.key_frame_indices[i]] == keys[i]);

    const TrajectoryReport rep = validate_trajectory(t, testing::default_spec(), testing::default_coupling());
    CHECK(rep.rom_violations.empty());
    CHECK(rep.step_flags.empty());
    CHECK(rep.max_residual() <= kExecutableResidualDeg);
    CHECK(rep.clean());

    const TrajectoryMetrics m = trajectory_metrics(t);
    CHECK(m.frame_count == 41);
    CHECK(m.gesture_count == 5);
    CHECK(m.duration_s == 20.0);
  }

  TEST_CASE("every shipped script compiles clean") {
    for (const char* name : {"pen_rotation", "ball_rotation", "crawling", "pen_spin", "balloon_flick", "climbing",
                             "rubik_layer_turn"}) {
      const ManipulationScript s = load_script_file(testing::data_dir() / "scripts" / (std::string(name) + ".json"));
      const Trajectory t = compile_script(s, testing::default_gestures());
      const TrajectoryReport rep =
          validate_trajectory(t, testing::default_spec(), testing::default_coupling(), s.max_step_deg.value_or(5));
      CHECK_MESSAGE(rep.clean(), name);
    }
  }

  TEST_CASE("unknown gesture ids are all reported") {
    ManipulationScript s = pen_rotation();
    s.key_frames[1].target = std::string("adduction_grp");
    s.key_frames[3].target = std::string("nope");
    try {
      compile_script(s, testing::default_gestures());
      FAIL("expected CompileError");
    } catch (const CompileError& e) {
      CHECK(e.unknown_ids() == std::vector<std::string>{"adduction_grp", "nope"});
    }
  }

  TEST_CASE("step limit flags fast segments with a suggested interval") {
    ManipulationScript s;
    s.name = "fast";
    HandPose a, b;
    b.at(DigitId::Index, JointRole::J3_Base) = 60;
    s.key_frames = {{a, 0}, {b, 4}};
    const Trajectory t = compile_script(s, testing::default_gestures());
    const TrajectoryReport rep = validate_trajectory(t, testing::default_spec(), testing::default_coupling());
    REQUIRE(rep.step_flags.size() == 1);
    CHECK(rep.step_flags[0].segment == 0);
    CHECK(rep.step_flags[0].joint == JointKey{DigitId::Index, JointRole::J3_Base});
    CHECK(rep.step_flags[0].step_deg == doctest::Approx(15));
    CHECK(rep.step_flags[0].interval == 4);
    CHECK(rep.step_flags[0].suggested_interval == 12);
    CHECK(rep.max_step[JointKey{DigitId::Index, JointRole::J3_Base}.index()] == doctest::Approx(15));
    CHECK_FALSE(rep.clean());

    s.key_frames[1].interval = 12;
    CHECK(validate_trajectory(compile_script(s, testing::default_gestures()), testing::default_spec(),
                              testing::default_coupling())
              .step_flags.empty());
  }

  TEST_CASE("ROM violations and residuals are reported per frame") {
    ManipulationScript s;
    s.name = "out";
    HandPose a, b;
    b.at(DigitId::Index, JointRole::J3_Base) = 90;
    s.key_frames = {{a, 0}, {b, 30}};
    const Trajectory t = compile_script(s, testing::default_gestures());
    const TrajectoryReport rep = validate_trajectory(t, testing::default_spec(), testing::default_coupling());
    REQUIRE_FALSE(rep.rom_violations.empty());
    // 82 is the top of the actuated range: frames 28, 29, 30 are beyond it.
    CHECK(rep.rom_violations.front().frame == 28);
    CHECK(rep.rom_violations.size() == 3);
    CHECK(rep.residuals.size() == 31);
    CHECK(rep.max_residual() < 1e-9);
  }

  TEST_CASE("serial and parallel validation agree") {
    const Trajectory t = compile_script(pen_rotation(), testing::default_gestures());
    const auto a = validate_trajectory(t, testing::default_spec(), testing::default_coupling(), 1.0,
                                       kernels::Execution::Serial);
    const auto b = validate_trajectory(t, testing::default_spec(), testing::default_coupling(), 1.0,
                                       kernels::Execution::Parallel);
    CHECK(a.residuals == b.residuals);
    CHECK(a.max_step == b.max_step);
    CHECK(a.step_flags.size() == b.step_flags.size());
  }

  TEST_CASE("script parsing") {
    SUBCASE("round trip") {
      const ManipulationScript s = pen_rotation();
      CHECK(parse_script(serialize_script(s)) == s);
      const std::string text = json_io::read_text(testing::data_dir() / "scripts" / "pen_rotation.json");
      CHECK(serialize_script(parse_script(text)) == text);
    }
    SUBCASE("inline pose key frame") {
      Json doc = script_to_json(pen_rotation());
      doc["key_frames"][2].erase("gesture");
      doc["key_frames"][2]["pose"] = json_io::pose_to_json(HandPose{});
      const ManipulationScript s = parse_script(doc.dump());
      CHECK(std::get<HandPose>(s.key_frames[2].target) == HandPose{});
    }
    SUBCASE("errors") {
      Json doc = script_to_json(pen_rotation());
      Json one = doc;
      one["key_frames"] = Json::array({doc["key_frames"][0]});
      CHECK_THROWS_AS(parse_script(one.dump()), SchemaError);
      Json zero = doc;
      zero["key_frames"][1]["interval_frames"] = 0;
      CHECK_THROWS_AS(parse_script(zero.dump()), SchemaError);
      Json missing = doc;
      missing["key_frames"][2].erase("interval_frames");
      CHECK_THROWS_AS(parse_script(missing.dump()), SchemaError);
      Json both = doc;
      both["key_frames"][0]["pose"] = json_io::pose_to_json(HandPose{});
      CHECK_THROWS_AS(parse_script(both.dump()), SchemaError);
      Json rate = doc;
      rate["frame_rate_fps"] = 0;
      CHECK_THROWS_AS(parse_script(rate.dump()), SchemaError);
    }
  }

  TEST_CASE("a reversed script replays the trajectory backwards") {
    const ManipulationScript s = pen_rotation();
    const Trajectory fwd = compile_script(s, testing::default_gestures());
    const Trajectory bwd = compile_script(reversed(s), testing::default_gestures());
    REQUIRE(fwd.frames.size() == bwd.frames.size());
    const std::size_t n = fwd.frames.size();
    for (std::size_t i = 0; i < n; ++i) CHECK(max_abs_diff(fwd.frames[i], bwd.frames[n - 1 - i]) < 1e-9);
  }

  TEST_CASE("joint displacement series") {
    const Trajectory t = compile_script(pen_rotation(), testing::default_gestures());
    const std::vector<std::string> names{"Index.J3_Base", "thumb_j4"};
    const auto series = joint_displacement_series(t, names);
    REQUIRE(series.size() == 2);
    CHECK(series[0].joint == JointKey{DigitId::Index, JointRole::J3_Base});
    CHECK(series[1].joint == JointKey{DigitId::Thumb, JointRole::J4_AbdAdd});
    CHECK(series[0].samples.size() == 41);
    CHECK(series[0].samples[40].second == t.frames[40].at(DigitId::Index, JointRole::J3_Base));
    CHECK(joint_displacement_series(t, std::span<const JointKey>{}).size() == 20);
    const std::vector<std::string> bad{"Index.J9"};
    CHECK_THROWS_AS(joint_displacement_series(t, bad), ArgumentError);
  }

  TEST_CASE("trajectory CSV layout") {
    const Trajectory t = compile_script(pen_rotation(), testing::default_gestures());
    const std::string csv = export_trajectory_csv(t);
    CHECK(csv.rfind("frame,is_key_frame,thumb_j1,thumb_j2,thumb_j3,thumb_j4,index_j1,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 42);
    CHECK(csv.find("\n10,1,") != std::string::npos);
    CHECK(csv.find("\n11,0,") != std::string::npos);
  }
}
