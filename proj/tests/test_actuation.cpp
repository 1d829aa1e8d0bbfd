#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "dexhand/choreography.hpp"

using namespace dexhand;

namespace {

double pose_error(const HandPose& a, const HandPose& b) { return max_abs_diff(a, b); }

// Minimiser of a convex quadratic on [lo, hi]: bisection on the sign of the central difference,
// which is exact for quadratics.
template <class F>
double argmin(F f, double lo, double hi) {
  const double h = 1e-3;
  if (f(lo + h) - f(lo - h) >= 0) return lo;
  if (f(hi + h) - f(hi - h) <= 0) return hi;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double m = (lo + hi) / 2;
    (f(m + h) - f(m - h) > 0 ? hi : lo) = m;
  }
  return (lo + hi) / 2;
}

// Numeric least-squares oracle for the (J1, J2) pair of a triple digit.
double oracle_flex(double j1, double j2, double kappa) {
  auto sse = [&](double f) { return (f - j1) * (f - j1) + (kappa * f - j2) * (kappa * f - j2); };
  return argmin(sse, -1000, 1000);
}

double oracle_ring_u(double j1, double j2, double j3, const std::array<double, 3>& p) {
  auto sse = [&](double u) {
    return (u * p[0] - j1) * (u * p[0] - j1) + (u * p[1] - j2) * (u * p[1] - j2) + (u * p[2] - j3) * (u * p[2] - j3);
  };
  return argmin(sse, 0, 1);
}

}  // namespace

TEST_SUITE("actuation") {
  TEST_CASE("default coupling ratios") {
    const CouplingConfig& c = testing::default_coupling();
    CHECK(c.kappa_of(DigitId::Thumb) == doctest::Approx(75.0 / 70));
    CHECK(c.kappa_of(DigitId::Index) == doctest::Approx(100.0 / 70));
    CHECK(c.kappa_of(DigitId::Middle) == doctest::Approx(80.0 / 90));
    CHECK(c.kappa_of(DigitId::Little) == doctest::Approx(100.0 / 69));
    CHECK(c.ring_profile == std::array<double, 3>{70, 90, 95});
    CHECK_NOTHROW(c.validate(testing::default_spec()));
  }

  TEST_CASE("coupling validation") {
    CouplingConfig c = testing::default_coupling();
    c.kappa[1] = 0;
    CHECK_THROWS_AS(c.validate(testing::default_spec()), ConfigError);
    c = testing::default_coupling();
    c.ring_profile[2] = 96;
    CHECK_THROWS_AS(c.validate(testing::default_spec()), ConfigError);
  }

  TEST_CASE("actuator naming and grouping") {
    CHECK(to_string(ActuatorId::ThumbFlex) == "thumb_flex");
    CHECK(to_string(ActuatorId::LittleAbdAdd) == "little_abdadd");
    CHECK(to_string(ActuatorId::RingAll) == "ring_all");
    CHECK(actuators_of(DigitId::Middle).base == ActuatorId::MiddleBase);
    CHECK_THROWS_AS(actuators_of(DigitId::Ring), ArgumentError);
  }

  TEST_CASE("expand follows the coupling law") {
    const CouplingConfig& c = testing::default_coupling();
    ActuatorVector a;
    a[ActuatorId::IndexFlex] = 35;
    a[ActuatorId::IndexBase] = 40;
    a[ActuatorId::IndexAbdAdd] = -5;
    a[ActuatorId::RingAll] = 0.5;
    const HandPose p = expand(a, c);
    CHECK(p.at(DigitId::Index, JointRole::J1_Distal) == 35);
    CHECK(p.at(DigitId::Index, JointRole::J2_Middle) == doctest::Approx(50));
    CHECK(p.at(DigitId::Index, JointRole::J3_Base) == 40);
    CHECK(p.at(DigitId::Index, JointRole::J4_AbdAdd) == -5);
    CHECK(p.at(DigitId::Ring, JointRole::J1_Distal) == 35);
    CHECK(p.at(DigitId::Ring, JointRole::J2_Middle) == 45);
    CHECK(p.at(DigitId::Ring, JointRole::J3_Base) == 47.5);
    CHECK(p.at(DigitId::Ring, JointRole::J4_AbdAdd) == 0);
  }

  TEST_CASE("project on a pose off the coupling manifold") {
    HandPose p;
    p.at(DigitId::Index, JointRole::J1_Distal) = 70;
    const Projection pr = project(p, testing::default_coupling());
    CHECK(pr.actuators[ActuatorId::IndexFlex] == doctest::Approx(3430.0 / 149).epsilon(1e-12));
    CHECK(pr.residual == doctest::Approx(46.979865771812086).epsilon(1e-12));
  }

  TEST_CASE("project matches the numeric least-squares oracle") {
    const CouplingConfig& c = testing::default_coupling();
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
      const HandPose p = testing::random_pose(rng);
      const Projection pr = project(p, c);
      for (DigitId d : kTripleDigits) {
        const DigitActuators ids = actuators_of(d);
        const double f = oracle_flex(p.at(d, JointRole::J1_Distal), p.at(d, JointRole::J2_Middle), c.kappa_of(d));
        CHECK(std::abs(pr.actuators[ids.flex] - f) < 1e-8);
        CHECK(pr.actuators[ids.base] == p.at(d, JointRole::J3_Base));
        CHECK(pr.actuators[ids.abd_add] == p.at(d, JointRole::J4_AbdAdd));
      }
      const double u = oracle_ring_u(p.at(DigitId::Ring, JointRole::J1_Distal), p.at(DigitId::Ring, JointRole::J2_Middle),
                                     p.at(DigitId::Ring, JointRole::J3_Base), c.ring_profile);
      CHECK(std::abs(pr.actuators[ActuatorId::RingAll] - u) < 1e-8);
      CHECK(pr.residual == doctest::Approx(pose_error(expand(pr.actuators, c), p)).epsilon(1e-12));
    }
  }

  TEST_CASE("round trip through the coupling law") {
    const CouplingConfig& c = testing::default_coupling();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
      const ActuatorVector a = testing::random_actuators(rng);
      const Projection pr = project(expand(a, c), c);
      for (std::size_t k = 0; k < kActuatorCount; ++k) CHECK(std::abs(pr.actuators.values()[k] - a.values()[k]) < 1e-9);
      CHECK(pr.residual < 1e-9);
    }
  }

  TEST_CASE("projection is idempotent and never increases the residual") {
    const CouplingConfig& c = testing::default_coupling();
    std::mt19937_64 rng(6);
    for (int i = 0; i < 1000; ++i) {
      const HandPose p = testing::random_pose(rng);
      const Projection once = project(p, c);
      const HandPose on_manifold = expand(once.actuators, c);
      const Projection twice = project(on_manifold, c);
      for (std::size_t k = 0; k < kActuatorCount; ++k)
        CHECK(std::abs(twice.actuators.values()[k] - once.actuators.values()[k]) < 1e-9);
      CHECK(twice.residual < 1e-9);
      CHECK(once.residual >= 0);
    }
  }

  TEST_CASE("ring u is clamped to [0, 1]") {
    const CouplingConfig& c = testing::default_coupling();
    HandPose p;
    p.at(DigitId::Ring, JointRole::J1_Distal) = 140;
    p.at(DigitId::Ring, JointRole::J2_Middle) = 180;
    p.at(DigitId::Ring, JointRole::J3_Base) = 190;
    CHECK(project(p, c).actuators[ActuatorId::RingAll] == 1.0);
    p.at(DigitId::Ring, JointRole::J1_Distal) = -10;
    p.at(DigitId::Ring, JointRole::J2_Middle) = -10;
    p.at(DigitId::Ring, JointRole::J3_Base) = -10;
    CHECK(project(p, c).actuators[ActuatorId::RingAll] == 0.0);
  }

  TEST_CASE("tendon excursion") {
    TendonModel m;
    const JointKey pip{DigitId::Index, JointRole::J2_Middle};
    const JointKey dip{DigitId::Index, JointRole::J1_Distal};
    m.set_moment_arm(pip, 10);
    m.set_moment_arm(dip, 5);
    const std::pair<JointKey, double> one[] = {{pip, 90}};
    CHECK(excursion(one, m) == doctest::Approx(10 * M_PI / 2));
    const std::pair<JointKey, double> two[] = {{pip, 90}, {dip, 180}};
    CHECK(excursion(two, m) == doctest::Approx(10 * M_PI / 2 + 5 * M_PI));
    const std::pair<JointKey, double> unknown[] = {{JointKey{DigitId::Thumb, JointRole::J3_Base}, 10}};
    CHECK_THROWS_AS(excursion(unknown, m), ConfigError);
    CHECK_THROWS_AS(m.set_moment_arm(pip, 0), ConfigError);
  }

  TEST_CASE("linear fit recovers an exact moment arm") {
    TendonModel m;
    const JointKey pip{DigitId::Index, JointRole::J2_Middle};
    m.set_moment_arm(pip, 10);
    std::vector<double> e, phi;
    for (int i = 0; i <= 100; i += 5) {
      const std::pair<JointKey, double> a[] = {{pip, double(i)}};
      e.push_back(excursion(a, m));
      phi.push_back(i);
    }
    const LinearFit fit = fit_linear(e, phi);
    CHECK(std::abs(fit.slope - 180 / (M_PI * 10)) < 1e-9);
    CHECK(std::abs(fit.intercept) < 1e-9);
    CHECK(std::abs(fit.r_squared - 1) < 1e-12);
  }

  TEST_CASE("linear fit with pinned-seed noise") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 2.0);
    std::vector<double> e, phi;
    for (int i = 0; i <= 100; ++i) {
      e.push_back(10.0 * deg_to_rad(i));
      phi.push_back(i + noise(rng));
    }
    const LinearFit fit = fit_linear(e, phi);
    CHECK(fit.r_squared > 0.96);
    CHECK(fit.r_squared == doctest::Approx(0.996378).epsilon(1e-6));  // frozen from the first run
    CHECK(std::abs(fit.slope - 180 / (M_PI * 10)) < 0.05 * 180 / (M_PI * 10));
  }

  TEST_CASE("linear fit degenerate inputs") {
    const std::vector<double> one{1};
    CHECK_THROWS_AS(fit_linear(one, one), FitError);
    const std::vector<double> flat{2, 2, 2}, y{1, 2, 3};
    CHECK_THROWS_AS(fit_linear(flat, y), FitError);
    const std::vector<double> two{1, 2};
    CHECK_THROWS_AS(fit_linear(two, y), FitError);
  }

  TEST_CASE("actuator CSV layout") {
    Trajectory t;
    t.frames = {HandPose{}, expand(ActuatorVector{}, testing::default_coupling())};
    t.key_frame_indices = {0, 1};
    const std::string csv = export_actuator_csv(t, testing::default_coupling());
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "frame,thumb_flex,thumb_base,thumb_abdadd,index_flex,index_base,index_abdadd,middle_flex,middle_base,"
          "middle_abdadd,little_flex,little_base,little_abdadd,ring_all,residual_deg");
    CHECK(csv.find("\n0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  }
}
