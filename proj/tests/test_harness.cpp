#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "gcm/harness.hpp"

using namespace gcm;

namespace {
TimeSeriesCube ramp_cube() {
    TimeSeriesCube c(4, 3, 200, 0.01, 0.02, 0.02, 0.44);
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = std::sin(0.05 * i);
    return c;
}
}  // namespace

TEST_CASE("clean acquisition is the identity") {
    const TimeSeriesCube c = ramp_cube();
    const TimeSeriesCube r = apply_acquisition(c, ExperimentConfig{}, 3);
    CHECK(r.data() == c.data());
}

TEST_CASE("distortion, offset and delay") {
    const TimeSeriesCube c = ramp_cube();
    ExperimentConfig x;
    x.calibration_distortion = 2.0;
    x.dc_offset = 0.1;
    x.time_offset = 0.05;
    const TimeSeriesCube r = apply_acquisition(c, x, 3);
    CHECK(r(1, 2, 0) == doctest::Approx(0.1));
    CHECK(r(1, 2, 4) == doctest::Approx(0.1));
    CHECK(r(1, 2, 20) == doctest::Approx(c(1, 2, 15) / 2.0 + 0.1));
}

TEST_CASE("noise level and seeding") {
    const TimeSeriesCube c = ramp_cube();
    ExperimentConfig x;
    x.noise = 0.05;
    const TimeSeriesCube a = apply_acquisition(c, x, 5);
    const TimeSeriesCube b = apply_acquisition(c, x, 5);
    const TimeSeriesCube d = apply_acquisition(c, x, 6);
    CHECK(a.data() == b.data());
    CHECK(a.data() != d.data());
    double ss = 0, sn = 0;
    for (std::size_t i = 0; i < c.data().size(); ++i) {
        ss += c.data()[i] * c.data()[i];
        sn += std::pow(a.data()[i] - c.data()[i], 2);
    }
    const double level = std::sqrt(sn / ss);
    CHECK(level >= 0.04);
    CHECK(level <= 0.06);
    x.noise = -1.0;
    CHECK_THROWS(apply_acquisition(c, x, 1));
}

TEST_CASE("metrics table") {
    ReportRow a{"cube, big", "test1", "strong", 0.04, 0.04, 16.5, std::sqrt(16.5), 16.0, 0.03125};
    ReportRow b{"null", "test1", "weak", 0.03, 0.0, std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(), 4.0, std::numeric_limits<double>::quiet_NaN()};
    ReportRow c{"sphere", "test2", "strong", 0.05, 0.05, 12.0, std::sqrt(12.0), 16.0, 0.25};
    const MetricsTable t = metrics_table({a, b, c});
    CHECK(t.csv.find("\"cube, big\"") != std::string::npos);
    CHECK(t.csv.find("\r\n") != std::string::npos);
    CHECK(t.text.find("average") != std::string::npos);
    // average of the rows that carry a relative error
    CHECK(t.csv.find("0.1406") != std::string::npos);
    CHECK(t.csv.find("null,test1,weak,0.03,0,,,4,") != std::string::npos);
    CHECK(metrics_table({b}).text.find("average") == std::string::npos);
    CHECK(csv_escape("a\"b") == "\"a\"\"b\"");
    CHECK(csv_escape("plain") == "plain");
}

TEST_CASE("scene kinds and true depth") {
    RunConfig cfg;
    CHECK(scene_kind(cfg.experiment.scene) == SceneKind::InAirRatio);
    Inclusion inc;
    inc.center = {0, 0, -0.03};
    inc.size = {0.06, 0.06, 0.06};
    cfg.experiment.scene.inclusions = {inc};
    CHECK(true_depth(cfg) == doctest::Approx(0.04));
    cfg.experiment.scene.half_space = HalfSpace{0.0, 4.0};
    CHECK(scene_kind(cfg.experiment.scene) == SceneKind::TwoLayer);
    CHECK(true_depth(cfg) == doctest::Approx(0.0));
}

TEST_CASE("empty scene: deterministic, nothing detected") {
    RunConfig cfg;
    cfg.experiment.noise = 0.01;
    PipelineOptions opt;
    opt.invert = false;
    const TimeSeriesCube r1 = synthesize_measurement(cfg, cfg.seed);
    const TimeSeriesCube r2 = synthesize_measurement(cfg, cfg.seed);
    CHECK(r1.data() == r2.data());
    const PipelineResult p = run_pipeline(cfg, r1, opt);
    CHECK(p.rows.empty());
    CHECK(p.artifacts.kind == TargetKind::Missed);
}
