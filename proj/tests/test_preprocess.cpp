#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "gcm/laplace.hpp"
#include "gcm/preprocess.hpp"

using namespace gcm;

namespace {
double pulse(double t) {
    const double x = (t - 0.08) / 0.015;
    return -2 * x * std::exp(-x * x);
}

// point source at z = -zs; u = pulse(t - r) / (4 pi r) solves the free wave equation
TimeSeriesCube point_source_plane(double z, double zs, int n, double dx, int nt, double dt) {
    TimeSeriesCube c(n, n, nt, dt, dx, dx, z, 0.0, -(n - 1) / 2.0 * dx, -(n - 1) / 2.0 * dx);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double r = std::sqrt(c.x(ix) * c.x(ix) + c.y(iy) * c.y(iy) + (z + zs) * (z + zs));
            for (int it = 0; it < nt; ++it) c(ix, iy, it) = pulse(it * dt - r) / (4 * M_PI * r);
        }
    return c;
}

double rel_l2(const TimeSeriesCube& a, const TimeSeriesCube& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        num += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
        den += b.data()[i] * b.data()[i];
    }
    return std::sqrt(num / den);
}

double bump(double t, double c) { return std::exp(-std::pow((t - c) / 0.0015, 2)); }

// single-detector trace built from signed bumps
TimeSeriesCube bumps(const std::vector<std::pair<double, double>>& list) {
    TimeSeriesCube c(1, 1, 400, 0.0005, 0.01, 0.01, 0.0);
    for (int it = 0; it < c.nt(); ++it)
        for (auto [t, a] : list) c(0, 0, it) += a * bump(it * c.dt(), t);
    return c;
}

const std::vector<std::pair<double, double>> kWeak = {{0.040, 0.3}, {0.045, -1.0}, {0.050, 0.8}, {0.055, -0.4},
                                                      {0.060, 0.2}, {0.065, -0.3}, {0.075, 0.5}, {0.090, -0.2}};
}  // namespace

TEST_CASE("offset and time-zero corrections") {
    TimeSeriesCube c(2, 1, 10, 0.1, 0.01, 0.01, 0.0);
    for (int it = 0; it < 10; ++it) {
        c(0, 0, it) = 3.0 + it;
        c(1, 0, it) = it == 6 ? 1.0 : 0.0;
    }
    const TimeSeriesCube o = offset_correct(c);
    double m = 0;
    for (int it = 0; it < 10; ++it) m += o(0, 0, it);
    CHECK(std::abs(m) < 1e-12);
    CHECK(o(0, 0, 0) == doctest::Approx(-4.5));
    const TimeSeriesCube z = time_zero_correct(c, 0.2);
    CHECK(z(1, 0, 4) == 1.0);
    CHECK(z(0, 0, 9) == 0.0);
    CHECK(z(0, 0, 0) == 5.0);
    CHECK_THROWS(time_zero_correct(c, -0.1));
    CHECK_THROWS(time_zero_correct(c, 1.0));
    const TimeSeriesCube h = shift_source(c, 0.05);
    CHECK(h(0, 0, 2) == doctest::Approx(5.5));
    const TimeSeriesCube back = shift_source(c, -0.2);
    CHECK(back(1, 0, 8) == 1.0);
    CHECK(back(0, 0, 1) == 0.0);
}

TEST_CASE("calibration") {
    TimeSeriesCube sim(3, 3, 20, 0.01, 0.01, 0.01, 0.0);
    for (int it = 0; it < 20; ++it)
        for (int d = 0; d < 9; ++d) sim(d % 3, d / 3, it) = std::sin(0.3 * it) * (d == 4 ? 2.0 : 1.0);
    const TimeSeriesCube meas = calibrate(sim, 0.5);
    CHECK(estimate_calibration_factor(meas, sim) == doctest::Approx(2.0));
    CHECK(rel_l2(calibrate(meas, 2.0), sim) < 1e-15);
    CHECK_THROWS(calibrate(sim, 0.0));
    TimeSeriesCube other(2, 3, 20, 0.01, 0.01, 0.01, 0.0);
    CHECK_THROWS(estimate_calibration_factor(other, sim));
}

TEST_CASE("f-k propagation of a laterally uniform upgoing wave is a pure delay") {
    const int nt = 300;
    const double dt = 0.002;
    TimeSeriesCube b(8, 8, nt, dt, 0.01, 0.01, 0.1);
    TimeSeriesCube a = b;
    a.set_plane_z(0.0);
    for (int it = 0; it < nt; ++it)
        for (int d = 0; d < 64; ++d) {
            b(d % 8, d / 8, it) = pulse(it * dt - 0.2);
            a(d % 8, d / 8, it) = pulse(it * dt - 0.1);
        }
    for (bool mirror : {false, true}) {
        FkOptions o;
        o.mirror = mirror;
        const TimeSeriesCube p = propagate_fk(b, 0.0, o);
        CHECK(p.plane_z() == 0.0);
        CHECK(rel_l2(p, a) < 1e-3);
    }
    CHECK(rel_l2(propagate_fk(b, 0.1), b) < 1e-12);
    CHECK_THROWS(propagate_fk(b, 0.2));
}

TEST_CASE("f-k propagation of a distant point source") {
    const int n = 129;
    const TimeSeriesCube b = point_source_plane(0.1, 1.0, n, 0.01, 1000, 0.002);
    const TimeSeriesCube a = point_source_plane(0.0, 1.0, n, 0.01, 1000, 0.002);
    FkOptions o;
    o.mirror = true;
    const TimeSeriesCube p = propagate_fk(b, 0.0, o);
    double num = 0, den = 0;
    const int c = n / 2;
    for (int iy = c - 16; iy <= c + 16; ++iy)
        for (int ix = c - 16; ix <= c + 16; ++ix)
            for (int it = 0; it < 1000; ++it) {
                num += std::pow(p(ix, iy, it) - a(ix, iy, it), 2);
                den += a(ix, iy, it) * a(ix, iy, it);
            }
    // evanescent content is dropped, so the match is only approximate
    CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("temporal band limit") {
    TimeSeriesCube c(4, 4, 300, 0.002, 0.01, 0.01, 0.1);
    for (int it = 0; it < 300; ++it) {
        const double t = it * 0.002;
        const double hf = std::sin(1256.0 * t) * std::exp(-std::pow((t - 0.3) / 0.05, 2));
        for (int d = 0; d < 16; ++d) c(d % 4, d / 4, it) = pulse(t) + hf;
    }
    FkOptions o;
    o.mirror = true;
    o.max_omega = 500.0;
    const TimeSeriesCube p = propagate_fk(c, 0.1, o);
    for (int it = 0; it < 300; ++it) CHECK(std::abs(p(1, 2, it) - pulse(it * 0.002)) < 1e-6);
}

TEST_CASE("f-k propagation is linear") {
    const TimeSeriesCube u = point_source_plane(0.1, 0.3, 17, 0.01, 200, 0.002);
    const TimeSeriesCube v = point_source_plane(0.1, 0.5, 17, 0.01, 200, 0.002);
    TimeSeriesCube sum = u;
    for (std::size_t i = 0; i < sum.data().size(); ++i) sum.data()[i] = 2 * u.data()[i] - 3 * v.data()[i];
    const TimeSeriesCube pu = propagate_fk(u, 0.02), pv = propagate_fk(v, 0.02), ps = propagate_fk(sum, 0.02);
    TimeSeriesCube comb = pu;
    for (std::size_t i = 0; i < comb.data().size(); ++i) comb.data()[i] = 2 * pu.data()[i] - 3 * pv.data()[i];
    CHECK(rel_l2(ps, comb) < 1e-12);
}

TEST_CASE("peak finding") {
    const TimeSeriesCube c = bumps(kWeak);
    const auto pk = find_peaks(c.trace(0, 0), 0.05);
    REQUIRE(pk.size() == kWeak.size());
    for (std::size_t i = 0; i < pk.size(); ++i) {
        CHECK(pk[i].index * c.dt() == doctest::Approx(kWeak[i].first));
        CHECK(pk[i].sign == (kWeak[i].second > 0 ? 1 : -1));
    }
    CHECK(find_peaks(c.trace(0, 0), 0.35).size() == 4);
    CHECK(find_peaks(std::vector<double>(10, 0.0)).empty());
}

TEST_CASE("depth from the sand-to-target delay") {
    const DepthEstimate e = estimate_depth(bumps(kWeak));
    REQUIRE(e.found);
    CHECK(e.first_negative == 1);
    CHECK(e.sand_peak == 1);
    CHECK(e.target_peak == 6);
    CHECK(e.main_peak == 6);
    CHECK(e.delay == doctest::Approx(0.03));
    CHECK(e.depth == doctest::Approx(0.06));
    DepthOptions o;
    o.depth_factor = 0.125;
    CHECK(estimate_depth(bumps(kWeak), o).depth == doctest::Approx(0.0075));
    const DepthEstimate few = estimate_depth(bumps({{0.04, -1.0}, {0.05, 0.5}, {0.06, -0.2}}));
    CHECK_FALSE(few.found);
}

TEST_CASE("weak, strong and missed targets") {
    ExtractOptions deep;
    deep.max_weak_depth = 0.1;
    const TimeSeriesCube weak = bumps(kWeak);
    const Extraction w = classify_and_extract(weak, estimate_depth(weak), deep);
    CHECK(w.cls.kind == TargetKind::Weak);
    CHECK(w.cls.first_peak_sign == 1);
    REQUIRE(w.cls.first_peak[0] >= 0);
    CHECK(w.cls.first_peak[0] * weak.dt() == doctest::Approx(0.075));
    for (int it = 0; it < w.cls.first_peak[0]; ++it) CHECK(w.cube(0, 0, it) == 0.0);
    for (int it = w.cls.first_peak[0]; it < weak.nt(); ++it) CHECK(w.cube(0, 0, it) == weak(0, 0, it));

    // positive main lobe deeper than the weak limit is rejected
    const Extraction m = classify_and_extract(weak, estimate_depth(weak));
    CHECK(m.cls.kind == TargetKind::Missed);
    for (double v : m.cube.data()) CHECK(v == 0.0);

    auto list = kWeak;
    list[5].second = -1.5;
    const TimeSeriesCube strong = bumps(list);
    const DepthEstimate se = estimate_depth(strong);
    CHECK(se.main_peak == 5);
    CHECK(se.depth == doctest::Approx(0.04));
    const Extraction s = classify_and_extract(strong, se);
    CHECK(s.cls.kind == TargetKind::Strong);
    CHECK(s.cls.first_peak_sign == -1);
    CHECK(s.cls.first_peak[0] * strong.dt() == doctest::Approx(0.065));
}

TEST_CASE("ring order visits every detector once") {
    const auto ord = ring_order(5, 4, 1, 2);
    CHECK(ord.size() == 20);
    CHECK(ord.front() == std::make_pair(1, 2));
    std::vector<int> seen(20, 0);
    int last = 0;
    for (auto [ix, iy] : ord) {
        ++seen[iy * 5 + ix];
        const int r = std::max(std::abs(ix - 1), std::abs(iy - 2));
        CHECK(r >= last);
        last = r;
    }
    for (int s : seen) CHECK(s == 1);
}

TEST_CASE("cross section from the Laplace-domain amplitude") {
    TimeSeriesCube c(6, 6, 100, 0.01, 0.02, 0.02, 0.0, 0.0, -0.05, -0.05);
    for (int iy = 0; iy < 6; ++iy)
        for (int ix = 0; ix < 6; ++ix) {
            const double amp = (ix >= 2 && ix <= 3 && iy >= 1 && iy <= 3) ? 1.0 : 0.3;
            for (int it = 0; it < 100; ++it) c(ix, iy, it) = amp * bump(it * 0.01, 0.2);
        }
    const CrossSection cs = estimate_cross_section(c, 8.0, 0.5);
    CHECK(cs.count() == 6);
    CHECK(cs.contains(-0.01, -0.01));
    CHECK_FALSE(cs.contains(-0.05, -0.05));
    double x, y, x0, x1, y0, y1;
    cs.centroid(x, y);
    CHECK(x == doctest::Approx(0.0));
    CHECK(y == doctest::Approx(-0.01));
    cs.bounds(x0, x1, y0, y1);
    CHECK(x0 == doctest::Approx(-0.02));
    CHECK(x1 == doctest::Approx(0.02));
    CHECK(y0 == doctest::Approx(-0.04));
    CHECK(y1 == doctest::Approx(0.02));
    CHECK(estimate_cross_section(c, 8.0, 0.2).count() == 36);
    CHECK(estimate_cross_section(TimeSeriesCube(2, 2, 5, 0.1, 1, 1, 0), 8.0).empty());
    CHECK_THROWS(estimate_cross_section(c, 8.0, 0.0));
}
