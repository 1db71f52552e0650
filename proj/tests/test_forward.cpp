#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "gcm/fdtd.hpp"
#include "gcm/scene.hpp"
#include "gcm/waveform.hpp"

using namespace gcm;

TEST_CASE("waveform values") {
    Waveform w;
    CHECK(waveform_value(w, 0.0) == doctest::Approx(60.0));
    CHECK(std::abs(waveform_value(w, std::numbers::pi / (2 * 30.0))) < 1e-12);
    CHECK(waveform_value(w, 2 * std::numbers::pi / 30.0 + 1.0) == 0.0);
    CHECK_THROWS(waveform_value(w, -1e-9));
    Waveform bad;
    bad.omega = 0.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("hann burst has zero mean") {
    Waveform w;
    w.kind = Waveform::Kind::HannBurst;
    w.omega = 150.0;
    w.cycles = 2.0;
    auto f = [&](double t) { return waveform_value(w, t); };
    const double m = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, w.duration(), 15, 1e-13);
    CHECK(std::abs(m) < 1e-9);
}

TEST_CASE("tilde_f against adaptive quadrature") {
    for (auto kind : {Waveform::Kind::Cosine, Waveform::Kind::HannBurst}) {
        Waveform w;
        w.kind = kind;
        for (double s : {7.0, 8.0, 9.0}) {
            auto f = [&](double t) { return waveform_value(w, t) * std::exp(-s * t); };
            const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, w.duration(), 15, 1e-14);
            CHECK(tilde_f(w, s) == doctest::Approx(q).epsilon(1e-9));
        }
    }
    CHECK_THROWS(tilde_f(Waveform{}, 0.0));
}

namespace {
Grid3D column_grid(double h) { return build_grid(Box{{-h, -h, -0.3}, {h, h, 0.3}}, h); }
}  // namespace

TEST_CASE("plane wave matches the 1-D d'Alembert solution") {
    // u = 1/2 int_0^{t-|z-z0|} f = sin(w (t - |z - z0|)) on the pulse window
    const double h = 0.00125;
    const Grid3D g = column_grid(h);
    Waveform w;
    SimConfig cfg;
    cfg.dt = 0.0003;
    cfg.T = 0.5;
    RecordRequest rr;
    rr.planes = {0.04};
    const FdtdResult r = run_fdtd(homogeneous_medium(g), w, cfg, rr);
    const TimeSeriesCube& c = r.planes[0];
    double num = 0, den = 0;
    for (int it = 0; it < c.nt(); ++it) {
        const double tau = c.time(it) - 0.06;
        const double ex = (tau >= 0 && tau <= w.duration()) ? std::sin(30.0 * tau) : 0.0;
        num += (c(1, 1, it) - ex) * (c(1, 1, it) - ex);
        den += ex * ex;
    }
    CHECK(std::sqrt(num / den) <= 0.01);
}

TEST_CASE("linearity, causality and zero initial data") {
    const Grid3D g = build_grid(Box{{-0.2, -0.2, -0.2}, {0.2, 0.2, 0.2}}, 0.02);
    SceneSpec sc;
    sc.omega = Box{{-0.1, -0.1, -0.1}, {0.1, 0.1, 0.04}};
    Inclusion inc;
    inc.center = {0, 0, -0.02};
    inc.size = {0.06, 0.06, 0.06};
    inc.eps = 4.0;
    sc.inclusions = {inc};
    const MediumModel m = rasterize_scene(sc, g);
    Waveform w1, w2;
    w2.amplitude_scale = 2.0;
    SimConfig cfg;
    cfg.T = 0.6;
    RecordRequest rr;
    rr.planes = {0.04, -0.1};
    const FdtdResult a = run_fdtd(m, w1, cfg, rr);
    const FdtdResult b = run_fdtd(m, w2, cfg, rr);
    double mx = 0, err = 0;
    const TimeSeriesCube& deep = a.planes[1];
    for (int it = 0; it < 10; ++it) CHECK(deep(5, 5, it) == 0.0);
    for (std::size_t i = 0; i < a.planes[0].data().size(); ++i) {
        mx = std::max(mx, std::abs(a.planes[0].data()[i]));
        err = std::max(err, std::abs(2 * a.planes[0].data()[i] - b.planes[0].data()[i]));
    }
    CHECK(err <= 1e-12 * mx);
    const TimeSeriesCube& c = a.planes[0];
    for (int iy = 0; iy < c.nyd(); ++iy)
        for (int ix = 0; ix < c.nxd(); ++ix) {
            CHECK(c(ix, iy, 0) == 0.0);
            // the stencil moves information one node per step; the plane is 3 nodes from the source
            for (int it = 0; it < 3; ++it) CHECK(c(ix, iy, it) == 0.0);
        }
}

TEST_CASE("zero-contrast inclusion is bit-identical to the homogeneous run") {
    const Grid3D g = build_grid(Box{{-0.2, -0.2, -0.2}, {0.2, 0.2, 0.2}}, 0.02);
    SceneSpec sc;
    sc.omega = Box{{-0.1, -0.1, -0.1}, {0.1, 0.1, 0.04}};
    Inclusion inc;
    inc.size = {0.06, 0.06, 0.06};
    inc.eps = 1.0;
    sc.inclusions = {inc};
    SimConfig cfg;
    cfg.T = 0.4;
    RecordRequest rr;
    rr.planes = {0.04};
    const FdtdResult a = run_fdtd(rasterize_scene(sc, g), Waveform{}, cfg, rr);
    const FdtdResult b = run_fdtd(homogeneous_medium(g), Waveform{}, cfg, rr);
    CHECK(a.planes[0].data() == b.planes[0].data());
}

TEST_CASE("CFL violation is rejected before stepping") {
    const Grid3D g = build_grid(Box{{-0.1, -0.1, -0.1}, {0.1, 0.1, 0.2}}, 0.02);
    SimConfig cfg;
    cfg.dt = 0.02;
    CHECK_THROWS(run_fdtd(homogeneous_medium(g), Waveform{}, cfg, RecordRequest{}));
    MediumModel fast = homogeneous_medium(g, 0.25);
    cfg.dt = 0.0075;  // fine for c = 1, too large for c = 2
    CHECK_THROWS(run_fdtd(fast, Waveform{}, cfg, RecordRequest{}));
}

TEST_CASE("boundary recording bookkeeping") {
    const Grid3D g = build_grid(Box{{-0.5, -0.5, -0.3}, {0.5, 0.5, 0.3}}, 0.02);
    const IndexBox ob = g.aligned_box(Box{{-0.4, -0.4, -0.2}, {0.4, 0.4, 0.04}});
    SimConfig cfg;
    cfg.T = 0.3;
    RecordRequest rr;
    rr.boundary = ob;
    const FdtdResult r = run_fdtd(homogeneous_medium(g), Waveform{}, cfg, rr);
    const BoundaryTraces& bt = record_boundary(r, ob);
    CHECK(bt.nt == cfg.steps() + 1);
    CHECK(bt.values.size() == bt.boundary.size() * static_cast<std::size_t>(bt.nt));
    std::size_t total = 0;
    for (int f = 0; f < 6; ++f) total += bt.face_node_count(static_cast<Face>(f));
    CHECK(total == bt.boundary.size());
    // 41*41*13 box minus its 39*39*11 interior
    CHECK(bt.boundary.size() == 41u * 41 * 13 - 39u * 39 * 11);
    for (std::size_t b = 0; b < bt.boundary.size(); ++b) CHECK(bt.at(0, b) == 0.0);
    IndexBox other = ob;
    other.hi[2] -= 1;
    CHECK_THROWS(record_boundary(r, other));
}

TEST_CASE("homogeneous top face carries only the incident wave") {
    const Grid3D g = build_grid(Box{{-0.5, -0.5, -0.3}, {0.5, 0.5, 0.3}}, 0.02);
    const IndexBox ob = g.aligned_box(Box{{-0.4, -0.4, -0.2}, {0.4, 0.4, 0.04}});
    SimConfig cfg;
    cfg.T = 0.4;
    RecordRequest rr;
    rr.boundary = ob;
    rr.planes = {0.04};
    const FdtdResult r = run_fdtd(homogeneous_medium(g), Waveform{}, cfg, rr);
    const BoundaryTraces& bt = *r.boundary;
    const Grid3D& og = bt.omega_grid;
    double mx = 0.0, dev = 0.0;
    for (std::size_t b = 0; b < bt.boundary.size(); ++b) {
        if (bt.boundary.face(b) != Face::ZMax) continue;
        const auto ijk = og.unflatten(bt.boundary.node(b));
        for (int it = 0; it < bt.nt; ++it) {
            const double ref = r.planes[0](ijk[0] + 5, ijk[1] + 5, it);
            mx = std::max(mx, std::abs(ref));
            dev = std::max(dev, std::abs(bt.at(it, b) - ref));
        }
    }
    CHECK(mx > 0.5);
    CHECK(dev <= 1e-12 * mx);
}
