#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gcm/fdtd.hpp"
#include "gcm/helmholtz.hpp"
#include "gcm/laplace.hpp"
#include "gcm/scene.hpp"

using namespace gcm;

TEST_CASE("trapezoid transform of a decaying exponential") {
    const double dt = 1e-3;
    std::vector<double> u(5001);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = std::exp(-static_cast<double>(k) * dt);
    for (double s : {7.0, 9.0}) {
        const double exact = (1.0 - std::exp(-(s + 1.0) * 5.0)) / (s + 1.0);
        CHECK(laplace_transform(u, dt, s) == doctest::Approx(exact).epsilon(1e-6));
        CHECK(laplace_transform(u, dt, s, 0.1) == doctest::Approx(std::exp(-0.1 * s) * exact).epsilon(1e-6));
    }
}

TEST_CASE("free-space w0 and its tail") {
    CHECK(compute_w0(0.04, 0.1, 8.0) == doctest::Approx(std::exp(-0.48) / 16.0));
    CHECK(compute_w0(0.16, 0.1, 8.0) == doctest::Approx(compute_w0(0.04, 0.1, 8.0)));
    const double s = 8.0, z = -0.1, z0 = 0.1;
    CHECK(v0_exact(z, z0, s) == doctest::Approx(std::log(compute_w0(z, z0, s)) / (s * s)));
    const double d = 1e-5;
    const double fd = (v0_exact(z, z0, s + d) - v0_exact(z, z0, s - d)) / (2 * d);
    CHECK(dv0_ds_exact(z, z0, s) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("pseudo-frequency grid") {
    PseudoFrequencyGrid sg;
    sg.validate();
    CHECK(sg.N() == 40);
    CHECK(sg.s(0) == 9.0);
    CHECK(sg.s(sg.N()) == doctest::Approx(7.0));
    PseudoFrequencyGrid bad;
    bad.s_bar = 6.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("w from a homogeneous run approaches w0") {
    const double h = 0.005;
    const Grid3D g = build_grid(Box{{-h, -h, -0.3}, {h, h, 0.3}}, h);
    Waveform w;
    SimConfig cfg;
    cfg.dt = 0.002;
    cfg.T = 1.2;
    RecordRequest rr;
    rr.planes = {0.04, -0.1};
    const FdtdResult r = run_fdtd(homogeneous_medium(g), w, cfg, rr);
    for (std::size_t p = 0; p < 2; ++p) {
        const double z = rr.planes[p];
        const std::vector<double> wv = w_from_cube(r.planes[p], w, 8.0);
        for (double v : wv) CHECK(v == doctest::Approx(compute_w0(z, 0.1, 8.0)).epsilon(0.02));
    }
}

TEST_CASE("direct Laplace-domain solve agrees with the transformed time run") {
    const Grid3D g = build_grid(Box{{-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3}}, 0.02);
    SceneSpec sc;
    sc.omega = Box{{-0.2, -0.2, -0.2}, {0.2, 0.2, 0.04}};
    Inclusion inc;
    inc.center = {0, 0, -0.03};
    inc.size = {0.08, 0.08, 0.06};
    inc.eps = 4.0;
    sc.inclusions = {inc};
    const MediumModel m = rasterize_scene(sc, g);
    Waveform w;
    SimConfig cfg;
    cfg.T = 1.2;
    RecordRequest rr;
    rr.laplace_s = {8.0};
    const FdtdResult r = run_fdtd(m, w, cfg, rr);
    const ScalarField wt = w_from_transform(r.laplace[0], w, 8.0);
    const ScalarField wd = solve_w_direct(m.eps, 8.0, cfg);
    double worst = 0.0;
    const IndexBox ob = g.aligned_box(sc.omega);
    for (int i = ob.lo[0]; i <= ob.hi[0]; ++i)
        for (int j = ob.lo[1]; j <= ob.hi[1]; ++j)
            for (int k = ob.lo[2]; k <= ob.hi[2]; ++k)
                worst = std::max(worst, std::abs(wt(i, j, k) - wd(i, j, k)) / wd(i, j, k));
    CHECK(worst <= 0.03);
}

TEST_CASE("positivity handling") {
    const Grid3D g(3, 3, 3, 1, 1, 1, {});
    ScalarField lu(g, 1.0);
    lu(1, 1, 1) = -1.0;
    Waveform w;
    CHECK_THROWS(w_from_transform(lu, w, 8.0));
    PositivityReport rep;
    const ScalarField wf = w_from_transform(lu, w, 8.0, 1e-6, &rep);
    CHECK(rep.nonpositive == 1);
    CHECK(rep.checked == 27);
    CHECK(wf(1, 1, 1) == 1e-6);
    CHECK(wf(0, 0, 0) == doctest::Approx(1.0 / tilde_f(w, 8.0)));
    const ScalarField v = tail_from_w(wf, 9.0);
    CHECK(v(0, 0, 0) == doctest::Approx(std::log(wf(0, 0, 0)) / 81.0));
}

TEST_CASE("boundary psi of a homogeneous medium matches the free-space value") {
    const Grid3D g = build_grid(Box{{-0.5, -0.5, -0.3}, {0.5, 0.5, 0.3}}, 0.02);
    const IndexBox ob = g.aligned_box(Box{{-0.4, -0.4, -0.2}, {0.4, 0.4, 0.04}});
    Waveform w;
    SimConfig cfg;
    RecordRequest rr;
    rr.boundary = ob;
    const FdtdResult r = run_fdtd(homogeneous_medium(g), w, cfg, rr);
    PseudoFrequencyGrid sg;
    const BoundaryData bd = psi_from_boundary(*r.boundary, w, sg);
    CHECK(bd.rejected == 0);
    for (int n : {0, 20, 40}) {
        const std::vector<double>& psi = bd.psi_at(n);
        for (std::size_t b = 0; b < bd.boundary.size(); ++b) {
            if (bd.boundary.face(b) != Face::ZMax) continue;
            CHECK(psi[b] == doctest::Approx(dv0_ds_exact(0.04, 0.1, sg.s(n))).epsilon(0.02));
        }
    }
}
