#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gcm/grid.hpp"
#include "gcm/scene.hpp"

using namespace gcm;

TEST_CASE("build_grid node counts") {
    Grid3D g = build_grid(Box{{-0.5, -0.5, -0.3}, {0.5, 0.5, 0.3}}, 0.02);
    CHECK(g.nx() == 51);
    CHECK(g.ny() == 51);
    CHECK(g.nz() == 31);
    Grid3D u = build_grid(Box{{0, 0, 0}, {1, 1, 1}}, 0.5);
    CHECK(u.nx() == 3);
    CHECK(u.ny() == 3);
    CHECK(u.nz() == 3);
    CHECK_THROWS_AS(build_grid(Box{{0, 0, 0}, {1, 1, 1}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Box{{0, 0, 0}, {1, 1, 1}}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(Box{{0, 0, 0}, {0, 1, 1}}, 0.5), std::invalid_argument);
}

TEST_CASE("node coordinates are origin plus index times spacing") {
    Grid3D g = build_grid(Box{{-0.5, -0.5, -0.3}, {0.5, 0.5, 0.3}}, 0.02);
    for (int i : {0, 7, 50}) {
        CHECK(g.x(i) == -0.5 + i * 0.02);
        CHECK(g.z(i % 31) == -0.3 + (i % 31) * 0.02);
    }
    auto ijk = g.unflatten(g.index(3, 4, 5));
    CHECK(ijk[0] == 3);
    CHECK(ijk[1] == 4);
    CHECK(ijk[2] == 5);
}

TEST_CASE("omega is an index box of G") {
    Grid3D g = build_grid(Box{{-0.5, -0.5, -0.3}, {0.5, 0.5, 0.3}}, 0.02);
    IndexBox ob = g.aligned_box(Box{{-0.4, -0.4, -0.2}, {0.4, 0.4, 0.04}});
    CHECK(ob.count(0) == 41);
    CHECK(ob.count(2) == 13);
    CHECK(ob.lo[2] == 5);
    CHECK_THROWS(g.aligned_box(Box{{-0.41, -0.4, -0.2}, {0.4, 0.4, 0.04}}));
}

TEST_CASE("boundary enumeration covers each boundary node once") {
    Grid3D g(4, 5, 6, 1, 1, 1, {});
    BoxBoundary bb(g);
    CHECK(bb.size() == 4u * 5 * 6 - 2u * 3 * 4);
    ScalarField f(g, 0.0);
    std::vector<double> ones(bb.size(), 1.0);
    bb.scatter(ones, f);
    double sum = 0;
    for (double v : f.values()) sum += v;
    CHECK(sum == doctest::Approx(bb.size()));
    CHECK(f(1, 1, 1) == 0.0);
}

TEST_CASE("restrict and insert round trip") {
    Grid3D g(5, 5, 5, 0.1, 0.1, 0.1, {});
    ScalarField f(g);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = static_cast<double>(n);
    IndexBox b{{1, 1, 2}, {3, 4, 4}};
    ScalarField s = f.restrict_to(b);
    CHECK(s.grid().nx() == 3);
    CHECK(s(0, 0, 0) == f(1, 1, 2));
    ScalarField z(g, 0.0);
    z.insert(b, s);
    CHECK(z(3, 4, 4) == f(3, 4, 4));
    CHECK(z(0, 0, 0) == 0.0);
}

namespace {
SceneSpec base_scene() {
    SceneSpec s;
    s.omega = Box{{-0.4, -0.4, -0.2}, {0.4, 0.4, 0.04}};
    s.source_z = 0.1;
    return s;
}
Grid3D g_grid() { return build_grid(Box{{-0.5, -0.5, -0.3}, {0.5, 0.5, 0.3}}, 0.02); }
}  // namespace

TEST_CASE("rasterize empty scene") {
    MediumModel m = rasterize_scene(base_scene(), g_grid());
    CHECK(m.eps.min() == 1.0);
    CHECK(m.eps.max() == 1.0);
}

TEST_CASE("rasterize sphere") {
    SceneSpec s = base_scene();
    Inclusion sp;
    sp.shape = Shape::Sphere;
    sp.center = {0.0, 0.0, -0.1};
    sp.radius = 0.05;
    sp.eps = 4.0;
    s.inclusions.push_back(sp);
    Grid3D g = g_grid();
    MediumModel m = rasterize_scene(s, g);
    const int ic = g.plane_index(0, 0.0), kc = g.plane_index(2, -0.1);
    CHECK(m.eps(ic, ic, kc) == 4.0);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j)
            for (int k = 0; k < g.nz(); ++k) {
                const Vec3 p = g.node(i, j, k);
                const double r = std::sqrt(p.x * p.x + p.y * p.y + (p.z + 0.1) * (p.z + 0.1));
                if (r > 0.05 + 1e-6) REQUIRE(m.eps(i, j, k) == 1.0);
            }
    m.require_unit_outside(g.aligned_box(s.omega));
}

TEST_CASE("later inclusions overwrite earlier ones") {
    SceneSpec s = base_scene();
    Inclusion b;
    b.center = {0, 0, -0.1};
    b.size = {0.1, 0.1, 0.1};
    b.eps = 4.0;
    Inclusion sp;
    sp.shape = Shape::Sphere;
    sp.center = {0.04, 0, -0.1};
    sp.radius = 0.04;
    sp.eps = 25.0;
    s.inclusions = {b, sp};
    Grid3D g = g_grid();
    MediumModel m = rasterize_scene(s, g);
    CHECK(m.eps(g.plane_index(0, 0.04), g.plane_index(1, 0.0), g.plane_index(2, -0.1)) == 25.0);
    CHECK(m.eps(g.plane_index(0, -0.04), g.plane_index(1, 0.0), g.plane_index(2, -0.1)) == 4.0);
}

TEST_CASE("cylinder along an axis") {
    Inclusion c;
    c.shape = Shape::Cylinder;
    c.center = {0, 0, 0};
    c.radius = 0.1;
    c.height = 0.4;
    c.axis = 1;
    CHECK(c.contains({0.0, 0.19, 0.0}));
    CHECK_FALSE(c.contains({0.0, 0.21, 0.0}));
    CHECK_FALSE(c.contains({0.0, 0.0, 0.11}));
    Box bb = c.bounding_box();
    CHECK(bb.hi.y == doctest::Approx(0.2));
    CHECK(bb.hi.x == doctest::Approx(0.1));
}

TEST_CASE("scene validation") {
    SceneSpec s = base_scene();
    Inclusion b;
    b.center = {0.38, 0, -0.1};
    b.size = {0.1, 0.1, 0.1};
    b.eps = 4.0;
    s.inclusions = {b};
    CHECK_THROWS_AS(rasterize_scene(s, g_grid()), std::invalid_argument);
    s.inclusions[0].center.x = 0.0;
    s.inclusions[0].eps = 30.0;
    CHECK_THROWS_AS(rasterize_scene(s, g_grid()), std::invalid_argument);
    s.inclusions[0].eps = 4.0;
    s.source_z = 0.0;
    CHECK_THROWS_AS(rasterize_scene(s, g_grid()), std::invalid_argument);
    CHECK(parse_shape("cylinder") == Shape::Cylinder);
    CHECK_THROWS(parse_shape("cone"));
}

TEST_CASE("medium bound validation") {
    MediumModel m = homogeneous_medium(Grid3D(3, 3, 3, 1, 1, 1, {}));
    m.eps(1, 1, 1) = 0.5;
    CHECK_THROWS_AS(m.validate(), std::domain_error);
    CHECK_THROWS_AS(m.require_unit_outside(IndexBox{{0, 0, 0}, {0, 0, 0}}), std::domain_error);
}
