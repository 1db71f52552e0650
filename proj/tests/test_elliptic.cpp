#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcm/elliptic.hpp"

using namespace gcm;

namespace {
// u = sin(x) exp(y) cos(2z), b = (1, z, -x)
double u_exact(const Vec3& p) { return std::sin(p.x) * std::exp(p.y) * std::cos(2 * p.z); }

double manufactured_error(int n) {
    const double h = 1.0 / (n - 1);
    const Grid3D g(n, n, n, h, h, h, {0, 0, 0});
    EllipticProblem p{g, {ScalarField(g), ScalarField(g), ScalarField(g)}, ScalarField(g), {}};
    p.tolerance = 1e-12;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 q = g.node(i, j, k);
                const double u = u_exact(q);
                const double ux = std::cos(q.x) * std::exp(q.y) * std::cos(2 * q.z);
                const double uz = -2 * std::sin(q.x) * std::exp(q.y) * std::sin(2 * q.z);
                p.b[0](i, j, k) = 1.0;
                p.b[1](i, j, k) = q.z;
                p.b[2](i, j, k) = -q.x;
                // lap u = (-1 + 1 - 4) u
                p.f(i, j, k) = -4 * u + ux + q.z * u - q.x * uz;
            }
    ScalarField ex(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) ex(i, j, k) = u_exact(g.node(i, j, k));
    const BoxBoundary bb(g);
    p.g = bb.gather(ex);
    const EllipticResult r = solve_dirichlet(p);
    REQUIRE(r.converged);
    double err = 0.0;
    for (std::size_t m = 0; m < ex.values().size(); ++m) err = std::max(err, std::abs(ex.values()[m] - r.u.values()[m]));
    return err;
}
}  // namespace

TEST_CASE("manufactured solution converges at second order") {
    const double e1 = manufactured_error(11);
    const double e2 = manufactured_error(21);
    const double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.15));
    CHECK(e2 < 1e-3);
}

TEST_CASE("maximum principle for the Laplacian") {
    const Grid3D g(9, 9, 9, 0.1, 0.1, 0.1, {0, 0, 0});
    EllipticProblem p;
    p.grid = g;
    const BoxBoundary bb(g);
    p.g.resize(bb.size());
    for (std::size_t b = 0; b < bb.size(); ++b) {
        const auto ijk = g.unflatten(bb.node(b));
        p.g[b] = std::sin(3.0 * ijk[0]) + 0.5 * ijk[2];
    }
    const EllipticResult r = solve_dirichlet(p);
    REQUIRE(r.converged);
    const double lo = *std::min_element(p.g.begin(), p.g.end());
    const double hi = *std::max_element(p.g.begin(), p.g.end());
    for (double v : r.u.values()) {
        CHECK(v >= lo - 1e-10);
        CHECK(v <= hi + 1e-10);
    }
    // boundary values are copied, residual vanishes inside
    CHECK(bb.gather(r.u) == p.g);
    const ScalarField res = elliptic_residual(p, r.u);
    for (double v : res.values()) CHECK(std::abs(v) < 1e-5);
}

TEST_CASE("inconsistent inputs are rejected") {
    const Grid3D g(5, 5, 5, 0.1, 0.1, 0.1, {0, 0, 0});
    EllipticProblem p;
    p.grid = g;
    p.g.assign(3, 0.0);
    CHECK_THROWS(solve_dirichlet(p));
}
